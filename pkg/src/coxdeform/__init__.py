"""Deformation spaces of orderable labeled Coxeter 3-polytopes."""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("COXDEFORM_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("coxdeform._ckernels", ["src/coxdeform/_ckernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:  # fall back to the pure-Python kernels
        ext_modules = []

setup(ext_modules=ext_modules)

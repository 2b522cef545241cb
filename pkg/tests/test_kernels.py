import os
import random
import subprocess
import sys

import pytest

from coxdeform import _kernels_py, kernels
from coxdeform.catalog import load_catalog

try:
    from coxdeform import _ckernels
except ImportError:
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def _arrays(p):
    rs = p.sorted_ridges()
    return [i - 1 for i, _ in rs], [j - 1 for _, j in rs]


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@needs_ext
@pytest.mark.parametrize("n", [4, 5, 6])
def test_graph_filter_backends_agree(n):
    assert _ckernels.filter_dual_graphs(n) == _kernels_py.filter_dual_graphs(n)


@needs_ext
def test_greedy_backends_agree_on_random_labelings():
    rng = random.Random(11)
    for p in load_catalog(7):
        ra, rb = _arrays(p)
        for _ in range(60):
            mask = rng.getrandbits(len(ra))
            assert _ckernels.greedy_order(p.f, ra, rb, mask) == _kernels_py.greedy_order(p.f, ra, rb, mask)


@needs_ext
def test_count_backends_agree_with_ranges():
    for p in load_catalog(6):
        ra, rb = _arrays(p)
        n = 1 << len(ra)
        assert _ckernels.count_orderable(p.f, ra, rb) == _kernels_py.count_orderable(p.f, ra, rb)
        half = n // 3
        assert (_ckernels.count_orderable(p.f, ra, rb, 0, half) + _ckernels.count_orderable(p.f, ra, rb, half, n)
                == _ckernels.count_orderable(p.f, ra, rb))


def test_three_connectivity():
    k4 = [0b1110, 0b1101, 0b1011, 0b0111]
    assert _kernels_py.is_three_connected(4, k4)
    cycle = [0b1010, 0b0101, 0b1010, 0b0101]
    assert not _kernels_py.is_three_connected(4, cycle)


def test_pure_python_fallback_selected_by_env():
    env = dict(os.environ, COXDEFORM_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from coxdeform import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"

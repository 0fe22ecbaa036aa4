"""Backend equivalence: the compiled kernels and the numpy fallback must
agree to float precision on identical inputs."""

import numpy as np
import pytest

from memkin import _kernels_py
from memkin._backend import HAS_COMPILED

if HAS_COMPILED:
    from memkin import _kernels
else:  # pragma: no cover - exercised only on builds without a compiler
    _kernels = None

needs_compiled = pytest.mark.skipif(not HAS_COMPILED,
                                    reason="compiled kernels unavailable")


def _random_rates(rng, batch):
    return [10.0 ** rng.uniform(-2, 4, size=batch) for _ in range(6)]


@needs_compiled
def test_solver_backends_agree():
    rng = np.random.default_rng(123)
    rates = _random_rates(rng, 257)
    a = _kernels.solve_chain_batched(*rates, 30)
    b = _kernels_py.solve_chain_batched(*rates, 30)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-16)


@needs_compiled
def test_solver_backends_agree_minimal_chain():
    rng = np.random.default_rng(7)
    rates = _random_rates(rng, 64)
    a = _kernels.solve_chain_batched(*rates, 2)
    b = _kernels_py.solve_chain_batched(*rates, 2)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-16)


@needs_compiled
def test_staircase_backends_agree():
    rng = np.random.default_rng(5)
    levels = np.sort(rng.uniform(0, 20000, size=4096))
    centers = np.sort(rng.uniform(-2000, 18000, size=30))
    a = _kernels.staircase_fraction(levels, centers, 450.0)
    b = _kernels_py.staircase_fraction(levels, centers, 450.0)
    assert np.allclose(a, b, rtol=1e-14, atol=1e-15)


def test_fallback_normalization():
    rng = np.random.default_rng(17)
    rates = _random_rates(rng, 100)
    occ = _kernels_py.solve_chain_batched(*rates, 30)
    assert np.allclose(occ.sum(axis=1), 1.0, atol=1e-12)
    assert occ.min() > -1e-14


def test_pure_env_selects_fallback(tmp_path):
    import subprocess
    import sys
    code = ("import os; os.environ['MEMKIN_PURE']='1'; "
            "import memkin; print(memkin.HAS_COMPILED)")
    out = subprocess.run([sys.executable, "-c", code],
                         capture_output=True, text=True)
    assert out.stdout.strip() == "False"

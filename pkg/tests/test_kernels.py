import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedqc import kernels

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


def _random_system(rng, n_vars):
    n_masks = int(rng.integers(0, 12))
    masks = np.array([int(rng.integers(0, 1 << n_vars)) for _ in range(n_masks)], dtype=np.int64)
    chi = rng.integers(0, 8, size=n_vars).astype(np.int64)
    return masks, chi


@needs_numba
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 14))
def test_count_paths_backends_agree(seed, n_vars):
    masks, chi = _random_system(np.random.default_rng(seed), n_vars)
    a = kernels.count_paths_numba(n_vars, masks, chi)
    b = kernels.count_paths_numpy(n_vars, masks, chi)
    assert np.array_equal(a, b)
    assert a.sum() == 2**n_vars


def test_count_paths_by_hand():
    # psi = x0 x1 over two bits, chi = (1, 0): phases 0,1 for x0 = 0,1
    counts = kernels.count_paths_numpy(2, np.array([0b11]), np.array([1, 0]))
    want = np.zeros((8, 2), dtype=np.int64)
    want[0, 0] = 2  # x0 = 0
    want[1, 0] = 1  # x0 = 1, x1 = 0
    want[1, 1] = 1  # x0 = x1 = 1
    assert np.array_equal(counts, want)
    # the empty monomial is the constant 1
    assert np.array_equal(kernels.count_paths_numpy(1, np.array([0]), np.array([0]))[0], [0, 2])


@needs_numba
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 62))
def test_evaluate_paths_backends_agree(seed, n_vars):
    rng = np.random.default_rng(seed)
    masks, chi = _random_system(rng, min(n_vars, 62))
    xs = rng.integers(0, 1 << n_vars, size=500, dtype=np.int64)
    pa, ha = kernels.evaluate_paths_numba(xs, masks, chi)
    pb, hb = kernels.evaluate_paths_numpy(xs, masks, chi)
    assert np.array_equal(pa, pb) and np.array_equal(ha, hb)


@needs_numba
@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-1, 1), st.integers(1, 6))
def test_dqc1_entropy_backends_agree(seed, alpha, n):
    rng = np.random.default_rng(seed)
    phases = rng.uniform(-np.pi, np.pi, size=2**n)
    th = rng.uniform(0, np.pi, size=17)
    ph = rng.uniform(0, 2 * np.pi, size=17)
    a = kernels.dqc1_conditional_entropy_numba(phases, alpha, th, ph)
    b = kernels.dqc1_conditional_entropy_numpy(phases, alpha, th, ph)
    assert np.allclose(a, b, rtol=0, atol=1e-12)


def test_dqc1_entropy_maximally_mixed():
    # alpha = 0: both outcomes leave I/N, entropy n bits
    out = kernels.dqc1_conditional_entropy_numpy(np.zeros(8), 0.0, [0.3, 1.0], [0.0, 2.0])
    assert np.allclose(out, 3)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, MIXEDQC_NUMBA="0")
    code = "from mixedqc import kernels; print(kernels.BACKEND, kernels.count_paths is kernels.count_paths_numpy)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]


@needs_numba
def test_default_backend_is_numba():
    env = {k: v for k, v in os.environ.items() if k != "MIXEDQC_NUMBA"}
    code = "from mixedqc import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"

"""Hot inner loops, each with a numba ``@njit`` version and a pure-numpy version.

The dispatching names (``count_paths``, ``evaluate_paths``,
``dqc1_conditional_entropy``) point at the numba kernels unless numba is
missing or the environment variable ``MIXEDQC_NUMBA=0`` is set.  Both
implementations are always importable so tests and ``benchmarks/`` can compare
them directly.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("MIXEDQC_NUMBA", "1") != "0"

_CHUNK = 1 << 20


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


# --------------------------------------------------------------------------
# Path sums: psi/phi is a Z2 polynomial given as a list of monomial bitmasks,
# chi a Z8-linear form given by one coefficient per path bit.
# --------------------------------------------------------------------------


@_njit
def _count_paths_nb(n_vars, masks, chi):
    counts = np.zeros((8, 2), dtype=np.int64)
    n_masks = masks.shape[0]
    total = np.int64(1) << n_vars
    for x in range(total):
        par = 0
        for m in range(n_masks):
            mk = masks[m]
            if (x & mk) == mk:
                par ^= 1
        c = 0
        for v in range(n_vars):
            if (x >> v) & 1:
                c += chi[v]
        counts[c & 7, par] += 1
    return counts


@_njit
def _evaluate_paths_nb(xs, masks, chi):
    n = xs.shape[0]
    par = np.zeros(n, dtype=np.int8)
    ph = np.zeros(n, dtype=np.int8)
    n_masks = masks.shape[0]
    n_vars = chi.shape[0]
    for i in range(n):
        x = xs[i]
        p = 0
        for m in range(n_masks):
            mk = masks[m]
            if (x & mk) == mk:
                p ^= 1
        c = 0
        for v in range(n_vars):
            if (x >> v) & 1:
                c += chi[v]
        par[i] = p
        ph[i] = c & 7
    return par, ph


def _evaluate_paths_np(xs, masks, chi):
    xs = np.asarray(xs, dtype=np.int64)
    par = np.zeros(xs.shape[0], dtype=np.int8)
    for mk in masks:
        par ^= ((xs & mk) == mk).astype(np.int8)
    ph = np.zeros(xs.shape[0], dtype=np.int64)
    for v, c in enumerate(chi):
        if c:
            ph += c * ((xs >> v) & 1)
    return par, (ph & 7).astype(np.int8)


def _count_paths_np(n_vars, masks, chi):
    counts = np.zeros((8, 2), dtype=np.int64)
    total = 1 << n_vars
    for start in range(0, total, _CHUNK):
        xs = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        par, ph = _evaluate_paths_np(xs, masks, chi)
        np.add.at(counts, (ph.astype(np.int64), par.astype(np.int64)), 1)
    return counts


def count_paths_numba(n_vars: int, masks: np.ndarray, chi: np.ndarray) -> np.ndarray:
    return _count_paths_nb(int(n_vars), np.asarray(masks, np.int64), np.asarray(chi, np.int64))


def count_paths_numpy(n_vars: int, masks: np.ndarray, chi: np.ndarray) -> np.ndarray:
    return _count_paths_np(int(n_vars), np.asarray(masks, np.int64), np.asarray(chi, np.int64))


def evaluate_paths_numba(xs, masks, chi):
    return _evaluate_paths_nb(np.asarray(xs, np.int64), np.asarray(masks, np.int64),
                              np.asarray(chi, np.int64))


def evaluate_paths_numpy(xs, masks, chi):
    return _evaluate_paths_np(xs, np.asarray(masks, np.int64), np.asarray(chi, np.int64))


# --------------------------------------------------------------------------
# DQC1 measured conditional entropy from the eigenphases of U.
# For a control-qubit measurement along (theta, phi) the unnormalized
# post-measurement spectra are (1 +- alpha sin(theta) cos(t_k - phi)) / 2N.
# --------------------------------------------------------------------------


@_njit
def _dqc1_cond_entropy_nb(phases, alpha, thetas, phis):
    n_pts = thetas.shape[0]
    dim = phases.shape[0]
    out = np.empty(n_pts)
    inv_ln2 = 1.0 / np.log(2.0)
    for g in range(n_pts):
        s = alpha * np.sin(thetas[g])
        tot = 0.0
        for sign in (1.0, -1.0):
            w = np.empty(dim)
            p = 0.0
            for k in range(dim):
                w[k] = (1.0 + sign * s * np.cos(phases[k] - phis[g])) / (2.0 * dim)
                p += w[k]
            if p <= 1e-12:
                continue
            h = 0.0
            for k in range(dim):
                q = w[k] / p
                if q > 1e-12:
                    h -= q * np.log(q)
            tot += p * h * inv_ln2
        out[g] = tot
    return out


def _dqc1_cond_entropy_np(phases, alpha, thetas, phis):
    phases = np.asarray(phases, dtype=float)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    dim = phases.shape[0]
    c = np.cos(phases[None, :] - phis[:, None]) * (alpha * np.sin(thetas))[:, None]
    out = np.zeros(thetas.shape[0])
    for sign in (1.0, -1.0):
        w = (1.0 + sign * c) / (2.0 * dim)
        p = w.sum(axis=1)
        ok = p > 1e-12
        q = np.where(ok[:, None], w / np.where(ok, p, 1.0)[:, None], 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(q > 1e-12, -q * np.log2(np.where(q > 1e-12, q, 1.0)), 0.0)
        out += np.where(ok, p * terms.sum(axis=1), 0.0)
    return out


def dqc1_conditional_entropy_numba(phases, alpha, thetas, phis):
    return _dqc1_cond_entropy_nb(
        np.asarray(phases, float), float(alpha),
        np.atleast_1d(np.asarray(thetas, float)), np.atleast_1d(np.asarray(phis, float)),
    )


def dqc1_conditional_entropy_numpy(phases, alpha, thetas, phis):
    return _dqc1_cond_entropy_np(phases, float(alpha), thetas, phis)


if USE_NUMBA:
    count_paths = count_paths_numba
    evaluate_paths = evaluate_paths_numba
    dqc1_conditional_entropy = dqc1_conditional_entropy_numba
else:
    count_paths = count_paths_numpy
    evaluate_paths = evaluate_paths_numpy
    dqc1_conditional_entropy = dqc1_conditional_entropy_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"

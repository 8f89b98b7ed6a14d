"""Schmidt ranks of pure states and operator Schmidt ranks of density
matrices, plus the pure-state probe that lower-bounds the latter for
one-clean-qubit states."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .qstate import BipartiteSplit, num_qubits_of
from .random_unitary import as_rng

RANK_TOL = 1e-10
MAX_OPERATOR_QUBITS = 12
EXHAUSTIVE_MAX_QUBITS = 10
SAMPLED_SPLITS = 200


def _as_matrix(psi: np.ndarray, split: BipartiteSplit) -> np.ndarray:
    n = split.total_qubits
    psi = np.asarray(psi)
    if psi.shape != (2**n,):
        raise ValueError(f"state of length {psi.shape} does not fit {n} qubits")
    order = list(split.part_a) + list(split.part_b)
    return psi.reshape((2,) * n).transpose(order).reshape(split.d_a, split.d_b)


def schmidt_coefficients(psi: np.ndarray, split: BipartiteSplit) -> np.ndarray:
    """Singular values of the ``d_A x d_B`` amplitude matrix (not renormalized)."""
    return np.linalg.svd(_as_matrix(psi, split), compute_uv=False)


def _rank(s: np.ndarray, tol: float) -> int:
    if s.size == 0 or s[0] == 0:
        raise ValueError("rank of the zero vector is undefined")
    return int(np.count_nonzero(s > tol * s[0]))


def schmidt_rank(psi: np.ndarray, split: BipartiteSplit, tol: float = RANK_TOL) -> int:
    """Number of Schmidt coefficients above ``tol`` times the largest."""
    return _rank(schmidt_coefficients(psi, split), tol)


def realign(rho: np.ndarray, split: BipartiteSplit) -> np.ndarray:
    """Reshuffle ``rho[(a b), (a' b')]`` into ``R[(a a'), (b b')]``."""
    n = num_qubits_of(rho)
    if split.total_qubits != n:
        raise ValueError("split does not match the operator")
    order = list(split.part_a) + list(split.part_b)
    t = np.asarray(rho).reshape((2,) * (2 * n)).transpose(order + [n + q for q in order])
    da, db = split.d_a, split.d_b
    t = t.reshape(da, db, da, db).transpose(0, 2, 1, 3)
    return t.reshape(da * da, db * db)


def operator_schmidt_rank(rho: np.ndarray, split: BipartiteSplit, tol: float = RANK_TOL) -> int:
    """Number of terms in ``rho = sum_i l_i O_iA (x) O_iB`` with orthonormal operators."""
    if num_qubits_of(rho) > MAX_OPERATOR_QUBITS:
        raise ValueError(f"operator Schmidt rank limited to {MAX_OPERATOR_QUBITS} qubits")
    return _rank(np.linalg.svd(realign(rho, split), compute_uv=False), tol)


def dqc1_probe_state(u: np.ndarray, probe) -> np.ndarray:
    """``rho |probe>`` for the pure-control (alpha = 1) output state.

    ``probe`` is a bit string ``t, i, j`` over the control plus register.
    For ``t = 0`` the result is ``(|0,x> + |1> U|x>)/2^(n+1)``, for ``t = 1``
    it is ``(|1,x> + |0> U^dag|x>)/2^(n+1)``.
    """
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    n = num_qubits_of(u)
    bits = [int(b) for b in probe]
    if len(bits) != n + 1 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"probe must be a bit string of length {n + 1}")
    t = bits[0]
    x = int("".join(map(str, bits[1:])) or "0", 2)
    psi = np.zeros(2 * dim, dtype=complex)
    if t == 0:
        psi[x] += 1
        psi[dim:] += u[:, x]
    else:
        psi[dim + x] += 1
        psi[:dim] += u[x, :].conj()
    return psi / 2 ** (n + 1)


def dqc1_rank_lower_bound(u: np.ndarray, split: BipartiteSplit, probe=None,
                          tol: float = RANK_TOL) -> int:
    """Schmidt rank of ``rho |probe>``; never exceeds the operator Schmidt rank of ``rho``."""
    n = num_qubits_of(u)
    if split.total_qubits != n + 1:
        raise ValueError("split must cover the control qubit and the register")
    probe = "0" * (n + 1) if probe is None else probe
    return schmidt_rank(dqc1_probe_state(u, probe), split, tol)


def theorem_splits(n: int):
    """Splits of the control plus ``n`` register qubits, control in part A,
    where ``n0 = min(n_A, n_B)`` satisfies ``n/5 <= n0 <= 2n/5``.

    ``n_A`` counts the register qubits next to the control, so the control
    itself is not included in either size.
    """
    lo, hi = int(np.ceil(n / 5)), int(np.floor(2 * n / 5))
    for k in range(1, n):
        if lo <= min(k, n - k) <= hi:
            for reg in combinations(range(1, n + 1), k):
                yield BipartiteSplit((0,) + reg, n + 1)


@dataclass(frozen=True)
class SplitScan:
    min_rank: int
    splits_checked: int
    exhaustive: bool


def equal_splits(n: int, rng=None, samples: int = SAMPLED_SPLITS):
    """Balanced splits with qubit 0 in part A: all of them for ``n <= 10``,
    otherwise the contiguous ones plus ``samples`` random ones."""
    if n % 2 or n < 2:
        raise ValueError("balanced splits need an even qubit count")
    half = n // 2
    if n <= EXHAUSTIVE_MAX_QUBITS:
        for rest in combinations(range(1, n), half - 1):
            yield BipartiteSplit((0,) + rest, n)
        return
    rng = as_rng(0 if rng is None else rng)
    seen = set()
    for start in range(n):
        part = tuple(sorted((start + k) % n for k in range(half)))
        if 0 not in part:
            part = tuple(q for q in range(n) if q not in part)
        seen.add(part)
    for _ in range(samples):
        part = tuple(sorted(rng.choice(n, size=half, replace=False).tolist()))
        if 0 not in part:
            part = tuple(q for q in range(n) if q not in part)
        seen.add(part)
    for part in sorted(seen):
        yield BipartiteSplit(part, n)


def min_equal_split_scan(psi: np.ndarray, tol: float = RANK_TOL, rng=None) -> SplitScan:
    n = int(np.log2(np.asarray(psi).shape[0]))
    if n > 14:
        raise ValueError("balanced-split scan supports at most 14 qubits")
    ranks = [schmidt_rank(psi, s, tol) for s in equal_splits(n, rng)]
    return SplitScan(min(ranks), len(ranks), n <= EXHAUSTIVE_MAX_QUBITS)


def min_equal_split_rank(psi: np.ndarray, tol: float = RANK_TOL, rng=None) -> int:
    """Smallest Schmidt rank over balanced splits (a sampled upper estimate of
    the true minimum above 10 qubits)."""
    return min_equal_split_scan(psi, tol, rng).min_rank


def max_overlap_at_rank(psi: np.ndarray, split: BipartiteSplit, chi_prime: int) -> float:
    """Largest ``|<Psi|Phi>|`` over unit vectors ``Phi`` of Schmidt rank ``chi_prime``."""
    s = schmidt_coefficients(psi, split)
    if not 1 <= chi_prime <= min(split.d_a, split.d_b):
        raise ValueError(f"chi_prime must lie in [1, {min(split.d_a, split.d_b)}]")
    return float(np.sqrt(np.sum(s[:chi_prime] ** 2)))


def best_rank_approximation(psi: np.ndarray, split: BipartiteSplit, chi_prime: int) -> np.ndarray:
    """Unit vector of Schmidt rank ``chi_prime`` attaining :func:`max_overlap_at_rank`."""
    m = _as_matrix(psi, split)
    uu, s, vh = np.linalg.svd(m, full_matrices=False)
    trunc = (uu[:, :chi_prime] * s[:chi_prime]) @ vh[:chi_prime]
    trunc = trunc / np.linalg.norm(trunc)
    n = split.total_qubits
    order = list(split.part_a) + list(split.part_b)
    inv = np.argsort(order)
    return trunc.reshape((2,) * n).transpose(inv).reshape(-1)

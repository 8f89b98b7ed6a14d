"""Multiplicative negativity: the generic eigenvalue route, the singular-value
shortcut for one-clean-qubit states, the 5/4 unitary family and the average
negativity of random pure states."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .dqc1 import block_state
from .qstate import (
    CNOT,
    BipartiteSplit,
    check_unitary,
    embed_operator,
    num_qubits_of,
    partial_transpose,
    partial_transpose_qubits,
    random_pure_state,
    singular_values,
)
from .random_unitary import as_rng, member_rng, pseudo_random_unitary

PURE_NEG_ASYMPTOTE = 0.720507
MAX_EXACT_MU = 64


def multiplicative_negativity(rho: np.ndarray, split: BipartiteSplit) -> float:
    """``tr|rho^T_B|``, the sum of absolute eigenvalues of the partial transpose."""
    ev = np.linalg.eigvalsh(partial_transpose(rho, split, on="B"))
    return float(np.sum(np.abs(ev)))


def _non_control_part(split: BipartiteSplit) -> tuple[int, ...]:
    return split.part_b if 0 in split.part_a else split.part_a


def transposed_unitary(u: np.ndarray, split: BipartiteSplit) -> np.ndarray:
    """Partial transpose of ``u`` over the non-control part of ``split``.

    ``split`` lives on the full register, control qubit 0 followed by the
    qubits of ``u``, so register qubit ``k`` is qubit ``k - 1`` of ``u``.
    """
    n = num_qubits_of(u)
    if split.total_qubits != n + 1:
        raise ValueError(f"split is for {split.total_qubits} qubits, circuit has {n + 1}")
    return partial_transpose_qubits(u, [q - 1 for q in _non_control_part(split)])


def dqc1_negativity_fast(u: np.ndarray, alpha: float, split: BipartiteSplit) -> float:
    """``(1/N) sum_j max(|alpha| s_j, 1)`` over the singular values of the
    partially transposed unitary.  Valid for either sign of alpha."""
    if abs(alpha) > 1:
        raise ValueError(f"polarization must satisfy |alpha| <= 1, got {alpha}")
    s = singular_values(transposed_unitary(u, split))
    return float(np.mean(np.maximum(abs(alpha) * s, 1.0)))


def dqc1_negativity(u: np.ndarray, alpha: float, split: BipartiteSplit) -> float:
    """Negativity of the output state by explicit construction (reference route)."""
    return multiplicative_negativity(block_state(u, alpha), split)


# --------------------------------------------------------------------------
# The unitary family with negativity (2 alpha + 3)/4
# --------------------------------------------------------------------------


def special_u2() -> np.ndarray:
    """Two-qubit unitary exchanging |00> and |11> and fixing |01>, |10>."""
    a1 = np.array([[0, 0], [0, 1]])
    b1 = np.array([[1, 0], [0, 0]])
    c1 = np.array([[0, 1], [0, 0]])
    d1 = np.array([[0, 0], [1, 0]])
    return np.block([[a1, c1], [d1, b1]]).astype(complex)


def family_unitary(n: int, u2: np.ndarray | None = None) -> np.ndarray:
    """``|0><0| I A1 + |1><1| I B1 + |0><1| X C1 + |1><0| X D1`` on ``n`` qubits.

    ``A1, C1 / D1, B1`` are the 2x2 blocks of ``u2`` with respect to its
    first qubit; the middle factor acts on the ``n - 2`` inner qubits.
    """
    if n < 2:
        raise ValueError("the family is defined for n >= 2")
    u2 = check_unitary(special_u2() if u2 is None else u2)
    if u2.shape != (4, 4):
        raise ValueError("u2 must be a two-qubit unitary")
    a1, c1 = u2[:2, :2], u2[:2, 2:]
    d1, b1 = u2[2:, :2], u2[2:, 2:]
    m = n - 2
    eye = np.eye(2**m)
    xm = np.ones((1, 1))
    for _ in range(m):
        xm = np.kron(xm, np.array([[0, 1], [1, 0]]))
    p00 = np.array([[1, 0], [0, 0]])
    p11 = np.array([[0, 0], [0, 1]])
    p01 = np.array([[0, 1], [0, 0]])
    p10 = np.array([[0, 0], [1, 0]])
    return (
        np.kron(p00, np.kron(eye, a1))
        + np.kron(p11, np.kron(eye, b1))
        + np.kron(p01, np.kron(xm, c1))
        + np.kron(p10, np.kron(xm, d1))
    ).astype(complex)


def family_unitary_circuit(n: int, u2: np.ndarray | None = None) -> np.ndarray:
    """The same unitary assembled from gates: CNOTs from the first qubit onto
    each inner qubit, ``u2`` on (first, last), then the CNOTs again."""
    if n < 2:
        raise ValueError("the family is defined for n >= 2")
    u2 = check_unitary(special_u2() if u2 is None else u2)
    fan = np.eye(2**n, dtype=complex)
    for target in range(1, n - 1):
        fan = embed_operator(CNOT, (0, target), n) @ fan
    return fan @ embed_operator(u2, (0, n - 1), n) @ fan


def dqc1_family_spectrum(alpha: float) -> np.ndarray:
    """Spectrum (descending) of the partially transposed three-qubit state."""
    if abs(alpha) > 1:
        raise ValueError(f"polarization must satisfy |alpha| <= 1, got {alpha}")
    vals = np.array([1 + 2 * alpha] + [1.0] * 6 + [1 - 2 * alpha]) / 8
    return np.sort(vals)[::-1]


def family_partial_transpose(alpha: float) -> np.ndarray:
    """Explicit three-qubit output state for ``special_u2``, transposed on the last qubit."""
    rho = block_state(special_u2(), alpha)
    return partial_transpose(rho, BipartiteSplit((0, 1), 3), on="B")


# --------------------------------------------------------------------------
# Splits and the random-unitary ensemble
# --------------------------------------------------------------------------


def near_equal_split(total_qubits: int) -> BipartiteSplit:
    """Control qubit plus the first ``floor(n/2)`` others versus the rest."""
    n = total_qubits - 1
    if n < 1:
        raise ValueError("need at least one unpolarized qubit")
    return BipartiteSplit(tuple(range(n // 2 + 1)), total_qubits)


def split_last_k(total_qubits: int, k: int) -> BipartiteSplit:
    """``(total - k, k)`` split: the last ``k`` qubits form part B."""
    if not 1 <= k < total_qubits:
        raise ValueError(f"k must be in [1, {total_qubits - 1}]")
    return BipartiteSplit(tuple(range(total_qubits - k)), total_qubits)


def ensemble_negativities(n: int, split: BipartiteSplit, samples: int, seed: int,
                          alpha: float = 1.0, layers: int | None = None,
                          threads: int = 1) -> np.ndarray:
    """Negativity of ``samples`` pseudo-random ``n``-qubit unitaries; member
    ``i`` is drawn from seed ``seed + i`` so thread count does not matter."""
    kw = {} if layers is None else {"layers": layers}

    def one(i):
        u = pseudo_random_unitary(n, member_rng(seed, i), **kw)
        return dqc1_negativity_fast(u, alpha, split)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as pool:
            return np.array(list(pool.map(one, range(samples))))
    return np.array([one(i) for i in range(samples)])


def random_ensemble_negativity(n: int, split: BipartiteSplit, samples: int, rng,
                               **kwargs) -> tuple[float, float]:
    """Mean and standard deviation of the alpha = 1 negativity over the ensemble."""
    if samples < 2:
        raise ValueError("need at least two samples")
    seed = int(rng) if not isinstance(rng, np.random.Generator) else int(rng.integers(2**62))
    vals = ensemble_negativities(n, split, samples, seed, **kwargs)
    return float(vals.mean()), float(vals.std(ddof=1))


# --------------------------------------------------------------------------
# Random pure states
# --------------------------------------------------------------------------


def pure_state_negativity(psi: np.ndarray, split: BipartiteSplit) -> float:
    """``(sum_j sqrt(mu_j))^2`` from the Schmidt coefficients."""
    n = split.total_qubits
    t = np.asarray(psi).reshape((2,) * n)
    order = list(split.part_a) + list(split.part_b)
    m = t.transpose(order).reshape(split.d_a, split.d_b)
    return float(np.sum(singular_values(m)) ** 2)


def _half_gamma(m: int) -> Fraction:
    """``Gamma(m + 1/2) / sqrt(pi)`` as an exact rational, any integer ``m``."""
    if m >= 0:
        return Fraction(factorial(2 * m), 4**m * factorial(m))
    j = -m
    return Fraction((-4) ** j * factorial(j), factorial(2 * j))


@lru_cache(maxsize=None)
def laguerre_half_integral(k: int, l: int) -> Fraction:
    """``int_0^inf e^-q sqrt(q) L_k(q) L_l(q) dq / sqrt(pi)``, exactly.

    Terminating sum over ``t`` of ``(-1)^t C(k,t) Gamma(t+3/2)^2 /
    (t! Gamma(t-l+3/2))`` times ``(-1)^l / l!``.
    """
    total = Fraction(0)
    for t in range(k + 1):
        g = _half_gamma(t + 1)
        total += (-1) ** t * comb(k, t) * g * g / (factorial(t) * _half_gamma(t - l + 1))
    return (-1) ** l * total / factorial(l)


@lru_cache(maxsize=None)
def _avg_pure_negativity_rational(mu: int) -> Fraction:
    mat = [[laguerre_half_integral(k, l) for l in range(mu)] for k in range(mu)]
    diag = sum(mat[k][k] for k in range(mu))
    return diag * diag - sum(x * x for row in mat for x in row)


def avg_pure_negativity_exact(mu: int) -> float:
    """Average ``(sum_j sqrt(mu_j))^2`` of a Haar pure state on ``mu x mu``.

    Equals ``1 + pi R / mu^2`` with ``R`` rational, accumulated in exact
    arithmetic to sidestep the cancellation in the alternating sums.
    """
    mu = int(mu)
    if mu < 1 or mu & (mu - 1):
        raise ValueError("mu must be a power of two")
    if mu > MAX_EXACT_MU:
        raise ValueError(f"mu > {MAX_EXACT_MU} is outside the supported range")
    return float(1 + np.pi * float(_avg_pure_negativity_rational(mu)) / mu**2)


def avg_pure_negativity_mc(n: int, split: BipartiteSplit, samples: int, rng) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the pure-state negativity."""
    if samples < 2:
        raise ValueError("need at least two samples")
    if split.total_qubits != n:
        raise ValueError("split does not match the number of qubits")
    rng = as_rng(rng)
    vals = np.array([pure_state_negativity(random_pure_state(2**n, rng), split)
                     for _ in range(samples)])
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(samples))

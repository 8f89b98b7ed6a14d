"""Dense multi-qubit linear algebra: tensor products, partial traces and
transposes, spectra and entropies.

Matrices are plain complex ``numpy`` arrays.  Qubit 0 is the leftmost tensor
factor and basis states are ordered big-endian in the qubit index, so the
computational basis index of ``|q0 q1 ... q_{n-1}>`` is ``sum q_k 2^(n-1-k)``.
All logarithms are base 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

TOL_HERM = 1e-9
TOL_UNIT = 1e-9
TOL_TRACE = 1e-9
TOL_PSD = 1e-9
ENTROPY_CLIP = 1e-12


@dataclass(frozen=True)
class BipartiteSplit:
    """Partition of ``total_qubits`` qubits into ``part_a`` and its complement."""

    part_a: tuple[int, ...]
    total_qubits: int

    def __post_init__(self):
        part = tuple(sorted(int(q) for q in self.part_a))
        object.__setattr__(self, "part_a", part)
        if len(set(part)) != len(part):
            raise ValueError(f"duplicate qubit in part_a {part}")
        if not part:
            raise ValueError("part_a must be nonempty")
        if part[0] < 0 or part[-1] >= self.total_qubits:
            raise ValueError(f"part_a {part} out of range for {self.total_qubits} qubits")
        if len(part) == self.total_qubits:
            raise ValueError("part_a must be a proper subset of the qubits")

    @property
    def part_b(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.total_qubits) if q not in self.part_a)

    @property
    def d_a(self) -> int:
        return 2 ** len(self.part_a)

    @property
    def d_b(self) -> int:
        return 2 ** len(self.part_b)

    def part(self, which: str) -> tuple[int, ...]:
        if which == "A":
            return self.part_a
        if which == "B":
            return self.part_b
        raise ValueError(f"part id must be 'A' or 'B', got {which!r}")

    def swapped(self) -> "BipartiteSplit":
        return BipartiteSplit(self.part_b, self.total_qubits)


def num_qubits_of(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dim = a.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def _check_split(split: BipartiteSplit, n: int) -> None:
    if split.total_qubits != n:
        raise ValueError(
            f"split is for {split.total_qubits} qubits but operator acts on {n}"
        )


def is_hermitian(a: np.ndarray, tol: float = TOL_HERM) -> bool:
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def is_unitary(u: np.ndarray, tol: float = TOL_UNIT) -> bool:
    u = np.asarray(u)
    eye = np.eye(u.shape[0])
    return bool(np.max(np.abs(u.conj().T @ u - eye), initial=0.0) <= tol)


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    num_qubits_of(rho)
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    if not is_hermitian(rho):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TOL_TRACE:
        raise ValueError(f"density matrix has trace {tr}")
    lmin = np.linalg.eigvalsh(rho)[0]
    if lmin < -TOL_PSD:
        raise ValueError(f"density matrix has negative eigenvalue {lmin}")
    return rho


def check_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    num_qubits_of(u)
    if not is_unitary(u):
        raise ValueError("operator is not unitary")
    return u


def tensor_product(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product; later factors become the later (rightmost) qubits."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        op = np.asarray(op)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise ValueError("tensor_product expects square matrices")
        out = np.kron(out, op)
    return out


def ket(bits: Sequence[int] | str) -> np.ndarray:
    """Computational basis vector for a bit string, e.g. ``ket('010')``."""
    bits = [int(b) for b in bits]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("basis labels must be bits")
    idx = 0
    for b in bits:
        idx = 2 * idx + b
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[idx] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def embed_operator(op: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Embed a ``2^k`` operator acting on ``qubits`` (in that slot order) into ``n`` qubits."""
    qubits = list(qubits)
    k = len(qubits)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2**k, 2**k):
        raise ValueError("operator size does not match the number of target qubits")
    if len(set(qubits)) != k or min(qubits) < 0 or max(qubits) >= n:
        raise ValueError(f"invalid target qubits {qubits}")
    full = np.kron(op, np.eye(2 ** (n - k), dtype=complex))
    rest = [q for q in range(n) if q not in qubits]
    order = qubits + rest
    # full acts on qubit ordering `order`; permute back to 0..n-1
    perm = np.argsort(order)
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(list(perm) + [n + p for p in perm])
    return t.reshape(2**n, 2**n)


def apply_local(mat: np.ndarray, op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Left-multiply ``mat`` (``2^n`` rows) by a single-qubit ``op`` on ``qubit``."""
    cols = mat.shape[1]
    t = mat.reshape(2**qubit, 2, 2 ** (n - qubit - 1), cols)
    t = np.einsum("ab,ibjc->iajc", op, t)
    return t.reshape(2**n, cols)


def _permute_first(a: np.ndarray, first: Sequence[int], n: int) -> np.ndarray:
    rest = [q for q in range(n) if q not in first]
    order = list(first) + rest
    t = a.reshape((2,) * (2 * n))
    return t.transpose(order + [n + q for q in order]).reshape(2**n, 2**n)


def partial_trace(rho: np.ndarray, split: BipartiteSplit, keep: str = "A") -> np.ndarray:
    """Reduced operator on part ``keep`` (qubits kept in ascending order)."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits_of(rho)
    _check_split(split, n)
    kept = split.part(keep)
    dk = 2 ** len(kept)
    dt = 2**n // dk
    t = _permute_first(rho, kept, n).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def reduced_state(rho: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Partial trace keeping the listed qubits."""
    n = num_qubits_of(rho)
    if len(qubits) == n:
        return np.asarray(rho, dtype=complex)
    return partial_trace(rho, BipartiteSplit(tuple(qubits), n), keep="A")


def partial_transpose(a: np.ndarray, split: BipartiteSplit, on: str = "B") -> np.ndarray:
    """Transpose the computational-basis indices of the qubits in part ``on``."""
    a = np.asarray(a)
    n = num_qubits_of(a)
    _check_split(split, n)
    axes = list(range(2 * n))
    for q in split.part(on):
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return a.reshape((2,) * (2 * n)).transpose(axes).reshape(2**n, 2**n)


def partial_transpose_qubits(a: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Partial transpose over an arbitrary (possibly empty or full) qubit set."""
    a = np.asarray(a)
    n = num_qubits_of(a)
    axes = list(range(2 * n))
    for q in qubits:
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return a.reshape((2,) * (2 * n)).transpose(axes).reshape(2**n, 2**n)


def hermitian_spectrum(a: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not is_hermitian(a):
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(a)[::-1]


def singular_values(a: np.ndarray) -> np.ndarray:
    """Singular values, sorted descending."""
    return np.linalg.svd(np.asarray(a), compute_uv=False)


def shannon_entropy(p: np.ndarray) -> float:
    """Entropy in bits of a probability vector; tiny negatives are clipped.

    Entries in ``[-TOL_PSD, 0)`` are treated as zero, anything more negative is
    rejected.  Entries at or below ``ENTROPY_CLIP`` contribute nothing.
    """
    p = np.asarray(p, dtype=float)
    if p.size and p.min() < -TOL_PSD:
        raise ValueError(f"negative probability {p.min()}")
    p = p[p > ENTROPY_CLIP]
    return float(-np.sum(p * np.log2(p)))


def binary_entropy(x: float) -> float:
    return shannon_entropy(np.array([x, 1.0 - x]))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits."""
    return shannon_entropy(np.linalg.eigvalsh(np.asarray(rho)))


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.vdot(rho, rho)))


def operator_fidelity(o1: np.ndarray, o2: np.ndarray) -> float:
    """Normalized Hilbert-Schmidt overlap ``tr(o1^† o2)/(|o1| |o2|)`` (real part)."""
    o1 = np.asarray(o1, dtype=complex)
    o2 = np.asarray(o2, dtype=complex)
    if o1.shape != o2.shape:
        raise ValueError("operators have different shapes")
    n1 = np.sqrt(np.vdot(o1, o1).real)
    n2 = np.sqrt(np.vdot(o2, o2).real)
    if n1 == 0 or n2 == 0:
        raise ValueError("fidelity undefined for the zero operator")
    return float(np.real(np.vdot(o1, o2)) / (n1 * n2))


# Single-qubit constants
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
T = np.diag([1.0, np.exp(1j * np.pi / 4)]).astype(complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def bell_state() -> np.ndarray:
    """Density matrix of ``(|00> + |11>)/sqrt(2)``."""
    return projector((ket("00") + ket("11")) / np.sqrt(2))


def random_density_matrix(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state from a Ginibre matrix (Hilbert-Schmidt measure for full rank)."""
    d = 2**n
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector (normalized complex Gaussian)."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)

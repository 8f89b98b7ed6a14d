"""Random unitaries: Haar sampling, the pseudo-random mixing construction and
random two-qubit-gate circuits.

Every sampler takes ``rng``, either a ``numpy.random.Generator`` or an integer
seed.  Ensemble member ``i`` of a run seeded with ``s`` uses seed ``s + i``
(see :func:`member_rng`), which makes serial and parallel runs agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import apply_local, embed_operator

DEFAULT_LAYERS = 40
_U64 = 1 << 64


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("an explicit seed or Generator is required")
    return np.random.Generator(np.random.PCG64(int(rng) % _U64))


def member_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for ensemble member ``index`` of a run seeded with ``seed``."""
    return as_rng((int(seed) + int(index)) % _U64)


def su2(theta: float, phi: float, chi: float) -> np.ndarray:
    return np.array(
        [
            [np.exp(1j * phi) * np.cos(theta), np.exp(1j * chi) * np.sin(theta)],
            [-np.exp(-1j * chi) * np.sin(theta), np.exp(-1j * phi) * np.cos(theta)],
        ]
    )


def random_su2(rng) -> np.ndarray:
    """``R(theta, phi, chi)`` with theta ~ U[0, pi/2], phi, chi ~ U[0, 2 pi)."""
    rng = as_rng(rng)
    theta = rng.uniform(0.0, np.pi / 2)
    phi, chi = rng.uniform(0.0, 2 * np.pi, size=2)
    return su2(theta, phi, chi)


def mixing_phases(n: int) -> np.ndarray:
    """Diagonal of exp(i pi/4 sum_j Z_j Z_{j+1}) on an open chain."""
    if n < 2:
        raise ValueError("mixing operator needs at least two qubits")
    idx = np.arange(2**n)
    bits = (idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    z = 1 - 2 * bits
    return np.exp(1j * np.pi / 4 * np.sum(z[:, :-1] * z[:, 1:], axis=1))


def mixing_operator(n: int) -> np.ndarray:
    return np.diag(mixing_phases(n))


def pseudo_random_unitary(n: int, rng, layers: int = DEFAULT_LAYERS) -> np.ndarray:
    """``R_j M R_{j-1} ... M R_1`` with independent single-qubit layers ``R_k``."""
    if n < 2:
        raise ValueError("pseudo-random construction needs n >= 2")
    if layers < 1:
        raise ValueError("need at least one layer")
    rng = as_rng(rng)
    phases = mixing_phases(n)
    u = np.eye(2**n, dtype=complex)
    for layer in range(layers):
        if layer:
            u = phases[:, None] * u
        for q in range(n):
            u = apply_local(u, random_su2(rng), q, n)
    return u


def haar_unitary(dim: int, rng) -> np.ndarray:
    """Haar-random ``dim x dim`` unitary via QR of a complex Ginibre matrix."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    rng = as_rng(rng)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))[None, :]


@dataclass(frozen=True)
class RandomCircuitSpec:
    num_qubits: int
    num_gates: int
    seed: int

    def __post_init__(self):
        if self.num_gates < 0:
            raise ValueError("num_gates must be nonnegative")
        if self.num_gates > 0 and self.num_qubits < 2:
            raise ValueError("two-qubit gates need at least two qubits")


def random_two_qubit_gates(spec: RandomCircuitSpec) -> list[tuple[tuple[int, int], np.ndarray]]:
    """The gate list behind :func:`random_two_qubit_circuit`: ((low, high), 4x4 Haar)."""
    rng = as_rng(spec.seed)
    n = spec.num_qubits
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    gates = []
    for _ in range(spec.num_gates):
        pair = pairs[rng.integers(len(pairs))]
        gates.append((pair, haar_unitary(4, rng)))
    return gates


def random_two_qubit_circuit(spec: RandomCircuitSpec) -> np.ndarray:
    n = spec.num_qubits
    u = np.eye(2**n, dtype=complex)
    for pair, g in random_two_qubit_gates(spec):
        u = embed_operator(g, pair, n) @ u
    return u


def apply_random_circuit_to_state(spec: RandomCircuitSpec, psi: np.ndarray) -> np.ndarray:
    """Apply the circuit of ``spec`` to a state vector without forming the unitary."""
    n = spec.num_qubits
    psi = np.asarray(psi, dtype=complex).reshape((2,) * n)
    for (a, b), g in random_two_qubit_gates(spec):
        psi = np.tensordot(g.reshape(2, 2, 2, 2), psi, axes=([2, 3], [a, b]))
        psi = np.moveaxis(psi, [0, 1], [a, b])
    return psi.reshape(-1)

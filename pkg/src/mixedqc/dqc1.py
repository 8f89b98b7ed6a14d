"""The one-clean-qubit circuit: output state, trace readout and the
measurement-sampling estimator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import check_unitary, num_qubits_of, reduced_state
from .random_unitary import as_rng


@dataclass(frozen=True)
class DQC1State:
    n: int
    alpha: float
    unitary: np.ndarray
    state: np.ndarray


@dataclass(frozen=True)
class TraceEstimate:
    value: complex
    std_error: float
    runs: int


def block_state(u: np.ndarray, alpha: float) -> np.ndarray:
    """``(1/2N) [[I, alpha U^dag], [alpha U, I]]`` with the control qubit first."""
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    rho = np.zeros((2 * dim, 2 * dim), dtype=complex)
    rho[:dim, :dim] = np.eye(dim)
    rho[dim:, dim:] = np.eye(dim)
    rho[:dim, dim:] = alpha * u.conj().T
    rho[dim:, :dim] = alpha * u
    return rho / (2 * dim)


def build_state(u: np.ndarray, alpha: float) -> DQC1State:
    """Output of the circuit for control polarization ``alpha`` (negative allowed)."""
    if abs(alpha) > 1:
        raise ValueError(f"polarization must satisfy |alpha| <= 1, got {alpha}")
    u = check_unitary(u)
    n = num_qubits_of(u)
    return DQC1State(n=n, alpha=float(alpha), unitary=u, state=block_state(u, alpha))


def normalized_trace_exact(u: np.ndarray) -> complex:
    u = np.asarray(u)
    return complex(np.trace(u) / u.shape[0])


def expectation_xy(state: DQC1State) -> tuple[float, float]:
    """``(<X>, <Y>)`` of the control qubit: ``alpha * (Re tau, Im tau)``.

    With ``U`` in the lower-left block and ``Y = [[0, -i], [i, 0]]`` the Y
    expectation carries the same sign as ``Im tau``.
    """
    rho_c = control_qubit_state(state)
    return float(2 * rho_c[0, 1].real), float(-2 * rho_c[0, 1].imag)


def control_qubit_state(state: DQC1State) -> np.ndarray:
    return reduced_state(state.state, [0])


def sample_trace(state: DQC1State, runs: int, rng) -> TraceEstimate:
    """Estimate the normalized trace from simulated X and Y measurements.

    Re and Im each get their own budget of ``runs`` single-shot measurements
    of the control qubit; outcome +1 occurs with probability ``(1 + <P>)/2``.
    """
    if runs < 1:
        raise ValueError("need at least one run")
    if state.alpha == 0:
        raise ValueError("the trace cannot be estimated at zero polarization")
    rng = as_rng(rng)
    ex, ey = expectation_xy(state)
    p_x = np.clip((1 + ex) / 2, 0.0, 1.0)
    p_y = np.clip((1 + ey) / 2, 0.0, 1.0)
    xs = 2.0 * rng.binomial(1, p_x, size=runs) - 1.0
    ys = 2.0 * rng.binomial(1, p_y, size=runs) - 1.0
    a = state.alpha
    value = complex(xs.mean() / a, ys.mean() / a)
    if runs > 1:
        sx, sy = xs.std(ddof=1), ys.std(ddof=1)
    else:
        sx = sy = 1.0
    std_error = float(np.hypot(sx, sy) / (abs(a) * np.sqrt(runs)))
    return TraceEstimate(value=value, std_error=std_error, runs=runs)


def runs_required(epsilon: float, error_probability: float, alpha: float = 1.0) -> int:
    """Hoeffding run count for one quadrature: ``ln(2/P_e) * 2 / (alpha eps)^2``.

    Averages of +-1 outcomes rescaled by 1/alpha deviate by more than ``eps``
    with probability at most ``2 exp(-L alpha^2 eps^2 / 2)``.
    """
    if not (0 < error_probability < 1) or epsilon <= 0 or alpha == 0:
        raise ValueError("need eps > 0, 0 < P_e < 1 and alpha != 0")
    return int(np.ceil(2.0 * np.log(2.0 / error_probability) / (alpha * epsilon) ** 2))


def separable_decomposition(state: DQC1State) -> list[tuple[float, np.ndarray]]:
    """Weighted pure product states whose mixture is the output state.

    Uses the eigenbasis ``U = sum_j e^{i phi_j} |e_j><e_j|`` with
    ``|a_j> = cos t|0> + e^{i phi_j} sin t|1>``,
    ``|b_j> = sin t|0> + e^{i phi_j} cos t|1>`` and ``sin 2t = alpha``.
    """
    u = state.unitary
    dim = u.shape[0]
    evals, evecs = _unitary_eigh(u)
    t = 0.5 * np.arcsin(state.alpha)
    out = []
    for j in range(dim):
        ph = evals[j] / abs(evals[j])
        e = evecs[:, j]
        a = np.array([np.cos(t), ph * np.sin(t)])
        b = np.array([np.sin(t), ph * np.cos(t)])
        out.append((1.0 / (2 * dim), np.kron(a, e)))
        out.append((1.0 / (2 * dim), np.kron(b, e)))
    return out


def mixture(decomposition) -> np.ndarray:
    return sum(w * np.outer(v, v.conj()) for w, v in decomposition)


def _unitary_eigh(u: np.ndarray):
    # Schur form of a normal matrix is diagonal, which gives orthonormal
    # eigenvectors even for degenerate eigenphases.
    from scipy.linalg import schur

    tmat, z = schur(u, output="complex")
    return np.diagonal(tmat).copy(), z


def eigenphases(u: np.ndarray) -> np.ndarray:
    return np.angle(np.linalg.eigvals(u))

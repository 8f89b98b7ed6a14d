"""Quantum discord with a one-qubit measured part.

The measured qubit is moved to the front so the state splits into 2x2 blocks
``rho_ij`` acting on the unmeasured part.  For a Bloch direction ``a`` the
unnormalized post-measurement states are

    p_+- rho_+- = (S +- (a1 X + a2 Y + a3 Z)) / 2,
    S = rho_00 + rho_11, X = rho_01 + rho_10,
    Y = i (rho_01 - rho_10), Z = rho_00 - rho_11,

which lets a whole grid of directions be diagonalized in one batched call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .dqc1 import block_state, eigenphases
from .qstate import (
    ENTROPY_CLIP,
    TOL_PSD,
    BipartiteSplit,
    binary_entropy,
    check_density_matrix,
    ket,
    num_qubits_of,
    partial_trace,
    projector,
    von_neumann_entropy,
)

LOG2E = float(np.log2(np.e))


@dataclass(frozen=True)
class BlochMeasurement:
    """Projective qubit measurement ``(I +- a.sigma)/2`` along ``(theta, phi)``."""

    theta: float
    phi: float

    def __post_init__(self):
        if not -1e-12 <= self.theta <= np.pi + 1e-12:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not -1e-12 <= self.phi < 2 * np.pi + 1e-12:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "BlochMeasurement":
        """Fold arbitrary real angles into the canonical ranges."""
        theta = float(np.mod(theta, 2 * np.pi))
        if theta > np.pi:
            theta = 2 * np.pi - theta
            phi = phi + np.pi
        return cls(theta, float(np.mod(phi, 2 * np.pi)))

    @property
    def direction(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        a1, a2, a3 = self.direction
        asig = np.array([[a3, a1 - 1j * a2], [a1 + 1j * a2, -a3]])
        eye = np.eye(2)
        return (eye + asig) / 2, (eye - asig) / 2


@dataclass(frozen=True)
class OptimizerConfig:
    grid_theta: int = 33
    grid_phi: int = 64
    starts: int = 3
    fatol: float = 1e-10
    xatol: float = 1e-8
    maxiter: int = 2000


@dataclass(frozen=True)
class DiscordReport:
    discord: float
    mutual_information: float
    classical_correlation: float
    optimal_measurement: BlochMeasurement
    optimizer_evals: int


# --------------------------------------------------------------------------
# Entropic quantities
# --------------------------------------------------------------------------


def mutual_information(rho: np.ndarray, split: BipartiteSplit) -> float:
    rho = check_density_matrix(rho)
    ha = von_neumann_entropy(partial_trace(rho, split, "A"))
    hb = von_neumann_entropy(partial_trace(rho, split, "B"))
    return ha + hb - von_neumann_entropy(rho)


def _measured_and_other(split: BipartiteSplit, measured: str):
    m = split.part(measured)
    if len(m) != 1:
        raise ValueError("the measured part must be a single qubit")
    other = "B" if measured == "A" else "A"
    return m[0], other


def _blocks(rho: np.ndarray, qubit: int):
    """``rho_ij`` blocks with the measured qubit moved to the front."""
    n = num_qubits_of(rho)
    order = [qubit] + [q for q in range(n) if q != qubit]
    t = np.asarray(rho).reshape((2,) * (2 * n)).transpose(order + [n + q for q in order])
    d = 2 ** (n - 1)
    t = t.reshape(2, d, 2, d)
    return t[0, :, 0, :], t[0, :, 1, :], t[1, :, 0, :], t[1, :, 1, :]


def _pauli_parts(rho: np.ndarray, qubit: int):
    r00, r01, r10, r11 = _blocks(rho, qubit)
    return r00 + r11, r01 + r10, 1j * (r01 - r10), r00 - r11


def _entropy_rows(w: np.ndarray) -> np.ndarray:
    """Row-wise ``sum p_j log(1/p_j)`` of unnormalized nonnegative rows,
    weighted by the row total: ``p * H(w/p)``."""
    if w.size and w.min() < -TOL_PSD:
        raise ValueError(f"post-measurement state has eigenvalue {w.min()}")
    w = np.clip(w, 0.0, None)
    p = w.sum(axis=-1)
    safe_p = np.where(p > ENTROPY_CLIP, p, 1.0)
    q = w / safe_p[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(q > ENTROPY_CLIP, -q * np.log2(np.where(q > ENTROPY_CLIP, q, 1.0)), 0.0)
    return np.where(p > ENTROPY_CLIP, p * h.sum(axis=-1), 0.0)


def _cond_entropy_grid(parts, thetas, phis) -> np.ndarray:
    s, x, y, z = parts
    st = np.sin(thetas)
    a1, a2, a3 = st * np.cos(phis), st * np.sin(phis), np.cos(thetas)
    v = (a1[:, None, None] * x + a2[:, None, None] * y + a3[:, None, None] * z)
    total = np.zeros(len(thetas))
    for sign in (1.0, -1.0):
        mats = 0.5 * (s[None] + sign * v)
        total += _entropy_rows(np.linalg.eigvalsh(mats))
    return total


def conditional_entropy_measured(rho: np.ndarray, split: BipartiteSplit,
                                 meas: BlochMeasurement, measured: str = "A") -> float:
    """``sum_+- p_+- H(rho_{other|+-})`` for a projective measurement on the measured qubit."""
    rho = check_density_matrix(rho)
    qubit, _ = _measured_and_other(split, measured)
    parts = _pauli_parts(rho, qubit)
    return float(_cond_entropy_grid(parts, np.array([meas.theta]), np.array([meas.phi]))[0])


def post_measurement_states(rho: np.ndarray, split: BipartiteSplit, meas: BlochMeasurement,
                            measured: str = "A"):
    """``[(p_+, rho_+), (p_-, rho_-)]`` on the unmeasured part."""
    qubit, _ = _measured_and_other(split, measured)
    s, x, y, z = _pauli_parts(np.asarray(rho), qubit)
    a1, a2, a3 = meas.direction
    out = []
    for sign in (1.0, -1.0):
        m = 0.5 * (s + sign * (a1 * x + a2 * y + a3 * z))
        p = float(np.trace(m).real)
        out.append((p, m / p if p > ENTROPY_CLIP else m))
    return out


def conditional_entropy_povm(rho: np.ndarray, split: BipartiteSplit, effects,
                             measured: str = "A") -> float:
    """Measured conditional entropy for a general qubit POVM ``{E_j}``."""
    qubit, _ = _measured_and_other(split, measured)
    effects = [np.asarray(e, dtype=complex) for e in effects]
    if not np.allclose(sum(effects), np.eye(2), atol=1e-9):
        raise ValueError("POVM effects must sum to the identity")
    r00, r01, r10, r11 = _blocks(np.asarray(rho), qubit)
    total = 0.0
    for e in effects:
        # tr_M((E (x) I) rho) = sum_ab E_ba rho_ab
        m = e[0, 0] * r00 + e[1, 0] * r01 + e[0, 1] * r10 + e[1, 1] * r11
        total += float(_entropy_rows(np.linalg.eigvalsh(m)[None])[0])
    return total


# --------------------------------------------------------------------------
# Minimization
# --------------------------------------------------------------------------


def _grid(cfg: OptimizerConfig):
    th = np.linspace(0.0, np.pi, cfg.grid_theta)
    ph = np.linspace(0.0, 2 * np.pi, cfg.grid_phi, endpoint=False)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    return tt.ravel(), pp.ravel()


def minimize_landscape(batch_fn, cfg: OptimizerConfig | None = None):
    """Grid search then Nelder-Mead from the best grid points.

    ``batch_fn(thetas, phis)`` returns conditional entropies for arrays of
    angles.  Returns ``(value, BlochMeasurement, evaluations)``.
    """
    cfg = cfg or OptimizerConfig()
    th, ph = _grid(cfg)
    vals = batch_fn(th, ph)
    evals = len(th)
    best_val = float(vals.min())
    best_x = (th[vals.argmin()], ph[vals.argmin()])
    for idx in np.argsort(vals)[: cfg.starts]:
        res = minimize(
            lambda x: float(batch_fn(np.array([x[0]]), np.array([x[1]]))[0]),
            x0=np.array([th[idx], ph[idx]]),
            method="Nelder-Mead",
            options={"fatol": cfg.fatol, "xatol": cfg.xatol, "maxiter": cfg.maxiter},
        )
        evals += res.nfev
        if res.fun < best_val:
            best_val, best_x = float(res.fun), (res.x[0], res.x[1])
    return best_val, BlochMeasurement.from_angles(*best_x), evals


def _report(h_cond, meas, evals, h_joint, h_measured, h_other) -> DiscordReport:
    mi = h_measured + h_other - h_joint
    d = h_cond - (h_joint - h_measured)
    if d < 0:
        if d < -1e-9:
            raise ArithmeticError(f"negative discord {d}; optimizer or state invalid")
        d = 0.0
    return DiscordReport(
        discord=float(d),
        mutual_information=float(mi),
        classical_correlation=float(mi - d),
        optimal_measurement=meas,
        optimizer_evals=int(evals),
    )


def discord(rho: np.ndarray, split: BipartiteSplit, config: OptimizerConfig | None = None,
            measured: str = "A") -> DiscordReport:
    """``min_a H~(other|measured) - [H(joint) - H(measured)]`` over qubit projectors."""
    rho = check_density_matrix(rho)
    qubit, other = _measured_and_other(split, measured)
    parts = _pauli_parts(rho, qubit)
    h_cond, meas, evals = minimize_landscape(
        lambda t, p: _cond_entropy_grid(parts, t, p), config)
    return _report(
        h_cond, meas, evals,
        h_joint=von_neumann_entropy(rho),
        h_measured=von_neumann_entropy(partial_trace(rho, split, measured)),
        h_other=von_neumann_entropy(partial_trace(rho, split, other)),
    )


def separable_discord_bound(rho: np.ndarray, split: BipartiteSplit) -> float:
    """``min(H(A), H(B), I(A:B))``."""
    rho = check_density_matrix(rho)
    ha = von_neumann_entropy(partial_trace(rho, split, "A"))
    hb = von_neumann_entropy(partial_trace(rho, split, "B"))
    return float(min(ha, hb, ha + hb - von_neumann_entropy(rho)))


def zero_discord_state(probs, conditional_states, basis: np.ndarray) -> np.ndarray:
    """``sum_j p_j |l_j><l_j| (x) rho_j`` with the measured qubit first and
    ``basis`` a 2x2 unitary whose columns are the ``|l_j>``."""
    out = 0
    for j, (p, r) in enumerate(zip(probs, conditional_states)):
        out = out + p * np.kron(np.outer(basis[:, j], basis[:, j].conj()), r)
    return out


# --------------------------------------------------------------------------
# Worked examples
# --------------------------------------------------------------------------


def nonorthogonal_example_state() -> np.ndarray:
    """Separable two-qubit state pairing four nonorthogonal states of each qubit."""
    plus = (ket("0") + ket("1")) / np.sqrt(2)
    minus = (ket("0") - ket("1")) / np.sqrt(2)
    z0, z1 = ket("0"), ket("1")
    terms = [(plus, z0), (minus, z1), (z0, minus), (z1, plus)]
    return sum(np.kron(projector(a), projector(b)) for a, b in terms) / 4


def horodecki_state(p: float) -> np.ndarray:
    """The 2x4 bound entangled family; qubit 0 is the two-dimensional part."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rho = np.zeros((8, 8))
    for i in range(3):
        rho[i, i] = rho[i + 5, i + 5] = p
        rho[i, i + 5] = rho[i + 5, i] = p
    rho[3, 3] = p
    rho[4, 4] = rho[7, 7] = (1 + p) / 2
    rho[4, 7] = rho[7, 4] = np.sqrt(1 - p * p) / 2
    return rho.astype(complex) / (1 + 7 * p)


HORODECKI_SPLIT = BipartiteSplit((0,), 3)


def horodecki_p1_spectrum(theta: float) -> np.ndarray:
    """Post-measurement spectrum at p = 1, identical for both outcomes."""
    r1, r2 = np.sqrt(6 - 2 * np.sqrt(5)), np.sqrt(6 + 2 * np.sqrt(5))
    s = np.sin(theta)
    return np.sort(np.array([4 - r1 * s, 4 + r1 * s, 4 - r2 * s, 4 + r2 * s]) / 16)[::-1]


def horodecki_discord(p: float, config: OptimizerConfig | None = None) -> DiscordReport:
    return discord(horodecki_state(p), HORODECKI_SPLIT, config, measured="A")


# --------------------------------------------------------------------------
# One-clean-qubit states: control qubit measured
# --------------------------------------------------------------------------


def dqc1_conditional_entropy(u: np.ndarray, alpha: float, thetas, phis) -> np.ndarray:
    """Measured conditional entropy of the unpolarized register from the eigenphases of ``u``."""
    return kernels.dqc1_conditional_entropy(eigenphases(u), alpha, thetas, phis)


def dqc1_discord_numeric(u: np.ndarray, alpha: float, config: OptimizerConfig | None = None,
                         fast: bool = True) -> DiscordReport:
    """Discord of the output state across control vs. the rest, measuring the control.

    ``fast`` evaluates the landscape from the eigenphases of ``u``; otherwise
    the generic dense route is used.  Both minimize over (theta, phi).
    """
    if abs(alpha) > 1:
        raise ValueError(f"polarization must satisfy |alpha| <= 1, got {alpha}")
    u = np.asarray(u, dtype=complex)
    n = num_qubits_of(u)
    split = BipartiteSplit((0,), n + 1)
    if not fast:
        return discord(block_state(u, alpha), split, config, measured="A")
    phases = eigenphases(u)
    h_cond, meas, evals = minimize_landscape(
        lambda t, p: kernels.dqc1_conditional_entropy(phases, alpha, t, p), config)
    tau = abs(np.trace(u)) / u.shape[0]
    return _report(
        h_cond, meas, evals,
        h_joint=n + binary_entropy((1 - abs(alpha)) / 2),
        h_measured=binary_entropy((1 - abs(alpha) * tau) / 2),
        h_other=float(n),
    )


def dqc1_discord_analytic(alpha: float) -> float:
    """Large-n discord for typical unitaries."""
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    r = np.sqrt(1 - alpha * alpha)
    return float(2 - binary_entropy((1 - alpha) / 2) - np.log2(1 + r) - (1 - r) * LOG2E)

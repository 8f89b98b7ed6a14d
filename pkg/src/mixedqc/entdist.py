"""Entanglement distribution through a separable mediator.

Qubits are ordered ``(a, b, c)``: Alice, Bob and the carrier ``c``.  Alice
applies CNOT(a -> c), sends ``c`` to Bob, who applies CNOT(b -> c).  Discord
is measured on ``c`` throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discord import BlochMeasurement, DiscordReport, OptimizerConfig, discord, post_measurement_states
from .negativity import multiplicative_negativity
from .qstate import CNOT, BipartiteSplit, embed_operator, hermitian_spectrum, ket, partial_transpose, projector

A, B, C = 0, 1, 2
MEASURE_C = BipartiteSplit((C,), 3)

_RHO = [(0, 0), (1, 1), (2, 2), (4, 4), (6, 6), (7, 7), (0, 6), (6, 0)]
_SIGMA = [(0, 0), (1, 1), (2, 2), (5, 5), (6, 6), (7, 7), (0, 7), (7, 0)]
_TAU = [(0, 0), (1, 1), (3, 3), (5, 5), (6, 6), (7, 7), (0, 6), (6, 0)]


def _sixths(entries) -> np.ndarray:
    m = np.zeros((8, 8), dtype=complex)
    for i, j in entries:
        m[i, j] = 1
    return m / 6


def printed_states() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three protocol states entered entry by entry (units of 1/6)."""
    return _sixths(_RHO), _sixths(_SIGMA), _sixths(_TAU)


def initial_state() -> np.ndarray:
    """``(1/6) sum_k |Psi_k, Psi_-k, 0><.| + (1/6) sum_i |i, i, 1><.|`` from its
    product-state definition, ``|Psi_k> = (|0> + i^k |1>)/sqrt 2``."""
    rho = np.zeros((8, 8), dtype=complex)
    for k in range(4):
        pk = (ket("0") + 1j**k * ket("1")) / np.sqrt(2)
        pmk = (ket("0") + 1j ** (-k) * ket("1")) / np.sqrt(2)
        rho += projector(np.kron(np.kron(pk, pmk), ket("0")))
    for i in "01":
        rho += projector(ket(i + i + "1"))
    return rho / 6


def apply_cnot(rho: np.ndarray, control: int, target: int) -> np.ndarray:
    """``U rho U^dag`` for a CNOT embedded on the given qubits."""
    if control == target:
        raise ValueError("control and target must differ")
    n = int(np.log2(np.asarray(rho).shape[0]))
    u = embed_operator(CNOT, (control, target), n)
    return u @ rho @ u.conj().T


def protocol_states() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(rho, sigma, tau)`` generated by the two CNOTs from the printed ``rho``."""
    rho = printed_states()[0]
    sigma = apply_cnot(rho, A, C)
    tau = apply_cnot(sigma, B, C)
    return rho, sigma, tau


def protocol_discord_accounting(config: OptimizerConfig | None = None) -> tuple[DiscordReport, ...]:
    """Discord of each state with ``c`` measured."""
    return tuple(discord(s, MEASURE_C, config, measured="A") for s in protocol_states())


def conditional_spectra(state: np.ndarray, theta: float, phi: float = 0.0):
    """``[(p_1, spectrum_1), (p_2, spectrum_2)]`` of the ``ab`` states after measuring ``c``."""
    out = []
    for p, r in post_measurement_states(state, MEASURE_C, BlochMeasurement(theta, phi)):
        out.append((p, hermitian_spectrum(r)))
    return out


def printed_conditional_spectra(which: str, theta: float):
    """Nonzero conditional spectra quoted for ``rho`` and ``sigma`` (descending)."""
    c, s = np.cos(theta), np.sin(theta)
    if which == "rho":
        s1 = [0.5, (1 + c) / (2 * (3 + c)), (1 + c) / (2 * (3 + c)), (1 - c) / (2 * (3 + c))]
        s2 = [0.5, (1 + c) / (2 * (3 - c)), (1 - c) / (2 * (3 - c)), (1 - c) / (2 * (3 - c))]
        probs = [(3 + c) / 6, (3 - c) / 6]
    elif which == "sigma":
        s1 = s2 = [np.cos(theta / 2) ** 2 / 3, np.sin(theta / 2) ** 2 / 3, (2 + s) / 6, (2 - s) / 6]
        probs = [0.5, 0.5]
    else:
        raise ValueError("which must be 'rho' or 'sigma'")
    return [(p, np.sort(np.array(v))[::-1]) for p, v in zip(probs, (s1, s2))]


@dataclass(frozen=True)
class EntanglementAudit:
    pt_spectra: dict  # (state name, transposed party) -> spectrum
    sigma_a_bc_entangled: bool
    tau_bell_probability: float
    tau_bell_negativity: float

    @property
    def ebit_rate(self) -> float:
        return self.tau_bell_probability * np.log2(self.tau_bell_negativity)


def protocol_entanglement_audit() -> EntanglementAudit:
    names = ("rho", "sigma", "tau")
    spectra = {}
    for name, state in zip(names, protocol_states()):
        for party, label in zip((A, B, C), "abc"):
            pt = partial_transpose(state, BipartiteSplit((party,), 3), on="A")
            spectra[(name, label)] = hermitian_spectrum(pt)
    tau = protocol_states()[2]
    # measure c in the standard basis, keep outcome 0
    (p0, ab0), _ = post_measurement_states(tau, MEASURE_C, BlochMeasurement(0.0, 0.0))
    neg = multiplicative_negativity(ab0, BipartiteSplit((0,), 2))
    return EntanglementAudit(
        pt_spectra=spectra,
        sigma_a_bc_entangled=bool(spectra[("sigma", "a")][-1] < -1e-10),
        tau_bell_probability=float(p0),
        tau_bell_negativity=float(neg),
    )

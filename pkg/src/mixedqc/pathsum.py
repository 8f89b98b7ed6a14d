"""Feynman path sums for the trace of {H, Toffoli} and {H, T, CNOT} circuits.

Sandwiching ``U`` between two layers of Hadamards turns the trace into an
unrestricted sum over paths:

    tr U = 2^-(n + h/2) sum_x exp(i pi chi(x) / 4) (-1)^psi(x)

Path bits are numbered: ``0..n-1`` the input string ``a``, ``n..2n-1`` the
outputs ``c`` of the first Hadamard layer, then one fresh bit per internal
Hadamard in circuit order.  Each wire carries a Z2 polynomial in these bits;
a Hadamard on a wire holding ``w`` adds ``w * v`` to ``psi`` and sets the wire
to a fresh bit ``v``.  The closing layer adds ``a_i * wire_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np

from . import kernels
from .qstate import CNOT as CNOT_MATRIX
from .qstate import H as H_MATRIX
from .qstate import T as T_MATRIX
from .qstate import apply_local, embed_operator
from .random_unitary import as_rng

MAX_COUNT_BITS = 26
MAX_SAMPLE_BITS = 62
MAX_ORACLE_QUBITS = 12

GATE_ARITY = {"H": 1, "T": 1, "CNOT": 2, "TOFFOLI": 3}
TOFFOLI_GATES = frozenset({"H", "TOFFOLI"})
CLIFFORD_T_GATES = frozenset({"H", "T", "CNOT"})

TOFFOLI_MATRIX = np.eye(8, dtype=complex)
TOFFOLI_MATRIX[[6, 7]] = TOFFOLI_MATRIX[[7, 6]]


@dataclass(frozen=True)
class GateCircuit:
    num_qubits: int
    gates: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        norm = []
        for name, qubits in self.gates:
            name = name.upper()
            qubits = tuple(int(q) for q in qubits)
            if name not in GATE_ARITY:
                raise ValueError(f"unknown gate {name!r}")
            if len(qubits) != GATE_ARITY[name]:
                raise ValueError(f"{name} takes {GATE_ARITY[name]} qubit(s), got {qubits}")
            if len(set(qubits)) != len(qubits):
                raise ValueError(f"{name} operands must be distinct, got {qubits}")
            if any(not 0 <= q < self.num_qubits for q in qubits):
                raise ValueError(f"{name} {qubits} out of range for {self.num_qubits} qubits")
            norm.append((name, qubits))
        object.__setattr__(self, "gates", tuple(norm))

    @property
    def gate_names(self) -> set[str]:
        return {g for g, _ in self.gates}

    def then(self, name: str, *qubits: int) -> "GateCircuit":
        return GateCircuit(self.num_qubits, self.gates + ((name, qubits),))


def parse_circuit(text: str) -> GateCircuit:
    """Read ``QUBITS n`` followed by one gate per line; ``#`` starts a comment."""
    n = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            args = [int(t) for t in tok[1:]]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer operand in {raw!r}") from None
        if tok[0].upper() == "QUBITS":
            if n is not None or len(args) != 1:
                raise ValueError(f"line {lineno}: bad QUBITS declaration")
            n = args[0]
        else:
            if n is None:
                raise ValueError(f"line {lineno}: gate before QUBITS header")
            gates.append((tok[0], tuple(args)))
    if n is None:
        raise ValueError("missing QUBITS header")
    return GateCircuit(n, tuple(gates))


def load_circuit(path) -> GateCircuit:
    return parse_circuit(Path(path).read_text())


def format_circuit(circuit: GateCircuit) -> str:
    lines = [f"QUBITS {circuit.num_qubits}"]
    lines += [" ".join([name] + [str(q) for q in qs]) for name, qs in circuit.gates]
    return "\n".join(lines) + "\n"


def random_circuit(num_qubits: int, num_gates: int, gate_set: str, rng) -> GateCircuit:
    """Uniformly random gates from ``gate_set`` ('toffoli' or 'clifford_t')."""
    rng = as_rng(rng)
    names = sorted(TOFFOLI_GATES if gate_set == "toffoli" else CLIFFORD_T_GATES)
    if gate_set not in ("toffoli", "clifford_t"):
        raise ValueError("gate_set must be 'toffoli' or 'clifford_t'")
    names = [g for g in names if GATE_ARITY[g] <= num_qubits]
    gates = []
    for _ in range(num_gates):
        name = names[rng.integers(len(names))]
        qubits = tuple(int(q) for q in rng.choice(num_qubits, GATE_ARITY[name], replace=False))
        gates.append((name, qubits))
    return GateCircuit(num_qubits, tuple(gates))


# --------------------------------------------------------------------------
# Z2 polynomials: frozensets of sorted index tuples, addition is XOR
# --------------------------------------------------------------------------


def _poly_var(v: int) -> frozenset:
    return frozenset({(v,)})


def _poly_add(p: frozenset, q: frozenset) -> frozenset:
    return p ^ q


def _poly_mul(p: frozenset, q: frozenset) -> frozenset:
    out = set()
    for m1 in p:
        for m2 in q:
            out ^= {tuple(sorted(set(m1) | set(m2)))}
    return frozenset(out)


def poly_degree(p) -> int:
    return max((len(m) for m in p), default=0)


def poly_eval(p, bits) -> int:
    return sum(all(bits[i] for i in m) for m in p) & 1


@dataclass
class PathPolynomialSystem:
    num_qubits: int
    num_path_bits: int
    h: int
    variant: str  # "cubic" or "quadratic+z8"
    psi: frozenset
    chi: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.chi is None:
            self.chi = np.zeros(self.num_path_bits, dtype=np.int64)

    @property
    def degree(self) -> int:
        return poly_degree(self.psi)

    def masks(self) -> np.ndarray:
        if self.num_path_bits > 63:
            raise ValueError("more than 63 path bits cannot be packed into int64 masks")
        return np.array([sum(1 << i for i in m) for m in sorted(self.psi)], dtype=np.int64)

    def amplitude(self, bits) -> complex:
        """Amplitude of one path, ``2^-(n + h/2) e^{i pi chi/4} (-1)^psi``."""
        chi = int(np.dot(self.chi, np.asarray(bits, dtype=np.int64))) % 8
        sign = -1 if poly_eval(self.psi, bits) else 1
        return sign * np.exp(1j * np.pi * chi / 4) / 2 ** (self.num_qubits + self.h / 2)


class _Compiler:
    def __init__(self, n: int):
        self.n = n
        self.next_var = 2 * n
        self.h = 0
        self.psi = frozenset()
        self.t_bits: list[int] = []
        self.wires = [_poly_var(n + q) for q in range(n)]
        for q in range(n):  # opening Hadamard layer: a_q -> c_q
            self.psi = _poly_add(self.psi, _poly_mul(_poly_var(q), _poly_var(n + q)))

    def hadamard(self, q: int):
        v = self.next_var
        self.next_var += 1
        self.h += 1
        self.psi = _poly_add(self.psi, _poly_mul(self.wires[q], _poly_var(v)))
        self.wires[q] = _poly_var(v)

    def finish(self, variant: str) -> PathPolynomialSystem:
        psi = self.psi
        for q in range(self.n):  # closing Hadamard layer: wire_q -> a_q
            psi = _poly_add(psi, _poly_mul(self.wires[q], _poly_var(q)))
        chi = np.zeros(self.next_var, dtype=np.int64)
        for v in self.t_bits:
            chi[v] = (chi[v] + 1) % 8
        return PathPolynomialSystem(self.n, self.next_var, self.h, variant, psi, chi)


def _check_gates(circuit: GateCircuit, allowed: frozenset):
    bad = circuit.gate_names - allowed
    if bad:
        raise ValueError(f"gate(s) {sorted(bad)} not in the set {sorted(allowed)}")


def compile_toffoli_path_sum(circuit: GateCircuit) -> PathPolynomialSystem:
    """``psi`` of degree at most 3; a Hadamard pair follows every Toffoli target."""
    _check_gates(circuit, TOFFOLI_GATES)
    comp = _Compiler(circuit.num_qubits)
    for name, qs in circuit.gates:
        if name == "H":
            comp.hadamard(qs[0])
        else:
            c1, c2, t = qs
            comp.wires[t] = _poly_add(comp.wires[t], _poly_mul(comp.wires[c1], comp.wires[c2]))
            comp.hadamard(t)
            comp.hadamard(t)
    return comp.finish("cubic")


def compile_clifford_t_path_sum(circuit: GateCircuit) -> PathPolynomialSystem:
    """Quadratic ``phi`` plus a Z8-linear ``chi``; a Hadamard pair precedes every T."""
    _check_gates(circuit, CLIFFORD_T_GATES)
    comp = _Compiler(circuit.num_qubits)
    for name, qs in circuit.gates:
        if name == "H":
            comp.hadamard(qs[0])
        elif name == "CNOT":
            c, t = qs
            comp.wires[t] = _poly_add(comp.wires[t], comp.wires[c])
        else:
            q = qs[0]
            comp.hadamard(q)
            comp.hadamard(q)
            comp.t_bits.append(comp.next_var - 1)
    return comp.finish("quadratic+z8")


def compile_path_sum(circuit: GateCircuit) -> PathPolynomialSystem:
    """Pick the compiler matching the gates present."""
    if circuit.gate_names <= CLIFFORD_T_GATES:
        return compile_clifford_t_path_sum(circuit)
    return compile_toffoli_path_sum(circuit)


def _phase_table() -> np.ndarray:
    return np.exp(1j * np.pi * np.arange(8) / 4)


def exact_trace_by_counting(polys: PathPolynomialSystem, normalized: bool = True) -> complex:
    """Enumerate every path, bucketing by ``(chi mod 8, psi)``.

    Returns ``tr(U)/2^n`` by default, ``tr(U)`` with ``normalized=False``.
    """
    if polys.num_path_bits > MAX_COUNT_BITS:
        raise ValueError(f"{polys.num_path_bits} path bits exceed the counting limit {MAX_COUNT_BITS}")
    counts = kernels.count_paths(polys.num_path_bits, polys.masks(), polys.chi)
    signed = (counts[:, 0] - counts[:, 1]).astype(float)
    total = complex(np.dot(_phase_table(), signed))
    scale = polys.num_qubits + polys.h / 2
    if normalized:
        scale += polys.num_qubits
    return total / 2.0**scale


@dataclass(frozen=True)
class TraceSampleReport:
    estimate: complex
    samples: int
    empirical_variance: float

    @property
    def std_error(self) -> float:
        return float(np.sqrt(self.empirical_variance / self.samples))


def path_statistics(polys: PathPolynomialSystem, xs) -> np.ndarray:
    """``2^{h/2} e^{i pi chi/4} (-1)^psi`` for each packed path ``x``."""
    par, ph = kernels.evaluate_paths(np.asarray(xs, dtype=np.int64), polys.masks(), polys.chi)
    sign = 1.0 - 2.0 * par.astype(float)
    return 2.0 ** (polys.h / 2) * sign * _phase_table()[ph.astype(np.int64)]


def sampled_trace(polys: PathPolynomialSystem, samples: int, rng) -> TraceSampleReport:
    """Uniform path sampling; unbiased for the normalized trace."""
    if samples < 1:
        raise ValueError("need at least one sample")
    if polys.num_path_bits > MAX_SAMPLE_BITS:
        raise ValueError(f"sampling supports at most {MAX_SAMPLE_BITS} path bits")
    rng = as_rng(rng)
    xs = rng.integers(0, 1 << polys.num_path_bits, size=samples, dtype=np.int64)
    vals = path_statistics(polys, xs)
    est = complex(vals.mean())
    var = float(np.mean(np.abs(vals - est) ** 2) * samples / max(samples - 1, 1))
    return TraceSampleReport(estimate=est, samples=int(samples), empirical_variance=var)


def circuit_unitary(circuit: GateCircuit) -> np.ndarray:
    n = circuit.num_qubits
    if n > MAX_ORACLE_QUBITS:
        raise ValueError(f"dense unitary limited to {MAX_ORACLE_QUBITS} qubits")
    u = np.eye(2**n, dtype=complex)
    for name, qs in circuit.gates:
        if name == "H":
            u = apply_local(u, H_MATRIX, qs[0], n)
        elif name == "T":
            u = apply_local(u, T_MATRIX, qs[0], n)
        elif name == "CNOT":
            u = embed_operator(CNOT_MATRIX, qs, n) @ u
        else:
            u = embed_operator(TOFFOLI_MATRIX, qs, n) @ u
    return u


def matrix_trace_oracle(circuit: GateCircuit, normalized: bool = True) -> complex:
    """Trace of the dense product of gate matrices, ``/2^n`` by default."""
    tr = complex(np.trace(circuit_unitary(circuit)))
    return tr / 2**circuit.num_qubits if normalized else tr


def hadamard_layer(k: int) -> GateCircuit:
    """``H`` on each of ``k`` qubits: traceless, ``h = k``, path variance ``2^k``."""
    return GateCircuit(k, tuple(("H", (q,)) for q in range(k)))


def path_count(polys: PathPolynomialSystem) -> int:
    return 1 << polys.num_path_bits


def monomial_count_bound(polys: PathPolynomialSystem) -> int:
    """Number of possible monomials of degree at most 3 (sanity bound)."""
    m = polys.num_path_bits
    return sum(comb(m, d) for d in range(4))

"""Slow, loop-based reference implementations used only by the tests.

They share no code with the package: indices are decoded bit by bit and
matrices are built entry by entry.
"""

import itertools

import numpy as np


def bits_of(index, n):
    return [(index >> (n - 1 - q)) & 1 for q in range(n)]


def index_of(bits):
    out = 0
    for b in bits:
        out = 2 * out + b
    return out


def partial_transpose_loop(a, qubits, n):
    out = np.zeros_like(a)
    for i in range(2**n):
        for j in range(2**n):
            bi, bj = bits_of(i, n), bits_of(j, n)
            for q in qubits:
                bi[q], bj[q] = bj[q], bi[q]
            out[index_of(bi), index_of(bj)] = a[i, j]
    return out


def partial_trace_loop(rho, keep, n):
    keep = sorted(keep)
    out = np.zeros((2 ** len(keep),) * 2, dtype=complex)
    for i in range(2**n):
        for j in range(2**n):
            bi, bj = bits_of(i, n), bits_of(j, n)
            if all(bi[q] == bj[q] for q in range(n) if q not in keep):
                out[index_of([bi[q] for q in keep]), index_of([bj[q] for q in keep])] += rho[i, j]
    return out


def embed_loop(op, qubits, n):
    """Dense ``op`` acting on ``qubits`` (first listed = most significant)."""
    k = len(qubits)
    out = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(2**n):
        for j in range(2**n):
            bi, bj = bits_of(i, n), bits_of(j, n)
            if any(bi[q] != bj[q] for q in range(n) if q not in qubits):
                continue
            out[i, j] = op[index_of([bi[q] for q in qubits]), index_of([bj[q] for q in qubits])]
    return out


def entropy_bits(p):
    p = np.asarray(p, dtype=float)
    p = p[p > 1e-15]
    return float(-(p * np.log(p)).sum() / np.log(2))


def vn_entropy(rho):
    return entropy_bits(np.linalg.eigvals(rho).real)


def measured_conditional_entropy(rho, n, qubit, theta, phi):
    """Average entropy of the other qubits after a projective measurement on ``qubit``."""
    a = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    sig = np.array([[a[2], a[0] - 1j * a[1]], [a[0] + 1j * a[1], -a[2]]])
    total = 0.0
    others = [q for q in range(n) if q != qubit]
    for sign in (1, -1):
        proj = embed_loop((np.eye(2) + sign * sig) / 2, [qubit], n)
        m = proj @ rho @ proj
        p = np.trace(m).real
        if p > 1e-14:
            total += p * vn_entropy(partial_trace_loop(m, others, n) / p)
    return total


def brute_force_discord(rho, n, qubit, grid_theta=91, grid_phi=72):
    """Discord with ``qubit`` measured, minimized over a uniform angle grid."""
    h_joint = vn_entropy(rho)
    h_meas = vn_entropy(partial_trace_loop(rho, [qubit], n))
    best = min(
        measured_conditional_entropy(rho, n, qubit, th, ph)
        for th, ph in itertools.product(np.linspace(0, np.pi, grid_theta),
                                        np.linspace(0, 2 * np.pi, grid_phi, endpoint=False))
    )
    return best - (h_joint - h_meas)


def haar_unitary_qr_independent(dim, rng):
    """Haar unitary via Gram-Schmidt on Gaussian columns (no QR call)."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    cols = []
    for k in range(dim):
        v = z[:, k].copy()
        for c in cols:
            v -= np.vdot(c, v) * c
        cols.append(v / np.linalg.norm(v))
    return np.array(cols).T

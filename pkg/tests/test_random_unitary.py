import numpy as np
import pytest
from scipy.stats import ks_2samp

from mixedqc.qstate import is_unitary, ket
from mixedqc.random_unitary import (
    DEFAULT_LAYERS, RandomCircuitSpec, apply_random_circuit_to_state, as_rng, haar_unitary,
    member_rng, mixing_operator, pseudo_random_unitary, random_su2, random_two_qubit_circuit, su2,
)
from oracles import haar_unitary_qr_independent


def test_rng_requires_seed():
    with pytest.raises(ValueError):
        as_rng(None)
    a = member_rng(2**64 - 1, 1).integers(1 << 30)
    b = as_rng(0).integers(1 << 30)
    assert a == b


def test_su2_examples():
    assert np.allclose(su2(0, 0, 0), np.eye(2))
    rng = np.random.default_rng(0)
    for _ in range(20):
        r = random_su2(rng)
        assert abs(abs(np.linalg.det(r)) - 1) < 1e-12
        assert np.allclose(r.conj().T @ r, np.eye(2), atol=1e-12)


def test_su2_mean_r00():
    # theta uniform on [0, pi/2]: E cos^2 theta = 1/2
    rng = np.random.default_rng(1)
    vals = [abs(random_su2(rng)[0, 0]) ** 2 for _ in range(100_000)]
    assert np.mean(vals) == pytest.approx(0.5, abs=0.01)


def test_mixing_operator_two_qubits():
    w = np.exp(1j * np.pi / 4)
    assert np.allclose(mixing_operator(2), np.diag([w, w.conj(), w.conj(), w]))
    with pytest.raises(ValueError):
        mixing_operator(1)


def test_mixing_operator_open_chain():
    # three qubits: Z1Z2 + Z2Z3 on |010> is -2
    assert mixing_operator(3)[2, 2] == pytest.approx(np.exp(-2j * np.pi / 4))


def test_pseudo_random_unitary_basics():
    import inspect

    assert inspect.signature(pseudo_random_unitary).parameters["layers"].default == DEFAULT_LAYERS == 40
    u = pseudo_random_unitary(4, 3)
    assert is_unitary(u)
    assert np.array_equal(u, pseudo_random_unitary(4, 3))
    with pytest.raises(ValueError):
        pseudo_random_unitary(1, 0)
    with pytest.raises(ValueError):
        pseudo_random_unitary(3, 0, layers=0)


def _spacings(u):
    ph = np.sort(np.angle(np.linalg.eigvals(u)))
    s = np.diff(np.concatenate([ph, [ph[0] + 2 * np.pi]]))
    return s * len(ph) / (2 * np.pi)


def test_pseudo_random_spacing_matches_cue():
    pr = np.concatenate([_spacings(pseudo_random_unitary(6, member_rng(100, i))) for i in range(200)])
    haar = np.concatenate([_spacings(haar_unitary(64, member_rng(900, i))) for i in range(200)])
    assert ks_2samp(pr, haar).pvalue > 0.01


def test_haar_examples():
    u = haar_unitary(1, 0)
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-12
    assert is_unitary(haar_unitary(16, 1))
    with pytest.raises(ValueError):
        haar_unitary(0, 0)


def test_haar_trace_moment():
    rng = np.random.default_rng(2)
    ours = np.mean([abs(np.trace(haar_unitary(16, rng))) ** 2 for _ in range(4000)])
    ref = np.mean([abs(np.trace(haar_unitary_qr_independent(16, rng))) ** 2 for _ in range(4000)])
    assert ours == pytest.approx(1, abs=0.05)
    assert ref == pytest.approx(1, abs=0.05)


def test_haar_left_invariance_of_entry_distribution():
    # |U_00|^2 of a Haar unitary of dimension d is Beta(1, d - 1)
    from scipy.stats import beta, kstest

    rng = np.random.default_rng(3)
    vals = [abs(haar_unitary(8, rng)[0, 0]) ** 2 for _ in range(3000)]
    assert kstest(vals, beta(1, 7).cdf).pvalue > 0.01


def test_random_circuit():
    assert np.allclose(random_two_qubit_circuit(RandomCircuitSpec(3, 0, 5)), np.eye(8))
    spec = RandomCircuitSpec(4, 8, 11)
    u = random_two_qubit_circuit(spec)
    assert is_unitary(u)
    psi = apply_random_circuit_to_state(spec, ket("0110"))
    assert np.allclose(psi, u @ ket("0110"))
    with pytest.raises(ValueError):
        RandomCircuitSpec(1, 2, 0)

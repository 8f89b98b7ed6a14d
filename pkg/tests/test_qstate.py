import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedqc.dqc1 import block_state
from mixedqc.entdist import printed_states
from mixedqc.discord import horodecki_state
from mixedqc.qstate import (
    CNOT, I2, BipartiteSplit, Z, bell_state, binary_entropy, check_density_matrix, embed_operator,
    hermitian_spectrum, ket, operator_fidelity, partial_trace, partial_transpose,
    partial_transpose_qubits, projector, random_density_matrix, random_pure_state, reduced_state,
    singular_values, tensor_product, von_neumann_entropy,
)
from mixedqc.random_unitary import haar_unitary
from oracles import embed_loop, partial_trace_loop, partial_transpose_loop


def test_split_validation():
    s = BipartiteSplit((2, 0), 4)
    assert s.part_a == (0, 2) and s.part_b == (1, 3)
    assert s.d_a == 4 and s.swapped().part_a == (1, 3)
    for bad in [((), 3), ((0, 1, 2), 3), ((0, 0), 3), ((3,), 3)]:
        with pytest.raises(ValueError):
            BipartiteSplit(*bad)


def test_tensor_product_examples():
    assert np.allclose(tensor_product(I2, I2), np.eye(4))
    assert np.allclose(tensor_product(projector(ket("0")), I2 / 2), np.diag([0.5, 0.5, 0, 0]))
    assert np.allclose(tensor_product(Z, Z), np.diag([1, -1, -1, 1]))


def test_embed_operator_matches_loop():
    rng = np.random.default_rng(1)
    g = haar_unitary(4, rng)
    for qubits in [(0, 1), (2, 0), (1, 3)]:
        assert np.allclose(embed_operator(g, qubits, 4), embed_loop(g, qubits, 4))


def test_partial_trace_examples():
    rng = np.random.default_rng(2)
    ra, rb = random_density_matrix(1, rng), random_density_matrix(2, rng)
    split = BipartiteSplit((0,), 3)
    assert np.allclose(partial_trace(np.kron(ra, rb), split, "A"), ra)
    assert np.allclose(partial_trace(np.kron(ra, rb), split, "B"), rb)
    assert np.allclose(partial_trace(bell_state(), BipartiteSplit((0,), 2), "A"), np.eye(2) / 2)


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_horodecki_reduced_state(p):
    rho_m = partial_trace(horodecki_state(p), BipartiteSplit((0,), 3), "A")
    assert np.allclose(rho_m, np.diag([4 * p, 1 + 3 * p]) / (1 + 7 * p), atol=1e-12)


def test_partial_trace_matches_loop():
    rng = np.random.default_rng(3)
    rho = random_density_matrix(4, rng)
    for keep in [(0,), (1, 3), (0, 2, 3)]:
        assert np.allclose(reduced_state(rho, keep), partial_trace_loop(rho, keep, 4))


def test_partial_transpose_matches_loop():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    for qubits in [(0,), (1, 2), (0, 3)]:
        split = BipartiteSplit(qubits, 4)
        assert np.allclose(partial_transpose(a, split, on="A"), partial_transpose_loop(a, qubits, 4))
        assert np.allclose(partial_transpose_qubits(a, qubits), partial_transpose_loop(a, qubits, 4))


def test_partial_transpose_examples():
    rng = np.random.default_rng(5)
    ra, rb = random_density_matrix(1, rng), random_density_matrix(1, rng)
    split = BipartiteSplit((0,), 2)
    pt = partial_transpose(np.kron(ra, rb), split, on="B")
    assert np.allclose(pt, np.kron(ra, rb.T))
    assert np.allclose(hermitian_spectrum(pt), hermitian_spectrum(np.kron(ra, rb)))
    bell = hermitian_spectrum(partial_transpose(bell_state(), split, on="B"))
    assert np.allclose(bell, [0.5, 0.5, 0.5, -0.5])
    sigma = printed_states()[1]
    spec = hermitian_spectrum(partial_transpose(sigma, BipartiteSplit((0,), 3), on="A"))
    assert np.allclose(spec, [1 / 6] * 7 + [-1 / 6], atol=1e-12)


def test_partial_transpose_errors():
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4), BipartiteSplit((0,), 3))
    with pytest.raises(ValueError):
        partial_transpose(np.eye(6), BipartiteSplit((0,), 2))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.data())
def test_partial_transpose_trace_lemma(seed, n, data):
    """tr(A^T_B B) = tr(A B^T_B) for any operators."""
    rng = np.random.default_rng(seed)
    k = data.draw(st.integers(1, n - 1))
    split = BipartiteSplit(tuple(range(k)), n)
    d = 2**n
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    lhs = np.trace(partial_transpose(a, split) @ b)
    rhs = np.trace(a @ partial_transpose(b, split))
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
    assert np.allclose(partial_transpose(partial_transpose(a, split), split), a)


def test_spectrum_examples():
    assert np.allclose(hermitian_spectrum(np.eye(4) / 4), [0.25] * 4)
    u = haar_unitary(8, np.random.default_rng(6))
    for alpha in (1.0, 0.4):
        spec = hermitian_spectrum(block_state(u, alpha))
        want = np.sort([(1 + alpha) / 16] * 8 + [(1 - alpha) / 16] * 8)[::-1]
        assert np.allclose(spec, want)
    with pytest.raises(ValueError):
        hermitian_spectrum(np.array([[0, 1], [0, 0]]))


def test_horodecki_spectrum_formula():
    p = 0.5
    den = 1 + 7 * p
    root = np.sqrt(1 + 12 * p + 23 * p**2 - 70 * p**3 + 98 * p**4)
    quad = [(1 + 9 * p + 14 * p**2 - s * root) / (2 * (1 + 14 * p + 49 * p**2)) for s in (1, -1)]
    want = np.sort([0, 0, 0, p / den, 2 * p / den, 2 * p / den] + quad)[::-1]
    assert np.allclose(hermitian_spectrum(horodecki_state(p)), want, atol=1e-12)


def test_singular_values_examples():
    u = haar_unitary(8, np.random.default_rng(7))
    assert np.allclose(singular_values(u), 1)
    a = np.diag([3.0, -2.0, 0.5])
    assert np.allclose(singular_values(a), [3, 2, 0.5])


def test_entropy_examples():
    assert von_neumann_entropy(projector(random_pure_state(8, np.random.default_rng(8)))) == pytest.approx(0, abs=1e-9)
    assert von_neumann_entropy(np.eye(8) / 8) == pytest.approx(3)
    u = haar_unitary(8, np.random.default_rng(9))
    alpha = 0.7
    tau = np.trace(u) / 8
    rho_m = reduced_state(block_state(u, alpha), [0])
    assert von_neumann_entropy(rho_m) == pytest.approx(binary_entropy((1 - alpha * abs(tau)) / 2))


def test_operator_fidelity_examples():
    rng = np.random.default_rng(10)
    a = rng.standard_normal((4, 4))
    assert operator_fidelity(a, a) == pytest.approx(1)
    assert operator_fidelity(projector(ket("01")), projector(ket("10"))) == pytest.approx(0)
    p1, p2 = random_pure_state(4, rng), random_pure_state(4, rng)
    assert operator_fidelity(projector(p1), projector(p2)) == pytest.approx(abs(np.vdot(p1, p2)) ** 2)
    with pytest.raises(ValueError):
        operator_fidelity(np.zeros((2, 2)), np.eye(2))


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        check_density_matrix(np.diag([1.2, -0.2]))
    with pytest.raises(ValueError):
        check_density_matrix(np.eye(2))
    check_density_matrix(CNOT @ bell_state() @ CNOT)

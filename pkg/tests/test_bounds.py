import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import fsolve

from mixedqc.bounds import (
    DegeneracyTriple, bound_s12, bound_s12_integer, bound_s123, bound_s123_asymptotic,
    candidate_triples, moment_constraints, optimal_degeneracy_fraction, solve_triple,
    triple_objective,
)
from mixedqc.dqc1 import block_state
from mixedqc.negativity import dqc1_negativity_fast, near_equal_split
from mixedqc.qstate import BipartiteSplit, partial_transpose
from mixedqc.random_unitary import haar_unitary, pseudo_random_unitary


def test_bound_s12_examples():
    assert bound_s12(1) == pytest.approx(np.sqrt(2), abs=1e-12)
    assert bound_s12(0) == 1
    assert optimal_degeneracy_fraction(1) == pytest.approx(1 - 1 / np.sqrt(2))
    with pytest.raises(ValueError):
        bound_s12(1.2)


def _s12_scan(N, alpha):
    # negative eigenvalue with multiplicity t, the rest equal and positive;
    # solve the s = 1, 2 constraints for the two values by hand
    best = -np.inf
    for t in range(1, 2 * N):
        q = 2 * N - t
        s2 = (1 + alpha**2) / (2 * N)
        # t a + q b = 1, t a^2 + q b^2 = s2, a < 0
        disc = (s2 * (t + q) - 1) * q / t
        a = (1 - np.sqrt(max(disc, 0))) / (t + q)
        b = (1 - t * a) / q
        best = max(best, t * abs(a) + q * abs(b))
    return best


@pytest.mark.parametrize("N", [2, 4, 8, 16])
@pytest.mark.parametrize("alpha", [1.0, 0.6])
def test_bound_s12_integer_against_scan(N, alpha):
    assert bound_s12_integer(N, alpha) == pytest.approx(_s12_scan(N, alpha), abs=1e-12)
    assert bound_s12_integer(N, alpha) <= bound_s12(alpha) + 1e-12


def test_bound_s12_integer_limit_and_errors():
    vals = [bound_s12_integer(2**k, 1.0) for k in (2, 6, 12, 20)]
    assert vals[-1] == pytest.approx(np.sqrt(2), abs=1e-5)
    assert all(v < np.sqrt(2) for v in vals)
    assert bound_s12_integer(8, 0.0) == 1
    with pytest.raises(ValueError):
        bound_s12_integer(6, 1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_moment_constraints_match_states(seed, alpha):
    u = haar_unitary(8, seed)
    pt = partial_transpose(block_state(u, alpha), BipartiteSplit((0, 1), 4))
    ev = np.linalg.eigvalsh(pt)
    for s in (1, 2, 3):
        assert np.sum(ev**s) == pytest.approx(moment_constraints(8, alpha, s), abs=1e-12)


def test_moment_constraints_examples():
    assert moment_constraints(16, 0.3, 1) == pytest.approx(1)
    assert moment_constraints(16, 1.0, 2) == pytest.approx(1 / 16)
    with pytest.raises(ValueError):
        moment_constraints(16, 1.0, 4)


def _fsolve_triple(triple, guess):
    u, v, w = triple.u, triple.v, triple.w
    N = triple.total // 2

    def f(x):
        a, b, c = x
        return [u * a**s + v * b**s + w * c**s - N ** (1 - s) for s in (1, 2, 3)]

    x, info, ier, _ = fsolve(f, guess, full_output=True, xtol=1e-14)
    return x if ier == 1 and np.max(np.abs(f(x))) < 1e-12 else None


@pytest.mark.parametrize("triple", [DegeneracyTriple(1, 1, 6), DegeneracyTriple(3, 1, 12),
                                    DegeneracyTriple(5, 1, 26), DegeneracyTriple(2, 3, 11)])
def test_solve_triple_against_fsolve(triple):
    sols = solve_triple(triple)
    N = triple.total // 2
    for sol in sols:
        for s in (1, 2, 3):
            got = triple.u * sol[0] ** s + triple.v * sol[1] ** s + triple.w * sol[2] ** s
            assert got == pytest.approx(moment_constraints(N, 1.0, s), abs=1e-12)
        ref = _fsolve_triple(triple, np.array(sol) * (1 + 1e-3))
        assert ref is not None and np.allclose(ref, sol, atol=1e-10)


def test_solve_triple_rejects_odd_total():
    with pytest.raises(ValueError):
        solve_triple(DegeneracyTriple(1, 1, 5))
    with pytest.raises(ValueError):
        DegeneracyTriple(-1, 1, 4)


def test_bound_s123_small():
    res = bound_s123(4)
    assert res.bound == pytest.approx(1.25, abs=1e-9)
    assert res.triple == DegeneracyTriple(1, 1, 6)
    a, b, c = res.eigenvalues
    assert (a, b, c) == pytest.approx((-1 / 8, 3 / 8, 1 / 8))
    assert triple_objective(res.triple, res.eigenvalues) == pytest.approx(res.bound)


def test_bound_s123_frozen_values():
    # brute force over every triple, cross-checked with an independent fsolve
    frozen = {8: (1.2783387577791028, (3, 1, 12)), 16: (1.3003194072170954, (5, 1, 26))}
    for N, (val, trip) in frozen.items():
        res = bound_s123(N)
        assert res.bound == pytest.approx(val, abs=1e-9)
        assert (res.triple.u, res.triple.v, res.triple.w) == trip


def test_candidate_triples_count():
    assert sum(1 for _ in candidate_triples(4)) == 45
    big = list(candidate_triples(64))
    assert all(t.total == 128 for t in big)


def test_bounds_ordering():
    for N in (4, 8, 16):
        assert bound_s123(N).bound <= bound_s12_integer(N, 1.0) + 1e-12
    assert bound_s123_asymptotic(10**9) == pytest.approx(np.sqrt(2), abs=1e-3)
    with pytest.raises(ValueError):
        bound_s123(1)


def test_negativities_respect_bounds():
    for total in (3, 4, 5):
        N = 2 ** (total - 1)
        b = bound_s123(N).bound
        for i in range(20):
            u = pseudo_random_unitary(total - 1, 1000 * total + i) if total > 2 else haar_unitary(N, i)
            for k in range(1, total):
                split = BipartiteSplit(tuple(range(total - k)), total)
                assert dqc1_negativity_fast(u, 1.0, split) <= b + 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_odd_powers_of_offdiagonal_block_are_traceless(n):
    from mixedqc.negativity import family_unitary, transposed_unitary

    N = 2**n
    for u in (family_unitary(n), haar_unitary(N, n)):
        ut = transposed_unitary(u, near_equal_split(n + 1))
        c = np.block([[np.zeros((N, N)), ut.conj().T], [ut, np.zeros((N, N))]])
        ck = np.eye(2 * N)
        for k in range(1, 6):
            ck = ck @ c
            if k % 2:
                assert abs(np.trace(ck)) < 1e-9
        assert np.trace(c @ c).real == pytest.approx(2 * N)

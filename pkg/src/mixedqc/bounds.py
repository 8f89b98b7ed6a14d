"""Upper bounds on the one-clean-qubit negativity from the power sums of the
partially transposed output state.

The transposed state is ``2N x 2N``.  Its power sums are fixed by alpha alone
for s = 1, 2, 3, which limits how much weight the negative eigenvalues can
carry.  Eigenvalues are handled here in the scaled form ``a = N lambda`` so
that all three constraints read ``sum_j a_j^s = N`` at alpha = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

RESIDUAL_TOL = 1e-10
BRUTE_FORCE_MAX_2N = 78
WINDOW = 3


@dataclass(frozen=True)
class DegeneracyTriple:
    u: int
    v: int
    w: int

    def __post_init__(self):
        if min(self.u, self.v, self.w) < 0:
            raise ValueError("degeneracies must be nonnegative")

    @property
    def total(self) -> int:
        return self.u + self.v + self.w


@dataclass(frozen=True)
class S123Result:
    bound: float
    triple: DegeneracyTriple
    eigenvalues: tuple[float, float, float]


def _check_alpha(alpha: float) -> float:
    if abs(alpha) > 1:
        raise ValueError(f"polarization must satisfy |alpha| <= 1, got {alpha}")
    return abs(float(alpha))


def moment_constraints(N: int, alpha: float, s: int) -> float:
    """``sum_j lambda_j^s`` of the transposed output state for ``s`` in 1..3."""
    if s not in (1, 2, 3):
        raise ValueError("only s = 1, 2, 3 are fixed by alpha alone")
    return ((1 + alpha) ** s + (1 - alpha) ** s) / (2**s * N ** (s - 1))


def bound_s12(alpha: float) -> float:
    return float(np.sqrt(1 + _check_alpha(alpha) ** 2))


def optimal_degeneracy_fraction(alpha: float) -> float:
    """Continuous optimum ``t/N = 1 - 1/sqrt(1 + alpha^2)``."""
    return 1 - 1 / bound_s12(alpha)


def _s12_value(N: int, alpha: float, t):
    t = np.asarray(t, dtype=float)
    return (N - t + alpha * np.sqrt(t * (2 * N - t))) / N


def bound_s12_integer(N: int, alpha: float) -> float:
    """Best value of the s = 1, 2 bound when the negative eigenvalue's
    multiplicity ``t`` must be an integer."""
    alpha = _check_alpha(alpha)
    if N < 2 or N & (N - 1):
        raise ValueError("N must be a power of two, at least 2")
    if alpha == 0:
        return 1.0
    t_star = N * optimal_degeneracy_fraction(alpha)
    cand = {int(np.floor(t_star)), int(np.ceil(t_star))}
    cand = [t for t in cand if 1 <= t <= 2 * N - 1] or [1]
    best = float(np.max(_s12_value(N, alpha, cand)))
    if N <= 2**10:
        best = max(best, float(np.max(_s12_value(N, alpha, np.arange(1, 2 * N)))))
    return best


# --------------------------------------------------------------------------
# s = 1, 2, 3 at alpha = 1
# --------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _resultant_coefficients():
    """Coefficients (in ``a``) of the resultant that eliminates ``b`` after
    ``c = (N - u a - v b)/w`` has been substituted; a callable of (u, v, w, N)."""
    import sympy as sp

    u, v, w, a, b, n = sp.symbols("u v w a b N")
    c = (n - u * a - v * b) / w
    e2 = sp.expand((u * a**2 + v * b**2 + w * c**2 - n) * w)
    e3 = sp.expand((u * a**3 + v * b**3 + w * c**3 - n) * w**2)
    res = sp.Poly(sp.resultant(e2, e3, b), a)
    funcs = [sp.lambdify((u, v, w, n), co, "math") for co in res.all_coeffs()]
    return lambda *args: np.array([float(f(*args)) for f in funcs])


def _residuals(weights, vals, N):
    weights = np.asarray(weights, dtype=float)
    vals = np.asarray(vals, dtype=float)
    return np.array([np.dot(weights, vals**s) - N for s in (1, 2, 3)]) / N


def _polish(weights, vals, N, steps=8):
    weights = np.asarray(weights, dtype=float)
    x = np.asarray(vals, dtype=float).copy()
    for _ in range(steps):
        f = np.array([np.dot(weights, x**s) - N for s in (1, 2, 3)])
        jac = np.array([s * weights * x ** (s - 1) for s in (1, 2, 3)])
        try:
            step = np.linalg.lstsq(jac, f, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        x = x - step
        if np.max(np.abs(step)) < 1e-15 * max(1.0, np.max(np.abs(x))):
            break
    return x


def _two_atom_solutions(p: int, q: int, N: int) -> list[tuple[float, float]]:
    # p a + q b = N,  p a^2 + q b^2 = N  ->  quadratic in a
    coeffs = [p + p * p / q, -2 * p * N / q, N * N / q - N]
    out = []
    for r in np.roots(coeffs):
        if abs(r.imag) > 1e-8 * (1 + abs(r.real)):
            continue
        a = r.real
        b = (N - p * a) / q
        x = _polish([p, q], [a, b], N)
        if np.max(np.abs(_residuals([p, q], x, N))) < RESIDUAL_TOL:
            out.append((float(x[0]), float(x[1])))
    return out


def solve_triple(triple: DegeneracyTriple) -> list[tuple[float, float, float]]:
    """All real ``(A, B, C)`` (unscaled eigenvalues) meeting the three moment
    constraints with multiplicities ``(u, v, w)``."""
    u, v, w = triple.u, triple.v, triple.w
    two_n = triple.total
    if two_n % 2:
        raise ValueError("u + v + w must be even")
    N = two_n // 2
    sols = []
    nz = [i for i, m in enumerate((u, v, w)) if m > 0]
    mult = (u, v, w)
    if len(nz) == 3:
        coeffs = _resultant_coefficients()(u, v, w, N)
        coeffs = coeffs / np.max(np.abs(coeffs))
        for r in np.roots(np.trim_zeros(coeffs, "f")):
            if abs(r.imag) > 1e-6 * (1 + abs(r.real)):
                continue
            a = r.real
            # quadratic in b from the s = 2 constraint
            k = N - u * a
            qb = [v + v * v / w, -2 * v * k / w, u * a * a + k * k / w - N]
            for rb in np.roots(qb):
                if abs(rb.imag) > 1e-6 * (1 + abs(rb.real)):
                    continue
                b = rb.real
                c = (N - u * a - v * b) / w
                x = _polish(mult, [a, b, c], N)
                if np.max(np.abs(_residuals(mult, x, N))) < RESIDUAL_TOL:
                    sols.append(tuple(float(t) for t in x))
    elif len(nz) == 2:
        i, j = nz
        for x, y in _two_atom_solutions(mult[i], mult[j], N):
            vals = [0.0, 0.0, 0.0]
            vals[i], vals[j] = x, y
            sols.append(tuple(vals))
    # one nonzero multiplicity: a = 1/2 for all 2N eigenvalues fails s = 2
    uniq = []
    for s in sols:
        if not any(np.allclose(s, t, atol=1e-12) for t in uniq):
            uniq.append(s)
    return [tuple(x / N for x in s) for s in uniq]


def triple_objective(triple: DegeneracyTriple, eigenvalues) -> float:
    a, b, c = eigenvalues
    return triple.u * abs(a) + triple.v * abs(b) + triple.w * abs(c)


def candidate_triples(N: int, u_values=None):
    """Every ordered triple for ``2N <= 78``; otherwise triples with ``u`` in
    ``u_values`` (default: a window around ``[N(1 - 1/sqrt 2)]``) and small ``v``."""
    two_n = 2 * N
    if u_values is None and two_n <= BRUTE_FORCE_MAX_2N:
        for u in range(two_n + 1):
            for v in range(two_n + 1 - u):
                yield DegeneracyTriple(u, v, two_n - u - v)
        return
    if u_values is None:
        u_values = _window(N)
    for u, v in product(u_values, range(0, 1 + WINDOW + 1)):
        if u >= 0 and two_n - u - v >= 0:
            yield DegeneracyTriple(u, v, two_n - u - v)


def _window(N: int) -> range:
    u0 = int(round(N * (1 - 1 / np.sqrt(2))))
    return range(u0 - WINDOW, u0 + WINDOW + 1)


def _canonical(triple: DegeneracyTriple, vals) -> tuple[DegeneracyTriple, tuple]:
    # negative eigenvalues first, then positive ones from largest to smallest
    atoms = sorted(zip((triple.u, triple.v, triple.w), vals),
                   key=lambda mv: (mv[1] >= 0, mv[1] if mv[1] < 0 else -mv[1]))
    return DegeneracyTriple(*(m for m, _ in atoms)), tuple(float(x) for _, x in atoms)


def bound_s123(N: int) -> S123Result:
    """Largest ``u|A| + v|B| + w|C|`` over triples and consistent eigenvalues.

    The reported triple is relabelled so that ``u`` counts the negative
    eigenvalue and ``v`` the largest positive one.
    """
    if not 2 <= N <= 1024:
        raise ValueError("need 4 <= 2N <= 2048")
    if 2 * N <= BRUTE_FORCE_MAX_2N:
        best = _best_over(candidate_triples(N))
    else:
        # The window is a starting point; it is widened while its edge still
        # holds the maximum so the search cannot stop on a slope.
        lo, hi = _window(N).start, _window(N).stop - 1
        best = _best_over(candidate_triples(N, range(lo, hi + 1)))
        while best is not None:
            if best.triple.u == hi and hi < 2 * N:
                hi += 1
                cand = _best_over(candidate_triples(N, [hi]))
            elif best.triple.u == lo and lo > 0:
                lo -= 1
                cand = _best_over(candidate_triples(N, [lo]))
            else:
                break
            if cand is None or cand.bound <= best.bound + 1e-13:
                break
            best = cand
    if best is None:
        raise RuntimeError(f"no triple admits a real solution for N = {N}")
    return best


def _best_over(triples) -> S123Result | None:
    best = None
    for triple in triples:
        for vals in solve_triple(triple):
            val = triple_objective(triple, vals)
            if best is None or val > best.bound + 1e-13:
                t, ev = _canonical(triple, vals)
                best = S123Result(bound=float(val), triple=t, eigenvalues=ev)
    return best


def bound_s123_asymptotic(N: int) -> float:
    """Large-N form ``sqrt 2 - 2^(-7/6) N^(-1/3)``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    return float(np.sqrt(2) - 2 ** (-7 / 6) * N ** (-1 / 3))

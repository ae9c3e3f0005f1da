from fractions import Fraction as F
import math
import random

import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sint

from toricheight import concave as C
from toricheight import heights as H
from toricheight import polytope as P
from toricheight.polytope import DomainError
from toricheight.sampling import random_pa_function

TRAP = P.hull([(0, 0), (1, 0), (0, 1), (2, 1)])


def tent():
    return C.concave_pa([((1,), 0), ((-1,), 1)])


def test_degree():
    for n in (1, 2, 3):
        assert H.degree(P.standard_simplex(n)) == 1
    assert H.degree(TRAP) == 3
    for r in (1, 4, 7):
        assert H.degree(P.hull([(0,), (r,)])) == r


def test_local_height_examples():
    assert H.local_height(C.support_function(P.standard_simplex(2))) == 0
    assert H.local_height(tent()) == -2
    assert H.local_height(tent(), F(1, 3)) == F(-2, 3)
    assert H.local_height(H.fubini_study_roof(1)) == F(1, 2)


def test_local_height_rejects_unbounded_stab():
    with pytest.raises(DomainError):
        H.local_height(C.affine((1,), 0))


def test_mixed_local_height_unmixed():
    psi = tent()
    assert H.mixed_local_height([psi, psi]) == H.local_height(psi)


def test_mixed_local_height_inclusion_exclusion():
    # two 1-dim roofs: g0 = dual of the tent on [-1,1], g1 = zero on [0,1]
    psi0, psi1 = tent(), C.support_function(P.hull([(0,), (1,)]))
    g0, g1 = C.dual(psi0), C.dual(psi1)
    both = C.sup_convolution(g0, g1)
    integ = lambda g: C.integrate_pa(g, g.domain)
    want = integ(both) - integ(g0) - integ(g1)
    assert H.mixed_local_height([psi0, psi1]) == want


def test_global_heights():
    for n in (1, 2):
        s = P.standard_simplex(n)
        assert H.global_height(H.ToricMetric.canonical(s, ("inf", 2, 3))) == 0
    fs1 = H.ToricMetric(P.standard_simplex(1), (H.Place("inf", H.fubini_study_roof(1)),))
    assert H.global_height(fs1) == F(1, 2)
    zero2 = C.concave_pa([((0, 0), 0)], P.standard_simplex(2))
    fs2 = H.ToricMetric(P.standard_simplex(2), (H.Place("inf", H.fubini_study_roof(2)), H.Place(5, zero2)))
    assert H.global_height(fs2) == F(5, 4)


def test_face_heights():
    psi = C.support_function(P.standard_simplex(2))
    assert H.face_local_height(psi, P.hull([(1, 0)])) == 0
    fs = H.fubini_study_roof(2)
    assert H.face_local_height(fs, P.hull([(1, 0), (0, 0)])) == H.fubini_study_height(1)
    assert H.face_local_height(tent(), P.hull([(-1,), (1,)])) == H.local_height(tent())
    fs3 = H.fubini_study_roof(3)
    facet = P.hull([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    assert H.face_local_height(fs3, facet) == H.fubini_study_height(2)


def test_pullback_heights():
    psi = tent()
    assert H.pullback_height(psi, [(1,)]) == H.local_height(psi)
    sq = C.support_function(P.cube(2))
    assert H.pullback_height(sq, [(1,), (1,)], (1, 0)) == -1
    assert H.pullback_height(C.support_function(P.standard_simplex(2)), [(1,), (2,)]) == 0


def test_pullback_rejects_non_saturated():
    with pytest.raises(DomainError):
        H.pullback_height(C.support_function(P.cube(2)), [(2,), (2,)])


def test_polytope_metric_heights():
    unit = P.hull([(0,), (1,)])
    assert H.polytope_metric_height(unit, [((1,), 0)], [1]).value == F(1, 2)
    for n, want in [(1, F(1, 2)), (2, F(5, 4)), (3, F(13, 6))]:
        roof = H.fubini_study_roof(n)
        res = H.polytope_metric_height(roof.polytope, roof.forms, roof.weights)
        assert res.value == want
        assert res.general == pytest.approx(float(want), rel=1e-10)


def test_polytope_metric_general_route_on_square():
    sq = P.cube(2)
    forms = [((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)]
    res = H.polytope_metric_height(sq, forms, [F(1, 2)] * 4)
    assert res.simplex is None
    roof = H.EntropyRoof(sq, tuple(forms), (F(1, 2),) * 4)
    want, _ = sint.dblquad(lambda y, x: roof((x, y)), 0, 1, 0, 1, epsabs=1e-12)
    assert res.general == pytest.approx(6 * want, rel=1e-8)


@pytest.mark.parametrize("n,want", [(1, F(1, 2)), (2, F(5, 6)), (3, F(13, 12))])
def test_entropy_average_simplex(n, want):
    s = P.standard_simplex(n)
    assert H.entropy_average(s, s, F(1, 2)) == want


@pytest.mark.parametrize("n,want", [(0, 0), (1, F(1, 2)), (2, F(5, 4)), (6, F(223, 40))])
def test_fubini_study_height(n, want):
    assert H.fubini_study_height(n) == want


def test_curve_heights():
    assert H.curve_local_height([1], [1], "inf") == pytest.approx(0.5)
    assert H.curve_local_height([1, 2], [1, 1], "inf") == pytest.approx(1 + math.pi / (3 * math.sqrt(3)))
    assert H.curve_local_height([1], [2], 2) == pytest.approx(-math.log(2))
    assert H.curve_global_height([1], [2]) == pytest.approx(0.5, abs=1e-12)
    assert H.curve_global_height([1, 2, 3], [1, 1, 1]) == pytest.approx(1.5 + math.pi / 2)


def test_curve_global_is_sum_of_locals():
    m, p = [1, 3, 4], [F(2), F(-1, 3), F(5, 4)]
    total = H.curve_local_height(m, p, "inf") + sum(H.curve_local_height(m, p, q) for q in H.curve_places(p))
    assert H.curve_global_height(m, p) == pytest.approx(total, rel=1e-10)


@pytest.mark.parametrize("bad", [([2, 4], [1, 1]), ([2, 1], [1, 1]), ([1, 2], [1, 0]), ([1], [1, 1])])
def test_curve_input_errors(bad):
    with pytest.raises(DomainError):
        H.curve_global_height(*bad)


def test_veronese():
    assert H.veronese_height(1) == {"symbolic": "1/2", "float": 0.5}
    v3 = H.veronese_height(3)
    assert v3["symbolic"] == "3/2 + pi/2"
    assert v3["float"] == pytest.approx(1.5 + math.pi / 2, abs=1e-12)
    assert H.veronese_height(7)["float"] == pytest.approx(3.5 + (1 + math.sqrt(2)) * math.pi, abs=1e-12)


def test_bundles():
    assert H.bundle_height(1, [1, 1]) == {"degree": 2, "height": 3}
    assert H.bundle_height(1, [1, 2]) == {"degree": 3, "height": F(23, 4)}
    assert H.bundle_height(1, [1, 1, 1]) == {"degree": 3, "height": 8}
    assert H.bundle_A(1, 2, (1, 0, 0)) == F(5, 3)
    assert H.degree(H.bundle_polytope(1, [1, 2])) == 3
    assert set(H.bundle_polytope(1, [1, 2]).vertices) == set(TRAP.vertices)


@pytest.mark.parametrize("a", [[0, 1], [2, 1], [1, F(3, 2)]])
def test_bundle_input_errors(a):
    with pytest.raises(DomainError):
        H.bundle_height(1, a)


@given(st.integers(0, 10_000))
def test_two_path_local_height_random(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    psi = random_pa_function(rng, n, pieces=rng.randint(n + 1, 5))
    lam = F(rng.randint(1, 5), rng.randint(1, 3))
    h = H.local_height(psi, lam)
    assert isinstance(h, F)
    assert h == math.factorial(n + 1) * lam * H.local_height_by_cells(psi)


def _random_curve(rng):
    r = rng.randint(1, 3)
    m = sorted(rng.sample(range(1, 7), r))
    while math.gcd(*m) != 1:
        m = sorted(rng.sample(range(1, 7), r))
    p = [F(rng.choice([1, -1]) * rng.choice([1, 2, 3, 4, 6, 9, 12]), rng.choice([1, 2, 3, 8])) for _ in m]
    return m, p


@given(st.integers(0, 10_000))
def test_non_archimedean_roof_matches_curve_height(seed):
    # the roof at a prime q is the upper envelope of (m_i, log|p_i|_q) together with (0, 0)
    from toricheight.univariate import p_adic_valuation
    rng = random.Random(seed)
    m, p = _random_curve(rng)
    for q in H.curve_places(p) or [5]:
        roof = C.upper_envelope([(0,)] + [(e,) for e in m], [F(0)] + [F(-p_adic_valuation(x, q)) for x in p])
        in_log_units = 2 * C.integrate_pa(roof, roof.domain)
        assert isinstance(in_log_units, F)
        assert float(in_log_units) * math.log(q) == pytest.approx(H.curve_local_height(m, p, q), abs=1e-12)


@given(st.integers(0, 10_000))
def test_archimedean_height_is_real(seed):
    rng = random.Random(seed)
    m, p = _random_curve(rng)
    h = H.curve_local_height(m, p, "inf")
    assert math.isfinite(h)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fubini_study_roof_is_legendre_dual(n):
    # psi(u) = -1/2 log(1 + sum exp(-2 u_i)); its dual at x is inf_u <x,u> - psi(u)
    from scipy.optimize import minimize
    import numpy as np
    roof = H.fubini_study_roof(n)
    rng = random.Random(n)
    for _ in range(4):
        w = [rng.random() + 0.05 for _ in range(n + 1)]
        x = np.array(w[1:]) / sum(w)

        def obj(u):
            return float(x @ u) + 0.5 * math.log1p(float(np.sum(np.exp(-2 * u))))

        def grad(u):
            e = np.exp(-2 * u)
            return x - e / (1 + np.sum(e))

        res = minimize(obj, np.zeros(n), jac=grad, method="BFGS", options={"gtol": 1e-12})
        assert res.fun == pytest.approx(roof(tuple(x)), abs=1e-9)


def test_veronese_growth_trend():
    prev, diffs = None, []
    for r in (25, 50, 100, 200):
        d = H.veronese_height(r, symbolic=False)["float"] / r - math.log(r)
        if prev is not None:
            diffs.append(abs(d - prev))
        prev = d
    assert all(b < a for a, b in zip(diffs, diffs[1:]))


def test_veronese_symbolic_falls_back_to_cotangents():
    sym = H.veronese_height(6)["symbolic"]
    assert sym.startswith("3 + pi*(") and "cot(" in sym

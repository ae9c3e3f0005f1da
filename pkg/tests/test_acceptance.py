"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction as F
from itertools import combinations

import pytest
import sympy
from scipy import integrate as sint

from toricheight import concave as C
from toricheight import heights as H
from toricheight import integration as I
from toricheight import measures as M
from toricheight import polytope as P
from toricheight import univariate as U
from toricheight.sampling import (random_lattice_polytope, random_pa_function, random_point,
                                  random_rational, random_simplex)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


class Report:
    def __init__(self, title):
        self.title = title
        self.failures: list[str] = []
        self.checks = 0

    def check(self, ok, what):
        self.checks += 1
        if not ok:
            self.failures.append(what)

    def line(self):
        status = "PASS" if not self.failures else "FAIL"
        extra = "" if not self.failures else f" first failure: {self.failures[0]}"
        return f"[{status}] {self.title} ({self.checks} checks){extra}"


def _subset(a: P.Polyhedron, b: P.Polyhedron) -> bool:
    if not all(b.contains(v) for v in a.vertices):
        return False
    dirs = list(a.rays) + list(a.lines) + [tuple(-x for x in l) for l in a.lines]
    for r in dirs:
        if any(sum(x * y for x, y in zip(n, r)) < 0 for n, _ in b.facets):
            return False
        if any(sum(x * y for x, y in zip(n, r)) != 0 for n, _ in b.equations):
            return False
    return True


def _same(a, b):
    return _subset(a, b) and _subset(b, a)


# ------------------------------------------------------------------ criteria

def criterion_1():
    rep = Report("1 Fubini-Study heights, harmonic sum vs monomial-log integrals, n=1..6")
    table = [F(1, 2), F(5, 4), F(13, 6), F(77, 24), F(87, 20), F(223, 40)]
    for n, want in enumerate(table, start=1):
        harmonic = H.fubini_study_height(n)
        via_logs = math.factorial(n + 1) * sum(
            -F(1, 2) * I.simplex_monomial([int(j == i) for j in range(n + 1)], i) for i in range(n + 1))
        rep.check(harmonic == want == via_logs, f"n={n}: {harmonic}, {via_logs}, want {want}")
    return rep


def criterion_2():
    rep = Report("2 Veronese curves, roots route vs closed form (r<=20) and table values")
    for r in range(1, 21):
        a = H.curve_global_height(list(range(1, r + 1)), [1] * r)
        b = H.veronese_height(r)["float"]
        rep.check(abs(a - b) <= 1e-9, f"r={r}: {a} vs {b}")
    s3 = math.sqrt(3)
    table = {1: 0.5, 2: 1 + math.pi / (3 * s3), 3: 1.5 + math.pi / 2,
             5: 2.5 + 7 * math.pi / (3 * s3), 7: 3.5 + (1 + math.sqrt(2)) * math.pi}
    for r, want in table.items():
        a = H.curve_global_height(list(range(1, r + 1)), [1] * r)
        b = H.veronese_height(r)["float"]
        rep.check(abs(a - want) <= 1e-9 and abs(b - want) <= 1e-9, f"table r={r}: {a}, {b} vs {want}")
    return rep


def _simplex_quadrature(func, r):
    if r == 1:
        return sint.quad(lambda y: func((y,)), 0, 1, epsabs=1e-11, limit=200)[0]
    if r == 2:
        return sint.dblquad(lambda y2, y1: func((y1, y2)), 0, 1, 0, lambda y1: 1 - y1, epsabs=1e-11)[0]
    raise ValueError(r)


def _collapsed_simplex_rule(d, nodes):
    """Tensor Gauss-Legendre rule on the standard d-simplex via collapsed coordinates."""
    import numpy as np
    from itertools import product
    t, w = np.polynomial.legendre.leggauss(nodes)
    t, w = (t + 1) / 2, w / 2
    pts, wts = [], []
    for idx in product(range(nodes), repeat=d):
        c = [t[i] for i in idx]
        weight = float(np.prod([w[i] for i in idx]))
        point, rest = [], 1.0
        for ci in c:
            point.append(rest * ci)
            weight *= rest
            rest *= 1 - ci
        pts.append(tuple(point))
        wts.append(weight)
    return pts, wts


def _full_roof_integral(n, a, nodes=40):
    """(n+r+1)! times the integral of the roof over the bundle polytope, by quadrature
    over the base simplex and the scaled fibre simplices."""
    r = len(a) - 1
    roof = H.bundle_roof(n, a)
    ys, wy = _collapsed_simplex_rule(r, nodes)
    xs, wx = _collapsed_simplex_rule(n, nodes)
    total = 0.0
    for y, a_w in zip(ys, wy):
        L = a[0] + sum((a[l + 1] - a[0]) * y[l] for l in range(r))
        inner = sum(b_w * roof(tuple(L * xi for xi in x), y) for x, b_w in zip(xs, wx))
        total += a_w * L ** n * inner
    return math.factorial(n + r + 1) * total


def criterion_3():
    rep = Report("3 Hirzebruch surfaces and toric bundles: closed form, degree, quadrature")
    for b in range(7):
        got = H.bundle_height(1, [1, b + 1])["height"]
        want = F(b * b, 2) + F(9 * b, 4) + 3
        rep.check(got == want, f"b={b}: {got} vs {want}")
    rng = random.Random(2024)
    cases = 0
    while cases < 20:
        n = rng.randint(1, 3)
        r = rng.randint(1, 4 - n)
        a = sorted(rng.randint(1, 3) for _ in range(r + 1))
        delta = H.bundle_polytope(n, a)
        deg = H.bundle_height(n, a)["degree"]
        rep.check(deg == math.factorial(n + r) * delta.volume(), f"degree n={n} a={a}")
        cases += 1
    # (n, r) = (1, 1), (1, 2), (2, 1)
    for n, a in [(1, [1, 2]), (1, [1, 1]), (1, [1, 1, 2]), (2, [1, 2]), (2, [1, 1])]:
        closed = float(H.bundle_height(n, a)["height"])
        fibres = H.bundle_height_by_fibres(n, a, _simplex_quadrature)
        rep.check(abs(closed - fibres) <= 1e-4, f"fibre quadrature n={n} a={a}: {fibres} vs {closed}")
        full = _full_roof_integral(n, a)
        rep.check(abs(closed - full) <= 1e-4, f"full quadrature n={n} a={a}: {full} vs {closed}")
    return rep


def _random_rational_polytope(rng, n):
    while True:
        pts = [tuple(random_rational(rng, 6, 3) for _ in range(n)) for _ in range(n + 1 + rng.randint(0, 3))]
        p = P.hull(pts)
        if p.dim == n:
            return p


def _sympy_simplex_integral(simplex, u, poly_coeffs):
    """Exact integral over a simplex of f^(n)(<u,x>), f = sum c_k z^k, via iterated sympy integration."""
    n = simplex.dim
    z = sympy.Symbol("z")
    f = sum(sympy.Rational(c.numerator, c.denominator) * z ** k for k, c in enumerate(poly_coeffs))
    g = sympy.diff(f, z, n)
    ws = sympy.symbols(f"w1:{n + 1}")
    v0 = simplex.vertices[0]
    edges = [[sympy.Rational(F(x).numerator, F(x).denominator) for x in
              (vi - v0i for vi, v0i in zip(v, v0))] for v in simplex.vertices[1:]]
    x = [sympy.Rational(F(v0[i]).numerator, F(v0[i]).denominator) + sum(ws[j] * edges[j][i] for j in range(n))
         for i in range(n)]
    lin = sum(sympy.Rational(F(u[i]).numerator, F(u[i]).denominator) * x[i] for i in range(n))
    expr = sympy.expand(g.subs(z, lin))
    jac = abs(sympy.Matrix(edges).det())
    for j in range(n - 1, -1, -1):
        upper = 1 - sum(ws[:j])
        expr = sympy.integrate(expr, (ws[j], 0, upper))
    val = sympy.nsimplify(expr * jac)
    return F(int(val.p), int(val.q))


def criterion_4():
    rep = Report("4 Polytope integration: volume identity, Brion exactness, closed form, additivity, homogeneity")
    rng = random.Random(17)
    for i in range(50):
        n = rng.randint(1, 4)
        p = _random_rational_polytope(rng, n)
        u = tuple(random_rational(rng, 5, 3) for _ in range(n))
        co = I.coefficients(p, u)
        vol = co.integrate(lambda k, z: float(z) ** (n - k) / math.factorial(n - k))
        rep.check(abs(vol - float(p.volume())) <= 1e-10 * max(1.0, float(p.volume())),
                  f"volume identity #{i}: {vol} vs {p.volume()}")
    rng = random.Random(23)
    done = 0
    while done < 50:
        n = rng.randint(1, 3)
        s = random_simplex(rng, n, box=3, lattice=rng.random() < 0.5)
        u = tuple(rng.randint(-4, 4) for _ in range(n))
        if len({sum(a * b for a, b in zip(u, v)) for v in s.vertices}) <= n:
            continue
        deg = rng.randint(n, 6)
        coeffs = [random_rational(rng, 5, 3) for _ in range(deg + 1)]
        f = lambda z, c=coeffs: sum(ck * F(z) ** k for k, ck in enumerate(c))
        got = I.brion_short(s, u, f)
        want = _sympy_simplex_integral(s, u, coeffs)
        rep.check(got == want, f"Brion #{done}: {got} vs {want}")
        done += 1
    rng = random.Random(5)
    for i in range(20):
        n = rng.randint(1, 4)
        s = random_simplex(rng, n, box=3, lattice=False)
        u = tuple(random_rational(rng, 7, 2) for _ in range(n))
        exact, approx = I.simplex_coefficients(s, u), I.coefficients(s, u)
        ok = len(exact.entries) == len(approx.entries) and all(
            a.level == b.level and all(abs(float(c) - d) <= 1e-10 * max(1.0, abs(float(c))) for c, d in zip(cs, ds))
            for (a, cs), (b, ds) in zip(exact.entries, approx.entries))
        rep.check(ok, f"closed form vs recursion #{i}")
    rng = random.Random(9)
    for i in range(20):
        n = rng.randint(2, 3)
        p = random_lattice_polytope(rng, n, npts=n + 4)
        u = tuple(rng.randint(-3, 3) for _ in range(n))
        if all(x == 0 for x in u):
            u = (1,) + u[1:]
        cut = tuple(rng.randint(-2, 2) or 1 for _ in range(n))
        mid = sum(F(sum(a * b for a, b in zip(cut, v))) for v in p.vertices) / len(p.vertices)
        half1 = P.intersection(p, P.from_hrep([(cut, -mid)], (), n))
        half2 = P.intersection(p, P.from_hrep([(tuple(-c for c in cut), mid)], (), n))
        if half1 is None or half2 is None or half1.dim < n or half2.dim < n:
            continue
        whole = {a.level: cs for a, cs in I.coefficients(p, u).entries}
        parts: dict = {}
        for piece in (half1, half2):
            for a, cs in I.coefficients(piece, u).entries:
                acc = parts.setdefault(a.level, [0.0] * (n + 1))
                for k, c in enumerate(cs):
                    acc[k] += c
        scale = max(1.0, max(abs(c) for cs in whole.values() for c in cs))
        ok = all(abs(c - (whole.get(lv, [0.0] * (n + 1))[k])) <= 1e-10 * scale
                 for lv, cs in parts.items() for k, c in enumerate(cs))
        ok = ok and all(lv in parts for lv in whole)
        rep.check(ok, f"additivity #{i}")
        lam = F(rng.randint(1, 7), rng.randint(1, 4))
        scaled = {a.level / lam: cs for a, cs in I.coefficients(p, tuple(lam * x for x in u)).entries}
        ok = all(abs(scaled[lv][k] - float(lam) ** (k - n) * c) <= 1e-10 * scale
                 for lv, cs in whole.items() for k, c in enumerate(cs))
        rep.check(ok, f"homogeneity #{i}")
    return rep


def criterion_5():
    rep = Report("5 Legendre-Fenchel core: biduality, sum/sup-convolution, dual pairs, Fenchel inequality")
    rng = random.Random(31)
    for i in range(50):
        n = rng.randint(1, 3)
        f = random_pa_function(rng, n, pieces=rng.randint(n + 1, 6))
        ff = C.dual(C.dual(f))
        pts = [random_point(rng, n) for _ in range(100)]
        rep.check(all(ff(u) == f(u) for u in pts), f"biduality #{i}")
    for i in range(15):
        n = rng.randint(1, 2)
        f = random_pa_function(rng, n, pieces=rng.randint(n + 1, 4))
        g = random_pa_function(rng, n, pieces=rng.randint(n + 1, 4))
        rep.check(C.functions_equal(C.dual(C.add(f, g)), C.sup_convolution(C.dual(f), C.dual(g))),
                  f"sum vs sup-convolution #{i}")
    for i in range(15):
        n = rng.randint(1, 2)
        f = random_pa_function(rng, n, pieces=rng.randint(n + 1, 5))
        cells = C.dual_pair(f)
        for c in cells:
            rep.check(c.primal.dim + c.dual.dim == n, f"complementarity #{i}")
        for a, b in combinations(cells, 2):
            if _subset(a.primal, b.primal):
                rep.check(_subset(b.dual, a.dual), f"inclusion reversal #{i}")
            if _subset(b.primal, a.primal):
                rep.check(_subset(a.dual, b.dual), f"inclusion reversal #{i}")
    for i in range(20):
        n = rng.randint(1, 2)
        f = random_pa_function(rng, n, pieces=rng.randint(n + 1, 5))
        g = C.dual(f)
        cells = C.dual_pair(f)
        us = [random_point(rng, n) for _ in range(3)] + [c.primal.vertices[0] for c in cells]
        xs = list(g.domain.vertices) + [c.dual.vertices[0] for c in cells]
        for u in us:
            for x in xs:
                gap = f(u) + g(x) - sum(a * b for a, b in zip(x, u))
                rep.check(gap <= 0, f"Fenchel inequality #{i}")
                rep.check((gap == 0) == C.sup_differential(f, u).contains(x), f"Fenchel equality case #{i}")
    return rep


def criterion_6():
    rep = Report("6 Monge-Ampere measures, boundary identity residual, mixed volumes")
    rng = random.Random(41)
    for i in range(50):
        n = rng.randint(1, 3)
        f = random_pa_function(rng, n, pieces=rng.randint(n + 1, 5))
        stab = C.stability_set(f)
        rep.check(stab.is_lattice, f"lattice stab #{i}")
        rep.check(M.monge_ampere(f).total_mass() == stab.volume(), f"total mass #{i}")
        rep.check(M.boundary_identity_residual(f) == 0, f"boundary identity residual #{i}")
    for i in range(10):
        n = rng.randint(1, 3)
        q = random_lattice_polytope(rng, n, npts=n + 3, box=2)
        rep.check(M.monge_ampere(C.support_function(q)) == M.DiscreteMeasure({(0,) * n: q.volume()}),
                  f"support function #{i}")
        rep.check(M.mixed_volume([q] * n) == math.factorial(n) * q.volume(), f"MV(Q..Q) #{i}")
    for i in range(10):
        n = rng.choice([2, 3])
        fs = [random_pa_function(rng, n, pieces=n + 1, box=1) for _ in range(n)]
        mv = M.mixed_volume([C.stability_set(f) for f in fs])
        rep.check(M.mixed_monge_ampere(fs).total_mass() == mv / math.factorial(n), f"mixed mass #{i}")
    return rep


def criterion_7():
    rep = Report("7 Heights: two-path local heights, canonical metric, entropy averages")
    rng = random.Random(53)
    for i in range(100):
        n = rng.randint(1, 3)
        psi = random_pa_function(rng, n, pieces=rng.randint(n + 1, 5))
        lam = F(rng.randint(1, 4), rng.randint(1, 3))
        by_roof = math.factorial(n + 1) * lam * C.integrate_pa(C.dual(psi), C.stability_set(psi))
        by_cells = math.factorial(n + 1) * lam * H.local_height_by_cells(psi)
        rep.check(by_roof == by_cells and H.local_height(psi, lam) == by_roof, f"two paths #{i}")
    for n in (1, 2, 3):
        for p in (P.standard_simplex(n), random_lattice_polytope(rng, n, npts=n + 2)):
            rep.check(H.global_height(H.ToricMetric.canonical(p, ("inf", 2, 7))) == 0, "canonical metric")
    for n in (1, 2, 3):
        s = P.standard_simplex(n)
        rep.check(H.entropy_average(s, s, F(1, 2)) == I.harmonic_tail(2, n + 1), f"entropy simplex n={n}")
    sq = P.cube(2)
    density = H.entropy_density(sq)
    brute = sint.dblquad(lambda y, x: density((x, y)), 0, 1, 0, 1, epsabs=1e-12)[0]
    got = float(H.entropy_average(sq, sq, F(1, 2)))
    rep.check(abs(got - brute) <= 1e-6, f"unit square entropy {got} vs {brute}")
    return rep


def criterion_8():
    rep = Report("8 Newton polygons and the product formula for toric curves")
    rng = random.Random(67)
    for i in range(50):
        p = rng.choice([2, 3, 5, 7])
        rts = [rng.choice([1, -1]) * F(p) ** rng.randint(-3, 3) * F(rng.choice([1, 2, 3, 4, 5, 6]),
                                                                      rng.choice([1, 2, 3, 5]))
               for _ in range(rng.randint(1, 5))]
        poly = [F(1)]
        for r in rts:
            poly = [a - r * b for a, b in zip([F(0)] + poly, poly + [F(0)])]
        got = U.root_valuations(poly, p)
        want = sorted(U.p_adic_valuation(r, p) for r in rts)
        rep.check(got == want, f"instance #{i} at p={p}: {got} vs {want}")
    h = H.curve_global_height([1], [2])
    rep.check(abs(h - 0.5) <= 1e-14, f"h((1),(2)) = {h}")
    arch = H.curve_local_height([1], [2], "inf")
    two = H.curve_local_height([1], [2], 2)
    rep.check(abs(arch - (math.log(2) + 0.5)) <= 1e-14 and two == -math.log(2), "local terms")
    return rep


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_criterion(criterion):
    rep = criterion()
    line = rep.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not rep.failures, line


if __name__ == "__main__":
    import sys
    bad = 0
    for crit in CRITERIA:
        rep = crit()
        print(rep.line(), flush=True)
        bad += bool(rep.failures)
    sys.exit(1 if bad else 0)

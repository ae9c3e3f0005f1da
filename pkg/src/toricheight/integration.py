"""Integrals of functions of one linear form over polytopes.

For a polytope P and direction u the integral of f^(n)(<u,x>) over P is a
finite combination of the derivatives f^(k) evaluated at the levels of the
aggregates of P in direction u. ``coefficients`` computes the weights by
the facet recursion; ``simplex_coefficients`` is the closed form available
for simplices.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial, log, sqrt
from typing import Callable

from . import _linalg as la
from .exactlog import LogLinear
from .polytope import Aggregate, DomainError, Polyhedron


def harmonic_tail(a: int, b: int) -> Fraction:
    """sum_{j=a}^{b} 1/j (empty sum = 0)."""
    return sum((Fraction(1, j) for j in range(a, b + 1)), Fraction(0))


@dataclass
class AggregateCoefficients:
    direction: tuple
    entries: list      # [(Aggregate, [C_0, ..., C_n])]

    def by_vertices(self) -> dict:
        return {agg.vertices: cs for agg, cs in self.entries}

    def integrate(self, deriv: Callable[[int, object], float]) -> float:
        """sum_V sum_k C_k f^(k)(level V), with deriv(k, z) = f^(k)(z)."""
        total = 0.0
        for agg, cs in self.entries:
            for k, c in enumerate(cs):
                if c != 0:
                    total += c * deriv(k, agg.level)
        return total


def _direction_basis(p: Polyhedron, face):
    vs = sorted(face.vertices)
    v0 = p.vertices[vs[0]]
    return la.row_basis([la.sub(p.vertices[i], v0) for i in vs[1:]], p.ambient_dim)


def coefficients(p: Polyhedron, u) -> AggregateCoefficients:
    """Coefficients C_k(P, u, V) for the Euclidean measure on aff(P)."""
    if not p.is_bounded:
        raise DomainError("coefficients need a polytope")
    if not p.exact:
        raise DomainError("coefficients need exact vertex data")
    if not p.is_full_dimensional:
        raise DomainError("coefficients need a full-dimensional polytope")
    u = tuple(Fraction(x) for x in u)
    n = p.dim
    bases: dict = {}

    def basis(face):
        if face not in bases:
            bases[face] = _direction_basis(p, face)
        return bases[face]

    memo: dict = {}

    def rec(face):
        if face in memo:
            return memo[face]
        b = basis(face)
        w = la.project(u, b) if b else tuple(Fraction(0) for _ in u)
        level = la.dot(u, p.vertices[min(face.vertices)])
        out: dict = defaultdict(lambda: [0.0] * (n + 1))
        ww = la.dot(w, w)
        if ww == 0:
            out[level][face.dim] += p.euclidean_volume(face)
        else:
            for g in p.facets_of(face):
                vg = p.vertices[min(g.vertices)]
                outside = next(i for i in sorted(face.vertices) if i not in g.vertices)
                d = la.sub(p.vertices[outside], vg)
                bg = basis(g)
                normal = la.sub(d, la.project(d, bg)) if bg else d
                nw = la.dot(normal, w)
                if nw == 0:
                    continue
                factor = -float(nw) / (sqrt(float(la.dot(normal, normal))) * float(ww))
                for lv, cs in rec(g).items():
                    acc = out[lv]
                    for k, c in enumerate(cs):
                        acc[k] += factor * c
        memo[face] = dict(out)
        return memo[face]

    table = rec(p.top_face)
    entries = []
    for agg in p.aggregates(u):
        cs = table.get(agg.level, [0.0] * (n + 1))
        entries.append((agg, list(cs)))
    return AggregateCoefficients(u, entries)


def integrate_composed(p: Polyhedron, u, derivatives):
    """sum_V sum_k C_k(P,u,V) f^(k)(<u,V>) for derivatives = [f, f', ..., f^(n)].

    This equals the integral of f^(n)(<u,x>) over P.
    """
    coeffs = coefficients(p, u)
    need = max(agg.dim for agg, _ in coeffs.entries)
    if len(derivatives) <= need:
        raise DomainError(f"derivatives up to order {need} are required")
    return coeffs.integrate(lambda k, z: derivatives[k](z))


def _check_simplex(p: Polyhedron):
    if not (p.is_bounded and len(p.vertices) == p.dim + 1 and p.is_full_dimensional):
        raise DomainError("a full-dimensional simplex is required")


def simplex_coefficients(p: Polyhedron, u) -> AggregateCoefficients:
    """Closed-form coefficients for a full-dimensional simplex (exact rationals)."""
    _check_simplex(p)
    n = p.dim
    u = tuple(Fraction(x) for x in u)
    vol = p.volume()
    entries = []
    for agg in p.aggregates(u):
        others = [i for i in range(n + 1) if i not in agg.vertices]
        lv = agg.level
        gaps = [lv - la.dot(u, p.vertices[i]) for i in others]
        cs = [Fraction(0)] * (n + 1)
        dv = agg.dim
        for k in range(dv + 1):
            s = Fraction(0)
            for beta in _compositions(dv - k, len(others)):
                term = Fraction(1)
                for b, g in zip(beta, gaps):
                    term /= g ** (b + 1)
                s += term
            cs[k] = (-1) ** (dv - k) * Fraction(factorial(n), factorial(k)) * vol * s
        entries.append((agg, cs))
    return AggregateCoefficients(u, entries)


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def brion_short(p: Polyhedron, u, f: Callable):
    """n! vol(P) sum_i f(<u,v_i>) / prod_{j != i} <v_i - v_j, u>, for generic u."""
    _check_simplex(p)
    n = p.dim
    levels = [la.dot(u, v) for v in p.vertices]
    if len(set(levels)) != len(levels):
        raise DomainError("direction is not generic for this simplex")
    total = 0
    for i, li in enumerate(levels):
        den = 1
        for j, lj in enumerate(levels):
            if j != i:
                den *= li - lj
        val = f(li)
        total += Fraction(val) / den if not isinstance(val, float) and not isinstance(den, float) else val / den
    return factorial(n) * p.volume() * total


def simplex_monomial(alpha, log_index: int | None = None) -> Fraction:
    """Integral over the standard r-simplex of w_0^a_0 ... w_r^a_r (w_0 = 1 - sum w_i),
    optionally times log w_{log_index}. Lebesgue measure in (w_1, ..., w_r)."""
    alpha = [int(a) for a in alpha]
    if any(a < 0 for a in alpha):
        raise DomainError("exponents must be non-negative")
    r = len(alpha) - 1
    total = sum(alpha) + r
    val = Fraction(1, factorial(total))
    for a in alpha:
        val *= factorial(a)
    if log_index is not None:
        val *= -harmonic_tail(alpha[log_index] + 1, total)
    return val


def _form_levels(p: Polyhedron, m, c):
    return [la.dot(m, v) + c for v in p.vertices]


def simplex_l_log_l(p: Polyhedron, m, c) -> float:
    """(1/vol) * integral over a simplex of l log l, where l(x) = <m,x> + c >= 0."""
    _check_simplex(p)
    n = p.dim
    m = tuple(Fraction(x) for x in m)
    c = Fraction(c)
    vals = _form_levels(p, m, c)
    if min(vals) < 0:
        raise DomainError("the affine form is negative somewhere on the simplex")
    if all(x == 0 for x in m):
        return float(c) * log(c) if c > 0 else 0.0
    total = 0.0
    for agg in p.aggregates(m):
        lv = agg.level + c
        if lv == 0:
            continue
        others = [vals[i] for i in range(n + 1) if i not in agg.vertices]
        for beta in product(range(1, n + 1), repeat=len(others)):
            b = sum(beta)
            if b > n:
                continue
            num = float(lv) * (log(lv) - float(harmonic_tail(2, b + 1)))
            den = float(b + 1)
            for bi, lnu in zip(beta, others):
                den *= -float((lnu / lv - 1) ** bi)
            total += comb(n, n - b) * num / den
    return total


def l_log_l_derivatives(c, n):
    """Derivatives of the antiderivative F with F^(n)(z) = (z+c) log(z+c).

    Returns deriv(k, z) = F^(k)(z) = (z+c)^{n-k+1}/(n-k+1)! (log(z+c) - sum_{j=2}^{n-k+1} 1/j).
    """
    def deriv(k, z):
        t = float(z + c)
        e = n - k + 1
        if t <= 0:
            return 0.0
        return t ** e / factorial(e) * (log(t) - float(harmonic_tail(2, e)))
    return deriv


def integrate_l_log_l(p: Polyhedron, m, c) -> float:
    """Integral over any polytope of l log l via the aggregate coefficients."""
    coeffs = coefficients(p, m)
    return coeffs.integrate(l_log_l_derivatives(Fraction(c), p.dim))


def facet_l_log_l(p: Polyhedron, facet_index: int) -> LogLinear:
    """Exact (1/vol) integral of l log l when l vanishes on a facet of a simplex
    and l is the facet's primitive form; the opposite vertex value is rational."""
    _check_simplex(p)
    n = p.dim
    a, b = p.facets[facet_index]
    opp = next(v for v in p.vertices if la.dot(a, v) + b != 0)
    lv = la.dot(a, opp) + b
    return (LogLinear.log_of(lv) - harmonic_tail(2, n + 1)) * (Fraction(lv) / (n + 1))


def semi_monomial_integral(beta, poly) -> Fraction:
    """Integral over the standard r-simplex (r = len(beta)) of
    prod_{i<r} w_i^beta_i / beta_i! times f^(|beta|+r)(w_r), f a polynomial with
    coefficient list ``poly`` (increasing degree)."""
    r = len(beta)
    order = sum(beta) + r
    denom = 1
    for b in beta:
        denom *= factorial(b)
    total = Fraction(0)
    for k in range(order, len(poly)):
        # f^(order) contributes poly[k] * k!/(k-order)! * w_r^(k-order)
        c = Fraction(poly[k]) * factorial(k) / factorial(k - order)
        total += c * simplex_monomial(list(beta) + [k - order])
    return total / denom


def semi_monomial_boundary(beta, poly) -> Fraction:
    """f(1) - sum_{j < |beta|+r} f^(j)(0)/j! for a polynomial f."""
    order = sum(beta) + len(beta)
    return sum((Fraction(c) for c in poly[order:]), Fraction(0))

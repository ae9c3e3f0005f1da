"""Degrees and heights of toric varieties, toric curves and toric bundles.

Local heights are (n+1)! * lambda * (integral of the roof function over the
polytope). Piecewise affine roofs are handled exactly; roofs built from
``l log l`` terms go through the aggregate-coefficient integration, with
an exact shortcut on simplices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Sequence

from . import _linalg as la
from .concave import (ConcavePA, add_affine, concave_pa, dual, dual_pair, evaluate,
                      integrate_pa, pullback, pushforward, restrict_to_affine_hull,
                      stability_set)
from .exactlog import LogLinear
from .integration import harmonic_tail, integrate_l_log_l
from .measures import mixed_integral
from .polytope import DomainError, Polyhedron, hull, standard_simplex
from .univariate import newton_polygon, p_adic_valuation, roots


class InternalConsistencyError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""


def _agree(a, b, tol=1e-9) -> bool:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(a)))


# --------------------------------------------------------------------- basics

def degree(p: Polyhedron):
    """n! vol(P): the degree of the polarised toric variety of a lattice polytope."""
    if not p.is_bounded:
        raise DomainError("degree needs a polytope")
    return p.normalized_volume()


def fubini_study_height(n: int) -> Fraction:
    """Height of P^n for the Fubini-Study metric at infinity, canonical elsewhere."""
    if n < 0:
        raise DomainError("n must be non-negative")
    return Fraction(n + 1, 2) * harmonic_tail(2, n + 1)


# ---------------------------------------------------------------------- roofs

@dataclass(frozen=True)
class EntropyRoof:
    """The concave function -sum_i c_i l_i log l_i on a polytope,
    with l_i(x) = <m_i, x> + k_i non-negative on it."""
    polytope: Polyhedron
    forms: tuple          # ((m_i, k_i), ...)
    weights: tuple        # (c_i, ...)

    def __call__(self, x) -> float:
        total = 0.0
        for (m, k), c in zip(self.forms, self.weights):
            t = float(la.dot(m, x) + k)
            if t > 0:
                total -= float(c) * t * math.log(t)
        return total

    @property
    def dim(self):
        return self.polytope.ambient_dim


def fubini_study_roof(n: int) -> EntropyRoof:
    """(1/2) * entropy of the barycentric coordinates on the standard simplex."""
    forms = [(tuple(int(i == j) for j in range(n)), 0) for i in range(n)]
    forms.append((tuple(-1 for _ in range(n)), 1))
    return EntropyRoof(standard_simplex(n), tuple(forms), tuple(Fraction(1, 2) for _ in forms))


def _simplex_facet_form(p: Polyhedron, m, k):
    """If l = <m,.>+k vanishes on a facet of the simplex p, return its value at the
    opposite vertex; otherwise None."""
    if not (p.is_bounded and p.is_full_dimensional and len(p.vertices) == p.dim + 1):
        return None
    vals = [la.dot(m, v) + k for v in p.vertices]
    zeros = [v for v in vals if v == 0]
    if len(zeros) == p.dim and len(vals) - len(zeros) == 1:
        return next(v for v in vals if v != 0)
    return None


def l_log_l_integral_exact(p: Polyhedron, m, k):
    """Exact integral of l log l when it lands in Q + sum Q log p, else None."""
    m = tuple(Fraction(x) for x in m)
    k = Fraction(k)
    if all(x == 0 for x in m):
        if k == 0:
            return LogLinear()
        return LogLinear.log_of(k) * (k * p.volume())
    lv = _simplex_facet_form(p, m, k)
    if lv is None:
        return None
    n = p.dim
    return (LogLinear.log_of(lv) - harmonic_tail(2, n + 1)) * (lv * p.volume() / (n + 1))


def roof_integral(roof) -> object:
    """Integral of a roof over its polytope (lattice measure)."""
    if isinstance(roof, ConcavePA):
        return integrate_pa(roof, roof.domain)
    total_exact = LogLinear()
    exact_ok = True
    total = 0.0
    for (m, k), c in zip(roof.forms, roof.weights):
        ex = l_log_l_integral_exact(roof.polytope, m, k) if la.is_exact(m, k, c) else None
        if ex is None:
            exact_ok = False
            total -= float(c) * integrate_l_log_l(roof.polytope, m, k)
        else:
            total_exact = total_exact - ex * Fraction(c)
            total -= float(c) * float(ex)
    return _collapse(total_exact) if exact_ok else total


def _collapse(x: LogLinear):
    return x.rational if x.is_rational else x


# --------------------------------------------------------------- local heights

def local_height(psi, lam=1):
    """(n+1)! lam * integral of the dual of psi over its stability set.

    For a piecewise affine psi the value is also computed from the vertices of
    the primal complex and their dual cells; a mismatch raises.
    """
    if isinstance(psi, EntropyRoof):
        return roof_local_height(psi, lam)
    n = psi.dim
    delta = stability_set(psi)
    if not (delta.is_bounded and delta.is_full_dimensional):
        raise DomainError("stability set must be a full-dimensional polytope")
    via_roof = factorial(n + 1) * lam * integrate_pa(dual(psi), delta)
    via_cells = factorial(n + 1) * lam * local_height_by_cells(psi)
    if not _agree(via_roof, via_cells):
        raise InternalConsistencyError(f"local height paths disagree: {via_roof} vs {via_cells}")
    return via_roof


def local_height_by_cells(psi: ConcavePA):
    """sum over vertices v of the primal complex of the integral over the dual cell of
    x -> <x, v> - psi(v)."""
    total = 0
    for cell in dual_pair(psi):
        if cell.primal.dim == 0:
            v = cell.primal.vertices[0]
            total += cell.dual.integrate_affine(v, -evaluate(psi, v))
    return total


def face_local_height(psi, face: Polyhedron, lam=1):
    """(dim F + 1)! lam * integral over F of the roof, against the lattice measure of F."""
    d = face.dim
    if isinstance(psi, EntropyRoof):
        roof = restrict_roof(psi, face)
        return factorial(d + 1) * lam * roof_integral(roof)
    roof = dual(psi)
    return factorial(d + 1) * lam * integrate_pa(roof, face)


def restrict_roof(roof: EntropyRoof, face: Polyhedron) -> EntropyRoof:
    """Write an entropy roof on a face in lattice coordinates of the face."""
    if not all(roof.polytope.contains(v) for v in face.vertices):
        raise DomainError("face is not contained in the roof's polytope")
    basis = face.lattice_basis()
    origin = face.vertices[0]
    d = len(basis)
    pts = [la.coordinates(la.sub(v, origin), basis) for v in face.vertices] if d else [()]
    forms = []
    for m, k in roof.forms:
        m2 = tuple(la.dot(m, b) for b in basis)
        forms.append((m2, la.dot(m, origin) + k))
    return EntropyRoof(hull(pts), tuple(forms), roof.weights)


def _max_minors_gcd(matrix) -> int:
    from itertools import combinations
    n, d = len(matrix), len(matrix[0])
    g = 0
    for rows in combinations(range(n), d):
        g = math.gcd(g, int(la.det([matrix[i] for i in rows])))
    return g


def pullback_height(psi: ConcavePA, matrix, shift=None, lam=1):
    """Height of the toric subvariety attached to an injective linear map with
    saturated image, computed by pulling psi back and by pushing its dual forward."""
    n = psi.dim
    d = len(matrix[0])
    shift = tuple(shift) if shift is not None else (0,) * n
    if _max_minors_gcd(matrix) != 1:
        raise DomainError("the linear map must be injective with saturated image")
    g = pullback(psi, matrix, shift)
    delta1 = stability_set(g)
    h1 = factorial(d + 1) * lam * integrate_pa(dual(g), delta1)
    roof = add_affine(dual(psi), tuple(-x for x in shift), 0)
    transposed = [tuple(row[k] for row in matrix) for k in range(d)]
    pushed = pushforward(roof, transposed)
    h2 = factorial(d + 1) * lam * integrate_pa(pushed, pushed.domain)
    if not _agree(h1, h2):
        raise InternalConsistencyError(f"pullback height paths disagree: {h1} vs {h2}")
    return h1


def mixed_local_height(psis: Sequence[ConcavePA], lam=1):
    return lam * mixed_integral([dual(p) for p in psis])


# --------------------------------------------------------------- global heights

def place_lambda(name) -> float:
    """lambda_v for the standard absolute values on Q: 1 at infinity, log p at p."""
    return 1 if name == "inf" else math.log(int(name))


@dataclass(frozen=True)
class Place:
    name: object                # "inf" or a prime
    roof: object                # ConcavePA on the polytope, or EntropyRoof; includes lambda_v
    weight: object = 1          # n_v

    def __post_init__(self):
        if self.weight <= 0:
            raise DomainError("place weights must be positive")


@dataclass(frozen=True)
class ToricMetric:
    polytope: Polyhedron
    places: tuple

    @staticmethod
    def canonical(p: Polyhedron, names=("inf",)) -> "ToricMetric":
        zero = concave_pa([((0,) * p.ambient_dim, 0)], p)
        return ToricMetric(p, tuple(Place(nm, zero) for nm in names))


def roof_local_height(roof, lam=1):
    """(n+1)! lam * integral of a roof given directly on its polytope."""
    dom = roof.domain if isinstance(roof, ConcavePA) else roof.polytope
    return factorial(dom.dim + 1) * lam * roof_integral(roof)


def global_height(metric: ToricMetric):
    """sum_v n_v (n+1)! * integral of the roof at v (places summed in input order)."""
    total = 0
    for pl in metric.places:
        total += pl.weight * roof_local_height(pl.roof)
    return total


# ------------------------------------------------------- polytope metrics

@dataclass(frozen=True)
class PolytopeMetricHeight:
    general: float
    simplex: object = None      # LogLinear when the simplex shortcut applies

    @property
    def value(self):
        if self.simplex is not None:
            return _collapse(self.simplex)
        return self.general


def polytope_metric_height(delta: Polyhedron, forms, weights) -> PolytopeMetricHeight:
    """Height for the roof -sum c_i l_i log l_i on delta, by two routes."""
    n = delta.dim
    if not (delta.is_bounded and delta.is_full_dimensional):
        raise DomainError("need a full-dimensional polytope")
    forms = [(tuple(Fraction(x) for x in m), Fraction(k)) for m, k in forms]
    for m, k in forms:
        if any(la.dot(m, v) + k < 0 for v in delta.vertices):
            raise DomainError("an affine form is negative on the polytope")
    general = 0.0
    for (m, k), c in zip(forms, weights):
        general -= float(c) * integrate_l_log_l(delta, m, k)
    general *= factorial(n + 1)
    simplex = None
    if len(delta.vertices) == n + 1:
        ex = LogLinear()
        for (m, k), c in zip(forms, weights):
            lv = _simplex_facet_form(delta, m, k)
            if lv is None:
                ex = None
                break
            ex = ex + (harmonic_tail(2, n + 1) - LogLinear.log_of(lv)) * (Fraction(c) * lv)
        if ex is not None:
            simplex = ex * (factorial(n) * delta.volume())
            if not _agree(float(simplex), general, 1e-8):
                raise InternalConsistencyError(
                    f"polytope metric height paths disagree: {float(simplex)} vs {general}")
    return PolytopeMetricHeight(general, simplex)


def facet_forms(gamma: Polyhedron):
    """Affine forms l_F = <u_F, x> - lambda_F with |u_F| = (n-1)! vol_{n-1}(F)."""
    n = gamma.dim
    out = []
    for face in gamma.faces(n - 1):
        normal, offset = gamma.facet_of_face(face)
        k = factorial(n - 1) * gamma.volume(face)
        out.append((tuple(k * Fraction(x) for x in normal), k * offset))
    return out


def entropy_average(delta: Polyhedron, gamma: Polyhedron, c=Fraction(1, 2)):
    """Average over delta of the entropy of the facet-hitting distribution of gamma."""
    n = delta.dim
    if not all(gamma.contains(v) for v in delta.vertices):
        raise DomainError("delta must lie inside gamma")
    forms = facet_forms(gamma)
    h = polytope_metric_height(delta, forms, [c] * len(forms))
    big_n = factorial(n) * gamma.volume()
    deg = factorial(n) * delta.volume()
    lam_sum = sum(-k for _, k in forms)
    if h.simplex is not None:
        val = (h.simplex * (1 / (Fraction(c) * (n + 1) * deg))
               - LogLinear.log_of(big_n) * lam_sum) * (1 / Fraction(big_n))
        return _collapse(val)
    val = h.general / (float(c) * (n + 1) * float(deg)) - math.log(big_n) * float(lam_sum)
    return val / float(big_n)


def entropy_density(gamma: Polyhedron):
    """x -> entropy of the distribution P(F) = l_F(x) / (n! vol gamma), with the
    facet data precomputed in floats."""
    big_n = float(factorial(gamma.dim) * gamma.volume())
    forms = [([float(a) / big_n for a in m], float(k) / big_n) for m, k in facet_forms(gamma)]

    def density(x) -> float:
        total = 0.0
        for m, k in forms:
            pr = sum(a * float(b) for a, b in zip(m, x)) + k
            if pr > 0:
                total -= pr * math.log(pr)
        return total

    return density


def entropy_at(gamma: Polyhedron, x) -> float:
    """Entropy of the facet-hitting distribution of gamma at a point x."""
    return entropy_density(gamma)(x)


# ------------------------------------------------------------- toric curves

def _check_curve(m, p):
    m = [int(x) for x in m]
    if len(m) != len(p) or not m:
        raise DomainError("exponents and coefficients must have the same positive length")
    if any(b <= a for a, b in zip(m, m[1:])) or m[0] <= 0:
        raise DomainError("exponents must be strictly increasing positive integers")
    g = 0
    for x in m:
        g = math.gcd(g, x)
    if g != 1:
        raise DomainError("exponents must be coprime")
    p = [Fraction(x) for x in p]
    if any(x == 0 for x in p):
        raise DomainError("coefficients must be nonzero")
    return m, p


def _poly(m, vals):
    coeffs = [Fraction(0)] * (m[-1] + 1)
    coeffs[0] = Fraction(1)
    for e, v in zip(m, vals):
        coeffs[e] += v
    return coeffs


def archimedean_cross_term(rts) -> float:
    """(1/2) sum l_i^2 + (1/2) sum_{i<j} l_i l_j (xi+xj)/(xi-xj) (Log(-xi) - Log(-xj))."""
    total = complex(0.5 * sum(r.multiplicity ** 2 for r in rts))
    for i in range(len(rts)):
        for j in range(i + 1, len(rts)):
            a, b = rts[i].value, rts[j].value
            total += 0.5 * rts[i].multiplicity * rts[j].multiplicity * (a + b) / (a - b) * (
                cmath.log(-a) - cmath.log(-b))
    if abs(total.imag) > 1e-9 * max(1.0, abs(total.real)):
        raise InternalConsistencyError("archimedean height has a non-negligible imaginary part")
    return total.real


def non_archimedean_cross_term(m, p, prime: int) -> Fraction:
    """sum over pairs of roots of l_i l_j |v(xi_i) - v(xi_j)|, in units of log p."""
    vals = []
    for seg in newton_polygon(_poly(m, p), prime):
        vals.append((seg.root_valuation, seg.length))
    total = Fraction(0)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            total += vals[i][1] * vals[j][1] * abs(vals[i][0] - vals[j][0])
    return total


def curve_local_height(m, p, place="inf") -> float:
    """Local toric height of the curve t -> (1 : p_1 t^m_1 : ... : p_r t^m_r)."""
    m, p = _check_curve(m, p)
    if place == "inf":
        rts = roots(_poly(m, [x * x for x in p]))
        return m[-1] * math.log(abs(p[-1])) + archimedean_cross_term(rts)
    prime = int(place)
    lead = -p_adic_valuation(p[-1], prime) * m[-1]
    return float(lead + non_archimedean_cross_term(m, p, prime)) * math.log(prime)


def curve_places(p) -> list:
    """Primes dividing a numerator or denominator of some coefficient."""
    from sympy import primefactors
    ps = set()
    for x in p:
        x = Fraction(x)
        ps.update(primefactors(abs(x.numerator)))
        ps.update(primefactors(x.denominator))
    return sorted(ps)


def curve_global_height(m, p) -> float:
    """Sum of local heights over all places of Q (the leading terms cancel by the
    product formula and are dropped)."""
    m, p = _check_curve(m, p)
    rts = roots(_poly(m, [x * x for x in p]))
    total = archimedean_cross_term(rts)
    for prime in curve_places(p):
        total += float(non_archimedean_cross_term(m, p, prime)) * math.log(prime)
    return total


def veronese_height(r: int, symbolic: bool = True) -> dict:
    """Closed form for the rational normal curve of degree r with Fubini-Study metric.

    The symbolic simplification is slow for large r; pass ``symbolic=False``
    to get only the float.
    """
    import sympy
    if r < 1:
        raise DomainError("r must be positive")
    val = r / 2 + math.pi * sum((1 - 2 * j / (r + 1)) / math.tan(math.pi * j / (r + 1))
                                for j in range(1, r // 2 + 1))
    if not symbolic:
        return {"float": val}
    terms = [(1 - sympy.Rational(2 * j, r + 1)) * sympy.cot(sympy.pi * j / (r + 1))
             for j in range(1, r // 2 + 1)]
    coeff = sum(terms, sympy.Integer(0))
    if r <= _VERONESE_SIMPLIFY_MAX:
        simplified = sympy.nsimplify(sympy.radsimp(sympy.simplify(coeff)))
        if not simplified.has(sympy.tan, sympy.cot):
            coeff = simplified
    rational = sympy.Rational(r, 2)
    if coeff == 0:
        sym = str(rational)
    else:
        sym = f"{rational} + {sympy.sstr(sympy.pi * coeff)}"
    return {"symbolic": sym, "float": val}


# beyond this degree the radical simplification is slow and rarely helps
_VERONESE_SIMPLIFY_MAX = 12


# ------------------------------------------------------------- toric bundles

def _multi_indices(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _multi_indices(total - first, parts - 1):
            yield (first,) + rest


def _mono(a, i):
    out = Fraction(1)
    for ak, ik in zip(a, i):
        out *= Fraction(ak) ** ik
    return out


def bundle_A(n: int, r: int, i) -> Fraction:
    return sum((Fraction(i[mm] + 1) * sum((Fraction(1, 2 * j) for j in range(i[mm] + 2, n + r + 2)),
                                           Fraction(0)) for mm in range(r + 1)), Fraction(0))


def bundle_degree(n: int, a) -> Fraction:
    r = len(a) - 1
    return sum((_mono(a, i) for i in _multi_indices(n, r + 1)), Fraction(0))


def bundle_height(n: int, a) -> dict:
    """Degree and height of P(O(a_0) + ... + O(a_r)) over P^r with the
    Fubini-Study type metric at infinity."""
    a = [Fraction(x) for x in a]
    if n < 1 or len(a) < 2:
        raise DomainError("need n >= 1 and r >= 1")
    if any(x.denominator != 1 or x < 1 for x in a) or any(y < x for x, y in zip(a, a[1:])):
        raise DomainError("need integers 1 <= a_0 <= ... <= a_r")
    r = len(a) - 1
    h = sum((_mono(a, i) for i in _multi_indices(n + 1, r + 1)), Fraction(0)) * fubini_study_height(n)
    h += sum((_mono(a, i) * bundle_A(n, r, i) for i in _multi_indices(n, r + 1)), Fraction(0))
    return {"degree": bundle_degree(n, a), "height": h}


def bundle_polytope(n: int, a) -> Polyhedron:
    """{y_l >= 0, sum y <= 1, x_k >= 0, sum x <= L(y)} in R^n x R^r."""
    r = len(a) - 1
    pts = []
    for l in range(r + 1):
        f = tuple(int(j == l - 1) for j in range(r)) if l > 0 else (0,) * r
        pts.append((0,) * n + f)
        for k in range(n):
            pts.append(tuple(a[l] if j == k else 0 for j in range(n)) + f)
    return hull(pts)


def _entropy(coords) -> float:
    s = 0.0
    for t in coords:
        if t > 0:
            s -= t * math.log(t)
    return s


def bundle_roof(n: int, a):
    """The roof function at infinity: (1/2)(eps_r(y) + L(y) eps_n(x / L(y)))."""
    r = len(a) - 1
    a = [float(x) for x in a]

    def roof(x, y):
        L = a[0] + sum((a[l + 1] - a[0]) * y[l] for l in range(r))
        ys = [1 - sum(y)] + list(y)
        xs = [v / L for v in x]
        xs = [1 - sum(xs)] + xs
        return 0.5 * (_entropy(ys) + L * _entropy(xs))

    return roof


def bundle_height_by_fibres(n: int, a, integrate_simplex) -> float:
    """Height from the fibre-wise decomposition, with the two integrals over the
    base simplex supplied by ``integrate_simplex(func, r)``."""
    r = len(a) - 1
    af = [float(x) for x in a]

    def L(y):
        return af[0] + sum((af[l + 1] - af[0]) * y[l] for l in range(r))

    i1 = integrate_simplex(lambda y: L(y) ** (n + 1), r)
    i2 = integrate_simplex(lambda y: L(y) ** n * _entropy([1 - sum(y)] + list(y)), r)
    return (factorial(n + r + 1) / factorial(n + 1) * float(fubini_study_height(n)) * i1
            + factorial(n + r + 1) / (2 * factorial(n)) * i2)

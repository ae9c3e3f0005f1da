"""Piecewise affine concave functions and their Legendre-Fenchel calculus.

A function is ``min_j (<m_j, u> + c_j)`` restricted to a polyhedral domain.
Most operations go through the *lifted polyhedron*

    Q(f) = conv{(m_j, -c_j)} + cone{(a, -alpha) : domain facets} + cone{(0, -1)}

whose upper facets are the pieces of the dual function, and through the
hypograph, which is closed under Minkowski sums and affine images.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import _linalg as la
from .polytope import DomainError, Polyhedron, from_hrep, hull, whole_space

NEG_INF = float("-inf")


def _is_exact_scalar(x):
    return not isinstance(x, float)


def _frac(x):
    return x if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True, eq=False)
class ConcavePA:
    pieces: tuple          # ((m, c), ...)
    domain: Polyhedron

    @property
    def dim(self) -> int:
        return self.domain.ambient_dim

    @property
    def exact(self) -> bool:
        return self.domain.exact and all(
            la.is_exact(m) and _is_exact_scalar(c) for m, c in self.pieces)

    def __call__(self, u):
        return evaluate(self, u)

    def __repr__(self):
        return f"ConcavePA(dim={self.dim}, pieces={len(self.pieces)}, domain={self.domain!r})"

    @cached_property
    def lifted(self) -> Polyhedron:
        return _lifted(self.pieces, self.domain)

    def slopes(self):
        return [m for m, _ in self.pieces]


def _lifted(pieces, domain):
    n = domain.ambient_dim
    pts = [tuple(m) + (-c,) for m, c in pieces]
    rays = [tuple(a) + (-b,) for a, b in domain.facets]
    rays.append((0,) * n + (-1,))
    lines = [tuple(e) + (-b,) for e, b in domain.equations]
    return hull(pts, rays, lines)


def _tight_set(q: Polyhedron, y):
    return frozenset(j for j, (a, b) in enumerate(q.facets)
                     if la.is_zero(la.dot(a, y) + b, q.exact, la.norm_inf(y)))


def concave_pa(pieces: Sequence, domain: Polyhedron | None = None, prune: bool = True) -> ConcavePA:
    """Build a function from (slope, constant) pairs; drops redundant pieces."""
    pieces = [(tuple(_frac(x) for x in m), _frac(c)) for m, c in pieces]
    if not pieces:
        raise DomainError("a function needs at least one piece")
    n = len(pieces[0][0])
    if domain is None:
        domain = whole_space(n)
    if domain.ambient_dim != n:
        raise DomainError("piece and domain dimensions differ")
    pieces = sorted(set(pieces))
    if prune and len(pieces) > 1:
        q = _lifted(pieces, domain)
        vertex_sets = {_tight_set(q, v) for v in q.vertices}
        kept, taken = [], set()
        for m, c in pieces:
            t = _tight_set(q, tuple(m) + (-c,))
            if t in vertex_sets and t not in taken:
                kept.append((m, c))
                taken.add(t)
        pieces = kept
    return ConcavePA(tuple(pieces), domain)


def indicator(p: Polyhedron) -> ConcavePA:
    """The function equal to 0 on p (and -inf elsewhere)."""
    return ConcavePA((((Fraction(0),) * p.ambient_dim, Fraction(0)),), p)


def support_function(p: Polyhedron) -> ConcavePA:
    """u -> min_{x in p} <x, u>, on the cone where it is finite."""
    n = p.ambient_dim
    if p.is_bounded:
        dom = whole_space(n)
    else:
        dom = from_hrep([(r, 0) for r in p.rays], [(l, 0) for l in p.lines], n)
    return concave_pa([(v, 0) for v in p.vertices], dom)


def upper_envelope(points, values) -> ConcavePA:
    """Smallest concave function on conv(points) lying above (point, value) pairs."""
    n = len(points[0])
    h = hull([tuple(p) + (v,) for p, v in zip(points, values)], [(0,) * n + (-1,)])
    return _from_hypograph(h, n)


def affine(m, c, domain: Polyhedron | None = None) -> ConcavePA:
    return concave_pa([(m, c)], domain)


def evaluate(f: ConcavePA, u):
    if not f.domain.contains(u):
        return NEG_INF
    return min(la.dot(m, u) + c for m, c in f.pieces)


def stability_set(f: ConcavePA) -> Polyhedron:
    """Closure of the set of slopes x for which <x,u> - f(u) is bounded below."""
    return hull([m for m, _ in f.pieces], [a for a, _ in f.domain.facets],
                [e for e, _ in f.domain.equations])


def _from_hypograph(h: Polyhedron, n: int, domain: Polyhedron | None = None) -> ConcavePA:
    """Read a function off a polyhedron in R^{n+1} that contains the ray (0,-1)."""
    pieces = []
    for a, b in h.facets:
        beta = a[n]
        if not la.is_zero(beta, h.exact) and beta < 0:
            s = -_frac(beta)
            pieces.append((tuple(_frac(x) / s for x in a[:n]), _frac(b) / s))
    if domain is None:
        domain = hull([v[:n] for v in h.vertices], [r[:n] for r in h.rays],
                      [l[:n] for l in h.lines])
    if not pieces:
        # the hypograph is a vertical cylinder: f is +inf or constant on lines
        raise DomainError("function is not proper (unbounded above)")
    return concave_pa(pieces, domain, prune=False)


def dual(f: ConcavePA) -> ConcavePA:
    """Legendre-Fenchel dual x -> inf_u <x,u> - f(u), a function on M_R."""
    return _from_hypograph(f.lifted, f.dim, stability_set(f))


def hypograph(f: ConcavePA) -> Polyhedron:
    n = f.dim
    ineqs = [(tuple(m) + (-1,), c) for m, c in f.pieces]
    ineqs += [(tuple(a) + (0,), b) for a, b in f.domain.facets]
    eqs = [(tuple(e) + (0,), b) for e, b in f.domain.equations]
    h = from_hrep(ineqs, eqs, n + 1)
    assert h is not None
    return h


def add(f: ConcavePA, g: ConcavePA) -> ConcavePA:
    if f.dim != g.dim:
        raise DomainError("dimension mismatch")
    dom = from_hrep(list(f.domain.facets) + list(g.domain.facets),
                    list(f.domain.equations) + list(g.domain.equations), f.dim)
    if dom is None:
        raise DomainError("the domains are disjoint")
    pieces = [(la.add(m1, m2), c1 + c2) for m1, c1 in f.pieces for m2, c2 in g.pieces]
    return concave_pa(pieces, dom)


def scale_function(f: ConcavePA, lam) -> ConcavePA:
    """lam * f for lam > 0."""
    if lam <= 0:
        raise DomainError("only positive multiples stay concave and proper")
    return concave_pa([(la.scale(lam, m), lam * c) for m, c in f.pieces], f.domain, prune=False)


def add_affine(f: ConcavePA, m, c) -> ConcavePA:
    return concave_pa([(la.add(m0, m), c0 + c) for m0, c0 in f.pieces], f.domain, prune=False)


def sup_convolution(f: ConcavePA, g: ConcavePA) -> ConcavePA:
    """(f [+] g)(u) = sup_{v+w=u} f(v) + g(w), via Minkowski sum of hypographs."""
    if f.dim != g.dim:
        raise DomainError("dimension mismatch")
    hf, hg = hypograph(f), hypograph(g)
    pts = [la.add(a, b) for a in hf.vertices for b in hg.vertices]
    h = hull(pts, list(hf.rays) + list(hg.rays), list(hf.lines) + list(hg.lines))
    return _from_hypograph(h, f.dim)


def _apply(matrix, v):
    return tuple(la.dot(row, v) for row in matrix)


def _transpose(matrix, ncols):
    return [tuple(row[k] for row in matrix) for k in range(ncols)]


def pullback(f: ConcavePA, matrix, shift=None) -> ConcavePA:
    """v -> f(H v + u0); ``matrix`` is H given by rows (n x d)."""
    n = f.dim
    if len(matrix) != n:
        raise DomainError("matrix rows must match the function's dimension")
    d = len(matrix[0])
    shift = tuple(shift) if shift is not None else (0,) * n
    ht = _transpose(matrix, d)
    pieces = [(_apply(ht, m), c + la.dot(m, shift)) for m, c in f.pieces]
    facets = [(_apply(ht, a), b + la.dot(a, shift)) for a, b in f.domain.facets]
    eqs = [(_apply(ht, e), b + la.dot(e, shift)) for e, b in f.domain.equations]
    if facets or eqs:
        dom = from_hrep(facets, eqs, d)
    else:
        dom = whole_space(d)
    if dom is None:
        raise DomainError("the affine map misses the domain")
    return concave_pa(pieces, dom)


def pushforward(g: ConcavePA, matrix, shift=None) -> ConcavePA:
    """u -> sup { g(v) : H v + u0 = u }."""
    n = len(matrix)
    shift = tuple(shift) if shift is not None else (0,) * n
    h = hypograph(g)
    d = g.dim

    def lift(y, translate):
        base = _apply(matrix, y[:d])
        if translate:
            base = la.add(base, shift)
        return base + (y[d],)

    img = hull([lift(v, True) for v in h.vertices], [lift(r, False) for r in h.rays],
               [lift(l, False) for l in h.lines])
    return _from_hypograph(img, n)


def recession(f: ConcavePA) -> ConcavePA:
    dom = from_hrep([(a, 0) for a, _ in f.domain.facets], [(e, 0) for e, _ in f.domain.equations],
                    f.dim) if (f.domain.facets or f.domain.equations) else whole_space(f.dim)
    return concave_pa([(m, 0) for m, _ in f.pieces], dom)


def sup_differential(f: ConcavePA, u) -> Polyhedron:
    """{x : f(v) <= f(u) + <x, v - u> for all v}."""
    if not f.domain.contains(u):
        raise DomainError("point outside the domain")
    exact = f.exact and la.is_exact(u)
    vals = [la.dot(m, u) + c for m, c in f.pieces]
    best = min(vals)
    active = [m for (m, _), v in zip(f.pieces, vals) if la.is_zero(v - best, exact, abs(float(best)))]
    rays = [a for a, b in f.domain.facets if la.is_zero(la.dot(a, u) + b, exact, la.norm_inf(u))]
    lines = [e for e, _ in f.domain.equations]
    return hull(active, rays, lines)


# ------------------------------------------------------------------ duality

@dataclass(frozen=True)
class DualCell:
    primal: Polyhedron    # cell of Pi(f) in N_R
    dual: Polyhedron      # matching cell of Pi(f dual) in M_R


def dual_pair(f: ConcavePA) -> list:
    """Matched cells of the two polyhedral complexes attached to f and its dual."""
    q = f.lifted
    n = f.dim
    upper = [j for j, (a, _) in enumerate(q.facets) if not la.is_zero(a[n], q.exact) and a[n] < 0]
    upper_inc = [q.facet_incidence[j] for j in upper]
    vertical_ray = next(i for i, r in enumerate(q.rays)
                        if all(la.is_zero(x, q.exact) for x in r[:n]) and r[n] < 0)
    cells = []
    for face in q.face_lattice:
        if not any(face.vertices <= vs and face.rays <= rs for vs, rs in upper_inc):
            continue
        dual_cell = hull([q.vertices[i][:n] for i in sorted(face.vertices)],
                         [q.rays[i][:n] for i in sorted(face.rays)],
                         [l[:n] for l in q.lines])
        g = q.vertices[min(face.vertices)]
        ineqs, eqs = [], []
        for i, y in enumerate(q.vertices):
            row = (la.sub(y[:n], g[:n]), g[n] - y[n])
            (eqs if i in face.vertices else ineqs).append(row)
        for i, r in enumerate(q.rays):
            if i == vertical_ray:
                continue
            row = (r[:n], -r[n])
            (eqs if i in face.rays else ineqs).append(row)
        for l in q.lines:
            eqs.append((l[:n], -l[n]))
        eqs = [(a, b) for a, b in eqs if not (all(la.is_zero(x, q.exact) for x in a) and la.is_zero(b, q.exact))]
        primal = from_hrep(ineqs, eqs, n) if (ineqs or eqs) else whole_space(n)
        if primal is None:
            raise DomainError("empty primal cell; inconsistent lifted polyhedron")
        cells.append(DualCell(primal, dual_cell))
    return cells


# -------------------------------------------------------------- integration

def restrict_to_affine_hull(f: ConcavePA, p: Polyhedron):
    """Express f on aff(p) in lattice coordinates of M(p).

    Returns (g, p') with g a function on R^d and p' the image of p, so that
    the integral of f over p against the lattice measure equals the Lebesgue
    integral of g over p'.
    """
    if not p.exact:
        raise DomainError("relative lattice coordinates need an exact polyhedron")
    basis = p.lattice_basis()
    origin = p.vertices[0]
    n = p.ambient_dim
    d = len(basis)
    matrix = [tuple(b[i] for b in basis) for i in range(n)]
    g = pullback(f, matrix, origin)
    pts = [la.coordinates(la.sub(v, origin), basis) for v in p.vertices]
    return g, hull(pts) if d else hull([()])


def integrate_pa(f: ConcavePA, p: Polyhedron):
    """Integral of f over a bounded polytope p inside its domain (lattice measure of aff p)."""
    if not p.is_bounded:
        raise DomainError("integration domain must be bounded")
    if not all(f.domain.contains(v) for v in p.vertices):
        raise DomainError("integration domain leaves the domain of the function")
    if p.dim < p.ambient_dim:
        if p.dim == 0:
            return evaluate(f, p.vertices[0])
        g, q = restrict_to_affine_hull(f, p)
        return integrate_pa(g, q)
    exact = f.exact and p.exact
    total = Fraction(0) if exact else 0.0
    if len(f.pieces) == 1:
        m, c = f.pieces[0]
        return p.integrate_affine(m, c)
    for j, (m, c) in enumerate(f.pieces):
        ineqs = [(la.sub(m2, m), c2 - c) for k, (m2, c2) in enumerate(f.pieces) if k != j]
        region = from_hrep(ineqs + list(p.facets), list(p.equations), p.ambient_dim)
        if region is None or region.dim < p.dim:
            continue
        total += region.integrate_affine(m, c)
    return total


def functions_equal(f: ConcavePA, g: ConcavePA) -> bool:
    """Equality as functions (domains and values), exact when both are exact."""
    if f.dim != g.dim:
        return False
    if f.domain.vertices != g.domain.vertices or f.domain.rays != g.domain.rays \
            or len(f.domain.lines) != len(g.domain.lines):
        return False
    exact = f.exact and g.exact
    eqn = [e for e, _ in f.domain.equations]
    p0 = f.domain.vertices[0]
    n = f.dim

    def same(p1, p2):
        (m1, c1), (m2, c2) = p1, p2
        diff = la.sub(m1, m2)
        if la.rank(eqn + [diff], n, exact) != la.rank(eqn, n, exact) if eqn else not all(
                la.is_zero(x, exact) for x in diff):
            return False
        return la.is_zero(la.dot(m1, p0) + c1 - la.dot(m2, p0) - c2, exact, abs(float(c1)) + 1)

    return all(any(same(a, b) for b in g.pieces) for a in f.pieces) and all(
        any(same(a, b) for a in f.pieces) for b in g.pieces)

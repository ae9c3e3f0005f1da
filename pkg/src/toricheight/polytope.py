"""Rational polyhedra in R^n with both representations and a face lattice.

Conventions: a facet is a pair ``(normal, offset)`` meaning
``<normal, x> + offset >= 0``. For exact polyhedra the normal is the
primitive integer vector pointing inward, taken inside the direction space
of the affine hull. Volumes are normalised by the lattice ``Z^n`` cut down
to the affine hull, so a lattice segment of length one has volume 1 and a
vertex has volume 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial, sqrt
from typing import Iterable, Sequence

from . import _linalg as la
from ._dd import cone_generators


class DomainError(ValueError):
    """An operation was asked of an object outside its domain."""


@dataclass(frozen=True)
class Face:
    vertices: frozenset
    rays: frozenset
    dim: int

    @property
    def key(self):
        return (tuple(sorted(self.vertices)), tuple(sorted(self.rays)))


@dataclass(frozen=True)
class Aggregate:
    level: object
    vertices: frozenset
    dim: int


def _num(x, exact):
    if exact:
        return Fraction(x)
    return float(x)


@dataclass(frozen=True, eq=False)
class Polyhedron:
    ambient_dim: int
    vertices: tuple
    rays: tuple = ()
    lines: tuple = ()
    facets: tuple = ()
    equations: tuple = ()
    exact: bool = True

    # ------------------------------------------------------------------ basics
    def __repr__(self):
        return (f"Polyhedron(dim={self.dim}, ambient={self.ambient_dim}, "
                f"vertices={len(self.vertices)}, rays={len(self.rays)}, lines={len(self.lines)})")

    @cached_property
    def direction_basis(self) -> tuple:
        """Row basis of the linear space parallel to the affine hull."""
        n = self.ambient_dim
        v0 = self.vertices[0]
        gens = [la.sub(v, v0) for v in self.vertices[1:]] + list(self.rays) + list(self.lines)
        return tuple(la.row_basis(gens, n, self.exact))

    @property
    def dim(self) -> int:
        return len(self.direction_basis)

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @cached_property
    def is_lattice(self) -> bool:
        return self.exact and all(Fraction(x).denominator == 1 for v in self.vertices for x in v)

    def contains(self, x) -> bool:
        for a, b in self.facets:
            val = la.dot(a, x) + b
            if self.exact and la.is_exact(x):
                if val < 0:
                    return False
            elif val < -1e-9 * max(1.0, la.norm_inf(a) * la.norm_inf(x)):
                return False
        for a, b in self.equations:
            val = la.dot(a, x) + b
            if not la.is_zero(val, self.exact and la.is_exact(x), la.norm_inf(x)):
                return False
        return True

    def support_value(self, u):
        """min over the polyhedron of <u, x>, possibly -inf."""
        exact = self.exact and la.is_exact(u)
        for r in self.rays:
            d = la.dot(u, r)
            if not la.is_zero(d, exact) and d < 0:
                return float("-inf")
        for l in self.lines:
            if not la.is_zero(la.dot(u, l), exact):
                return float("-inf")
        return min(la.dot(u, v) for v in self.vertices)

    # ------------------------------------------------------------ incidences
    @cached_property
    def facet_incidence(self) -> tuple:
        out = []
        for a, b in self.facets:
            vs = frozenset(i for i, v in enumerate(self.vertices)
                           if la.is_zero(la.dot(a, v) + b, self.exact, la.norm_inf(v)))
            rs = frozenset(i for i, r in enumerate(self.rays)
                           if la.is_zero(la.dot(a, r), self.exact))
            out.append((vs, rs))
        return tuple(out)

    def _face_dim(self, vs, rs) -> int:
        vs = sorted(vs)
        v0 = self.vertices[vs[0]]
        gens = [la.sub(self.vertices[i], v0) for i in vs[1:]]
        gens += [self.rays[i] for i in rs] + list(self.lines)
        return la.rank(gens, self.ambient_dim, self.exact) if gens else 0

    @cached_property
    def face_lattice(self) -> tuple:
        """All nonempty faces, the polyhedron itself included."""
        top = (frozenset(range(len(self.vertices))), frozenset(range(len(self.rays))))
        seen = {top}
        frontier = [inc for inc in self.facet_incidence if inc[0]]
        for inc in frontier:
            seen.add(inc)
        while frontier:
            nxt = []
            for f in frontier:
                for g in self.facet_incidence:
                    h = (f[0] & g[0], f[1] & g[1])
                    if h[0] and h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        faces = [Face(vs, rs, self._face_dim(vs, rs)) for vs, rs in seen]
        faces.sort(key=lambda f: (f.dim, f.key))
        return tuple(faces)

    def faces(self, d: int | None = None) -> list:
        if d is None:
            return list(self.face_lattice)
        return [f for f in self.face_lattice if f.dim == d]

    @property
    def top_face(self) -> Face:
        return self.face_lattice[-1]

    @cached_property
    def _children(self) -> dict:
        by_dim: dict = {}
        for f in self.face_lattice:
            by_dim.setdefault(f.dim, []).append(f)
        out = {}
        for f in self.face_lattice:
            out[f] = [g for g in by_dim.get(f.dim - 1, [])
                      if g.vertices <= f.vertices and g.rays <= f.rays]
        return out

    def facets_of(self, face: Face) -> list:
        """Faces of codimension one inside ``face``."""
        return self._children[face]

    def face_polyhedron(self, face: Face) -> "Polyhedron":
        return hull([self.vertices[i] for i in sorted(face.vertices)],
                    [self.rays[i] for i in sorted(face.rays)], self.lines)

    def facet_of_face(self, face: Face):
        """The (normal, offset) of the facet whose incidence equals ``face``, if any."""
        for (a, b), inc in zip(self.facets, self.facet_incidence):
            if inc == (face.vertices, face.rays):
                return a, b
        return None

    # ------------------------------------------------------ triangulation
    def triangulate(self, face: Face | None = None) -> list:
        """Pulling triangulation of a bounded face into vertex-index simplices."""
        if not self.is_bounded:
            raise DomainError("triangulation needs a bounded polyhedron")
        face = self.top_face if face is None else face
        return list(self._triangulation(face))

    def _triangulation(self, face):
        cache = self.__dict__.setdefault("_tri_cache", {})
        if face in cache:
            return cache[face]
        if face.dim == 0:
            res = [tuple(face.vertices)]
        else:
            v0 = min(face.vertices)
            res = []
            for g in self.facets_of(face):
                if v0 not in g.vertices:
                    res.extend((v0,) + s for s in self._triangulation(g))
        cache[face] = res
        return res

    # ------------------------------------------------------------ volumes
    def lattice_basis(self, face: Face | None = None):
        face = self.top_face if face is None else face
        vs = sorted(face.vertices)
        v0 = self.vertices[vs[0]]
        gens = [la.sub(self.vertices[i], v0) for i in vs[1:]]
        return la.lattice_basis_of_span(gens, self.ambient_dim)

    def _simplex_volumes(self, face: Face):
        """List of (simplex, relative lattice volume) for a bounded face."""
        simplices = self.triangulate(face)
        d = face.dim
        if d == 0:
            return [(s, Fraction(1) if self.exact else 1.0) for s in simplices]
        full = d == self.ambient_dim
        basis = None if full else self.lattice_basis(face) if self.exact else None
        out = []
        for s in simplices:
            p0 = self.vertices[s[0]]
            edges = [la.sub(self.vertices[i], p0) for i in s[1:]]
            if full:
                vol = abs(la.det(edges, self.exact)) / factorial(d)
            elif self.exact:
                coords = [la.coordinates(e, basis) for e in edges]
                vol = abs(la.det(coords)) / factorial(d)
            else:
                vol = sqrt(abs(la.det(la.gram(edges), False))) / factorial(d)
            out.append((s, vol))
        return out

    def volume(self, face: Face | None = None):
        """Volume of a bounded face (default: the whole polytope) w.r.t. its own lattice."""
        face = self.top_face if face is None else face
        return sum((v for _, v in self._simplex_volumes(face)), Fraction(0) if self.exact else 0.0)

    def euclidean_volume(self, face: Face | None = None) -> float:
        face = self.top_face if face is None else face
        if face.dim == 0:
            return 1.0
        total = 0.0
        for s in self.triangulate(face):
            p0 = self.vertices[s[0]]
            edges = [la.sub(self.vertices[i], p0) for i in s[1:]]
            total += sqrt(abs(float(la.det(la.gram(edges), self.exact)))) / factorial(face.dim)
        return total

    def normalized_volume(self):
        """dim! times the lattice volume, the degree of the associated toric variety."""
        return factorial(self.dim) * self.volume()

    def integrate_affine(self, m, c, face: Face | None = None):
        """Integral of x -> <m, x> + c over a bounded face, lattice-normalised measure."""
        face = self.top_face if face is None else face
        total = Fraction(0) if self.exact and la.is_exact(m, c) else 0.0
        k = face.dim + 1
        for s, vol in self._simplex_volumes(face):
            bary = sum(la.dot(m, self.vertices[i]) for i in s) / k
            total += vol * (bary + c)
        return total

    # --------------------------------------------------------- aggregates
    def aggregates(self, u) -> list:
        """Aggregates of a polytope in direction u, sorted by level."""
        if not self.is_bounded:
            raise DomainError("aggregates need a bounded polytope")
        exact = self.exact and la.is_exact(u)
        vals = [la.dot(u, v) for v in self.vertices]
        if all(la.is_zero(x, exact) for x in u):
            return [Aggregate(Fraction(0) if exact else 0.0, frozenset(range(len(self.vertices))), self.dim)]
        groups: dict = {}
        for f in self.face_lattice:
            vs = sorted(f.vertices)
            t = vals[vs[0]]
            if all(la.is_zero(vals[i] - t, exact) for i in vs):
                key = next((k for k in groups if la.is_zero(k - t, exact)), t)
                g = groups.setdefault(key, [set(), 0])
                g[0].update(vs)
                g[1] = max(g[1], f.dim)
        out = []
        for t in sorted(groups):
            vs, d = groups[t]
            out.append(Aggregate(t, frozenset(vs), d))
        return out

    # ------------------------------------------------------------ misc
    def vertex_key(self, i):
        return self.vertices[i]

    def with_translation(self, t) -> "Polyhedron":
        return hull([la.add(v, t) for v in self.vertices], self.rays, self.lines)


# ---------------------------------------------------------------- builders

def _canonical_vector(v, exact):
    return la.integerize(v) if exact else la.normalize_float(v)


def hull(points: Sequence, rays: Sequence = (), lines: Sequence = ()) -> Polyhedron:
    """conv(points) + cone(rays) + span(lines), in minimal canonical form."""
    points = [tuple(p) for p in points]
    if not points:
        raise DomainError("a polyhedron needs at least one point")
    n = len(points[0])
    exact = la.is_exact(points, list(rays), list(lines))
    conv = Fraction if exact else float
    pts = [tuple(conv(x) for x in p) for p in points]
    rys = [tuple(conv(x) for x in r) for r in rays if any(x != 0 for x in r)]
    lns = [tuple(conv(x) for x in l) for l in lines if any(x != 0 for x in l)]
    if any(len(p) != n for p in pts + rys + lns):
        raise DomainError("inconsistent dimensions")

    direction = la.row_basis([la.sub(p, pts[0]) for p in pts[1:]] + rys + lns, n, exact)
    d = len(direction)

    gens = [(1,) + p for p in pts] + [(0,) + r for r in rys]
    if not exact:
        gens = [tuple(float(x) for x in g) for g in gens]
    hlines = [(0,) + l for l in la.row_basis(lns, n, exact)]
    polar, _, polar_lines = cone_generators(gens, hlines, n + 1, exact)

    # facets
    p0 = pts[0]
    facets = {}
    for a in polar:
        a0, an = conv(a[0]), tuple(conv(x) for x in a[1:])
        if d < n:
            proj = la.project(an, direction, exact)
            a0 = a0 + la.dot(la.sub(an, proj), p0)
            an = proj
        if all(la.is_zero(x, exact) for x in an):
            continue  # the inequality t >= 0 at infinity
        if exact:
            normal = la.integerize(an)
            i = next(i for i, x in enumerate(an) if x != 0)
            off = a0 * Fraction(normal[i]) / an[i]
        else:
            s = la.norm_inf(an)
            normal, off = tuple(x / s for x in an), a0 / s
        facets[normal] = off if normal not in facets else facets[normal]
    facet_list = sorted(facets.items())

    # equations of the affine hull
    eq_rows = la.nullspace(direction, n, exact) if d < n else []
    equations = []
    for e in eq_rows:
        e = _canonical_vector(e, exact)
        equations.append((tuple(e), -la.dot(e, p0)))

    # lineality: directions inside the affine hull orthogonal to every facet normal
    normals = [a for a, _ in facet_list] + [e for e, _ in equations]
    line_basis = la.row_basis(la.nullspace(normals, n, exact), n, exact) if normals else \
        la.row_basis(direction, n, exact)
    if not exact:
        line_basis = [tuple(float(x) for x in l) for l in line_basis]
    k = len(line_basis)

    def proj_out_lines(v):
        if not line_basis:
            return v
        return la.sub(v, la.project(v, line_basis, exact))

    def tight(v, is_ray):
        return frozenset(j for j, (a, b) in enumerate(facet_list)
                         if la.is_zero(la.dot(a, v) + (0 if is_ray else b), exact, la.norm_inf(v)))

    verts = {}
    for p in pts:
        t = tight(p, False)
        r = la.rank([facet_list[j][0] for j in t], n, exact) if t else 0
        if r == d - k and t not in verts:
            verts[t] = proj_out_lines(p)
    out_rays = {}
    for ray in rys:
        pr = proj_out_lines(ray)
        if all(la.is_zero(x, exact) for x in pr):
            continue
        t = tight(ray, True)
        r = la.rank([facet_list[j][0] for j in t], n, exact) if t else 0
        if r == d - k - 1 and t not in out_rays:
            out_rays[t] = tuple(_canonical_vector(pr, exact))
    vertices = tuple(sorted(verts.values()))
    if exact:
        out_rays_t = tuple(sorted(tuple(Fraction(x) for x in r) for r in out_rays.values()))
        lines_t = tuple(tuple(Fraction(x) for x in _canonical_vector(l, True)) for l in line_basis)
    else:
        out_rays_t = tuple(sorted(out_rays.values()))
        lines_t = tuple(_canonical_vector(l, False) for l in line_basis)
    return Polyhedron(n, vertices, out_rays_t, lines_t, tuple(facet_list), tuple(equations), exact)


def from_hrep(facets: Iterable, equations: Iterable = (), ambient_dim: int | None = None):
    """Polyhedron {<a,x> + b >= 0, <e,x> + f = 0}; returns None when empty."""
    facets = [(tuple(a), b) for a, b in facets]
    equations = [(tuple(e), f) for e, f in equations]
    if ambient_dim is None:
        ambient_dim = len((facets or equations)[0][0])
    n = ambient_dim
    exact = la.is_exact([list(a) + [b] for a, b in facets], [list(e) + [f] for e, f in equations])
    conv = Fraction if exact else float
    ineqs = [(conv(b),) + tuple(conv(x) for x in a) for a, b in facets]
    ineqs.append((conv(1),) + (conv(0),) * n)
    eqs = [(conv(f),) + tuple(conv(x) for x in e) for e, f in equations]
    rays, _, lines = cone_generators(ineqs, eqs, n + 1, exact)
    pts, rys = [], []
    for r in rays:
        t = r[0]
        if la.is_zero(t, exact, la.norm_inf(r)):
            rys.append(tuple(conv(x) for x in r[1:]))
        else:
            pts.append(tuple(conv(x) / conv(t) for x in r[1:]))
    if not pts:
        return None
    lns = [tuple(conv(x) for x in l[1:]) for l in lines]
    return hull(pts, rys, lns)


def whole_space(n: int) -> Polyhedron:
    return hull([(0,) * n], (), [tuple(int(i == j) for j in range(n)) for i in range(n)])


def standard_simplex(n: int) -> Polyhedron:
    pts = [(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return hull(pts)


def cube(n: int, side=1) -> Polyhedron:
    from itertools import product
    return hull([tuple(side * x for x in p) for p in product((0, 1), repeat=n)])


def intersection(p: Polyhedron, q: Polyhedron):
    """Intersection of two polyhedra, or None when it is empty."""
    return from_hrep(list(p.facets) + list(q.facets), list(p.equations) + list(q.equations),
                     p.ambient_dim)


def minkowski_sum(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    if p.ambient_dim != q.ambient_dim:
        raise DomainError("ambient dimensions differ")
    pts = [la.add(a, b) for a in p.vertices for b in q.vertices]
    return hull(pts, list(p.rays) + list(q.rays), list(p.lines) + list(q.lines))


def affine_image(p: Polyhedron, matrix, shift=None) -> Polyhedron:
    """Image of p under x -> matrix x + shift (matrix given as rows)."""
    def lin(v):
        return tuple(la.dot(row, v) for row in matrix)
    m = len(matrix)
    shift = tuple(shift) if shift is not None else (0,) * m
    return hull([la.add(lin(v), shift) for v in p.vertices], [lin(r) for r in p.rays],
                [lin(l) for l in p.lines])


def volume(p: Polyhedron):
    return p.volume()


def support_value(p: Polyhedron, u):
    return p.support_value(u)


def aggregates(p: Polyhedron, u):
    return p.aggregates(u)


def integrate_affine(p: Polyhedron, m, c):
    return p.integrate_affine(m, c)

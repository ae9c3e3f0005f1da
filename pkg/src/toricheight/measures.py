"""Monge-Ampere measures of piecewise affine concave functions and their
polarisations (mixed measures, mixed volumes, mixed integrals)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import factorial

from . import _linalg as la
from .concave import ConcavePA, add, dual, dual_pair, evaluate, integrate_pa, stability_set, sup_convolution
from .polytope import DomainError, Polyhedron, minkowski_sum


@dataclass
class DiscreteMeasure:
    """Finite sum of point masses; atoms are coordinate tuples."""
    masses: dict = field(default_factory=dict)

    def add_atom(self, atom, mass):
        atom = tuple(atom)
        self.masses[atom] = self.masses.get(atom, 0) + mass

    def cleaned(self) -> "DiscreteMeasure":
        return DiscreteMeasure({a: m for a, m in sorted(self.masses.items()) if m != 0})

    @property
    def atoms(self):
        return sorted(self.masses)

    def total_mass(self):
        return sum(self.masses.values(), Fraction(0))

    def integrate(self, func):
        return sum((func(a) * m for a, m in self.masses.items()), Fraction(0))

    def __add__(self, other):
        out = DiscreteMeasure(dict(self.masses))
        for a, m in other.masses.items():
            out.add_atom(a, m)
        return out.cleaned()

    def scaled(self, c):
        return DiscreteMeasure({a: c * m for a, m in self.masses.items()}).cleaned()

    def __eq__(self, other):
        return isinstance(other, DiscreteMeasure) and self.cleaned().masses == other.cleaned().masses


def _full_volume(p: Polyhedron):
    """n-dimensional volume; zero for lower-dimensional polytopes."""
    if not p.is_bounded:
        raise DomainError("unbounded polyhedron has no finite volume")
    return p.volume() if p.is_full_dimensional else 0 * p.volume()


def monge_ampere(f: ConcavePA) -> DiscreteMeasure:
    """Atoms at the vertices of the primal complex, weighted by dual cell volumes."""
    if not stability_set(f).is_bounded:
        raise DomainError("stability set is unbounded")
    mu = DiscreteMeasure()
    for cell in dual_pair(f):
        if cell.primal.dim == 0 and cell.dual.is_full_dimensional:
            mu.add_atom(cell.primal.vertices[0], cell.dual.volume())
    return mu.cleaned()


def _subsets(k):
    for j in range(1, k + 1):
        for idx in combinations(range(k), j):
            yield j, idx


def mixed_monge_ampere(fs) -> DiscreteMeasure:
    fs = list(fs)
    n = fs[0].dim
    if len(fs) != n or any(f.dim != n for f in fs):
        raise DomainError("need n functions on an n-dimensional space")
    total = DiscreteMeasure()
    for j, idx in _subsets(n):
        g = reduce(add, (fs[i] for i in idx))
        total = total + monge_ampere(g).scaled((-1) ** (n - j))
    return total.scaled(Fraction(1, factorial(n)))


def mixed_volume(qs):
    qs = list(qs)
    n = qs[0].ambient_dim
    if len(qs) != n or any(q.ambient_dim != n for q in qs):
        raise DomainError("need n polytopes in an n-dimensional space")
    total = 0
    for j, idx in _subsets(n):
        s = reduce(minkowski_sum, (qs[i] for i in idx))
        total += (-1) ** (n - j) * _full_volume(s)
    return total


def mixed_integral(gs):
    """Polarised (n+1)! * integral, for n+1 functions with compact domains."""
    gs = list(gs)
    n = gs[0].dim
    if len(gs) != n + 1 or any(g.dim != n for g in gs):
        raise DomainError("need n+1 functions on an n-dimensional space")
    if not all(g.domain.is_bounded for g in gs):
        raise DomainError("mixed integrals need compact domains")
    total = 0
    for j, idx in _subsets(n + 1):
        g = reduce(sup_convolution, (gs[i] for i in idx))
        dom = g.domain
        val = integrate_pa(g, dom) if dom.is_full_dimensional else 0
        total += (-1) ** (n + 1 - j) * val
    return total


def boundary_identity_sides(f: ConcavePA):
    """Both sides of the integration-by-parts identity relating f, its measure and its dual."""
    n = f.dim
    delta = stability_set(f)
    if not (delta.is_bounded and delta.is_full_dimensional and delta.is_lattice):
        raise DomainError("stability set must be a full-dimensional lattice polytope")
    mu = monge_ampere(f)
    lhs = -factorial(n) * mu.integrate(lambda u: evaluate(f, u))
    fd = dual(f)
    rhs = factorial(n + 1) * integrate_pa(fd, delta)
    for face in delta.faces(n - 1):
        normal, offset = delta.facet_of_face(face)
        fp = delta.face_polyhedron(face)
        rhs += (-offset) * factorial(n) * integrate_pa(fd, fp)
    return lhs, rhs


def boundary_identity_residual(f: ConcavePA):
    """lhs - rhs of :func:`boundary_identity_sides`; zero for every valid input."""
    lhs, rhs = boundary_identity_sides(f)
    return lhs - rhs


# names used by the published interface
corollary7_sides = boundary_identity_sides
corollary7_residual = boundary_identity_residual

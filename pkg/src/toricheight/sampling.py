"""Seeded random instances used by the test-suite and the experiment scripts."""

from __future__ import annotations

import random
from fractions import Fraction

from . import _linalg as la
from .concave import ConcavePA, concave_pa
from .polytope import Polyhedron, hull


def random_rational(rng: random.Random, num=10, den=4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_lattice_polytope(rng: random.Random, n: int, npts: int = 8, box: int = 3) -> Polyhedron:
    """A full-dimensional lattice polytope: hull of random points in a box."""
    while True:
        pts = [tuple(rng.randint(-box, box) for _ in range(n)) for _ in range(max(npts, n + 1))]
        if la.rank([la.sub(p, pts[0]) for p in pts[1:]], n) == n:
            return hull(pts)


def random_simplex(rng: random.Random, n: int, box: int = 4, lattice: bool = True) -> Polyhedron:
    while True:
        if lattice:
            pts = [tuple(rng.randint(-box, box) for _ in range(n)) for _ in range(n + 1)]
        else:
            pts = [tuple(random_rational(rng, 2 * box, 3) for _ in range(n)) for _ in range(n + 1)]
        if la.det([la.sub(p, pts[0]) for p in pts[1:]]) != 0:
            return hull(pts)


def random_pa_function(rng: random.Random, n: int, pieces: int = 6, box: int = 2,
                       full_stab: bool = True) -> ConcavePA:
    """min of random affine functions with integer slopes, defined on all of R^n.

    With ``full_stab`` at least n + 1 pieces are drawn so the slopes can span.
    """
    if full_stab:
        pieces = max(pieces, n + 1)
    while True:
        slopes = [tuple(rng.randint(-box, box) for _ in range(n)) for _ in range(pieces)]
        if full_stab and la.rank([la.sub(s, slopes[0]) for s in slopes[1:]], n) < n:
            continue
        consts = [random_rational(rng) for _ in slopes]
        return concave_pa(list(zip(slopes, consts)))


def random_point(rng: random.Random, n: int, num=12, den=5) -> tuple:
    return tuple(random_rational(rng, num, den) for _ in range(n))

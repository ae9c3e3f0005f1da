"""Double description method for polyhedral cones.

``cone_generators`` turns {y : A y >= 0, E y = 0} into extreme rays plus a
lineality basis. Running it on the polar cone gives the converse direction,
so one routine serves both V->H and H->V. Exact mode works on integer
vectors (rational input is scaled), float mode on unit-normalised vectors.
"""

from __future__ import annotations

from fractions import Fraction

from . import _linalg as la


def _prep(v, exact):
    return la.integerize(v) if exact else la.normalize_float(v)


def _comb(s, x, t, y, exact):
    """s*x - t*y, renormalised."""
    v = tuple(s * a - t * b for a, b in zip(x, y))
    return la.primitive(v) if exact else la.normalize_float(v)


def cone_generators(ineqs, eqs, dim: int, exact: bool = True):
    """Return (rays, tight_sets, lines) of the cone cut out by ineqs/eqs.

    ``tight_sets[i]`` is the frozenset of inequality indices vanishing on
    ``rays[i]``.
    """
    A = [_prep(a, exact) for a in ineqs]
    E = [_prep(e, exact) for e in eqs]
    lines = [_prep(v, exact) for v in la.nullspace(E, dim, exact)] if E else [
        tuple(int(i == j) if exact else float(i == j) for j in range(dim)) for i in range(dim)
    ]

    def zero(x, a, r):
        if exact:
            return x == 0
        return abs(x) <= 1e-10 * max(1.0, la.norm_inf(a) * la.norm_inf(r) * dim)

    rays: list[tuple] = []
    tight: list[frozenset] = []
    for idx, a in enumerate(A):
        vals = [la.dot(a, l) for l in lines]
        k = next((i for i, x in enumerate(vals) if not zero(x, a, lines[i])), None)
        if k is not None:
            l0 = lines.pop(k)
            s = vals.pop(k)
            if s < 0:
                l0 = tuple(-x for x in l0)
                s = -s
            lines = [_comb(s, l, x, l0, exact) if not zero(x, a, l) else l
                     for l, x in zip(lines, vals)]
            new_rays = []
            for r in rays:
                x = la.dot(a, r)
                new_rays.append(r if zero(x, a, r) else _comb(s, r, x, l0, exact))
            rays = new_rays
            tight = [t | {idx} for t in tight]
            rays.append(l0)
            tight.append(frozenset(range(idx)))
            continue
        vals = [la.dot(a, r) for r in rays]
        pos, neg, nul = [], [], []
        for i, x in enumerate(vals):
            if zero(x, a, rays[i]):
                nul.append(i)
            elif x > 0:
                pos.append(i)
            else:
                neg.append(i)
        if not neg:
            tight = [t | {idx} if i in nul else t for i, t in enumerate(tight)]
            continue
        new_r = [rays[i] for i in pos] + [rays[i] for i in nul]
        new_t = [tight[i] for i in pos] + [tight[i] | {idx} for i in nul]
        for p in pos:
            for q in neg:
                s = tight[p] & tight[q]
                adjacent = True
                for o in range(len(rays)):
                    if o != p and o != q and s <= tight[o]:
                        adjacent = False
                        break
                if adjacent:
                    # vals[p] > 0 > vals[q]
                    new_r.append(_comb(vals[p], rays[q], vals[q], rays[p], exact))
                    new_t.append(s | {idx})
        rays, tight = new_r, new_t
    return rays, tight, lines


def to_fractions(v):
    return tuple(Fraction(x) for x in v)

"""JSON encodings of polytopes, functions, measures and values."""

from __future__ import annotations

from fractions import Fraction

from .concave import ConcavePA, concave_pa
from .exactlog import LogLinear
from .measures import DiscreteMeasure
from .polytope import Polyhedron, from_hrep, hull, whole_space


class ParseError(ValueError):
    """Malformed input document."""


def parse_scalar(x):
    if isinstance(x, bool):
        raise ParseError(f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {x!r}") from exc
    raise ParseError(f"not a number: {x!r}")


def parse_vector(v, dim=None):
    if not isinstance(v, list):
        raise ParseError(f"expected a list, got {v!r}")
    out = tuple(parse_scalar(x) for x in v)
    if dim is not None and len(out) != dim:
        raise ParseError(f"expected {dim} coordinates, got {len(out)}")
    return out


def fmt_scalar(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return float(f"{float(x):.12g}")


def value_json(x, symbolic: str | None = None):
    """{"exact": "p/q"} for rationals, otherwise {"float": x[, "symbolic": s]}."""
    if isinstance(x, LogLinear):
        if x.is_rational:
            return {"exact": str(x.rational)}
        symbolic = symbolic or str(x)
        x = float(x)
    if isinstance(x, (int, Fraction)):
        return {"exact": str(Fraction(x))}
    out = {"float": float(f"{float(x):.12g}")}
    if symbolic is not None:
        out["symbolic"] = symbolic
    return out


def polytope_from_json(d) -> Polyhedron:
    if not isinstance(d, dict) or "dim" not in d:
        raise ParseError("polytope object needs a 'dim' field")
    n = d["dim"]
    if not isinstance(n, int) or n < 0:
        raise ParseError("'dim' must be a non-negative integer")
    if "vertices" in d:
        verts = [parse_vector(v, n) for v in d["vertices"]]
        if not verts:
            raise ParseError("empty vertex list")
        rays = [parse_vector(r, n) for r in d.get("rays", [])]
        lines = [parse_vector(l, n) for l in d.get("lines", [])]
        return hull(verts, rays, lines)
    if "facets" in d:
        facets = [(parse_vector(f["normal"], n), parse_scalar(f["offset"])) for f in d["facets"]]
        eqs = [(parse_vector(f["normal"], n), parse_scalar(f["offset"])) for f in d.get("equations", [])]
        if not facets and not eqs:
            return whole_space(n)
        p = from_hrep(facets, eqs, n)
        if p is None:
            raise ParseError("the inequalities define an empty set")
        return p
    raise ParseError("polytope needs 'vertices' or 'facets'")


def polytope_json(p: Polyhedron) -> dict:
    def vec(v):
        return [fmt_scalar(x) for x in v]
    return {
        "dim": p.ambient_dim,
        "vertices": [vec(v) for v in p.vertices],
        "rays": [vec(r) for r in p.rays],
        "lines": [vec(l) for l in p.lines],
        "facets": [{"normal": [int(x) if p.exact else fmt_scalar(x) for x in a], "offset": fmt_scalar(b)}
                   for a, b in p.facets],
        "equations": [{"normal": [int(x) if p.exact else fmt_scalar(x) for x in a], "offset": fmt_scalar(b)}
                      for a, b in p.equations],
    }


def function_from_json(d) -> ConcavePA:
    if not isinstance(d, dict) or "pieces" not in d or "dim" not in d:
        raise ParseError("function object needs 'dim' and 'pieces'")
    n = d["dim"]
    pieces = [(parse_vector(pc["m"], n), parse_scalar(pc["c"])) for pc in d["pieces"]]
    if not pieces:
        raise ParseError("a function needs at least one piece")
    dom = d.get("domain", "all")
    domain = whole_space(n) if dom == "all" else polytope_from_json(dom)
    return concave_pa(pieces, domain)


def function_json(f: ConcavePA) -> dict:
    dom = f.domain
    domain = "all" if (len(dom.lines) == dom.ambient_dim) else polytope_json(dom)
    return {"dim": f.dim,
            "pieces": [{"m": [fmt_scalar(x) for x in m], "c": fmt_scalar(c)} for m, c in f.pieces],
            "domain": domain}


def measure_json(mu: DiscreteMeasure) -> dict:
    atoms = mu.atoms
    return {"atoms": [[fmt_scalar(x) for x in a] for a in atoms],
            "masses": [fmt_scalar(mu.masses[a]) for a in atoms]}

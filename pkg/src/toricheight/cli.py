"""Command-line front end: JSON in, JSON or TSV out.

Exit codes: 0 success, 2 malformed or invalid input, 3 numeric or
internal-consistency failure (including a failed ``verify``).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
from fractions import Fraction
from math import factorial

from . import concave, heights, integration, measures
from . import polytope as poly
from .exactlog import LogLinear
from .polytope import DomainError
from .serialize import (ParseError, fmt_scalar, function_from_json, function_json, measure_json,
                        parse_scalar, polytope_from_json, polytope_json, value_json)
from .univariate import NumericError


# ----------------------------------------------------------------- parsing

def _vec(text: str):
    try:
        return tuple(parse_scalar(x) for x in text.split(","))
    except ParseError as exc:
        raise ParseError(f"bad vector {text!r}") from exc


def _matrix(text: str):
    return [_vec(row) for row in text.split(";")]


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def _one_input(args):
    if not args.inputs or len(args.inputs) != 1:
        raise ParseError("exactly one --in file is required")
    return _load(args.inputs[0])


# ----------------------------------------------------------- samples output

def _grid(p: poly.Polyhedron, steps: int = 10):
    from itertools import product
    n = p.ambient_dim
    lo = [min(float(v[i]) for v in p.vertices) for i in range(n)]
    hi = [max(float(v[i]) for v in p.vertices) for i in range(n)]
    axes = [[lo[i] + (hi[i] - lo[i]) * k / steps for k in range(steps + 1)] for i in range(n)]
    for pt in product(*axes):
        q = tuple(Fraction(x).limit_denominator(10 ** 6) for x in pt)
        if p.contains(q):
            yield q


def _emit_samples(path, polytope, func):
    if not path:
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{i}" for i in range(polytope.ambient_dim)] + ["value"])
        for q in _grid(polytope):
            w.writerow([fmt_scalar(x) for x in q] + [fmt_scalar(float(func(q)))])


# ---------------------------------------------------------------- commands

def cmd_polytope(args):
    p = polytope_from_json(_one_input(args))
    if args.action == "volume":
        if not p.is_bounded:
            raise DomainError("volume of an unbounded polyhedron")
        return value_json(p.volume())
    if args.action == "faces":
        faces = p.faces(args.dim)
        return {"polytope": polytope_json(p),
                "faces": [{"dim": f.dim, "vertices": sorted(f.vertices), "rays": sorted(f.rays)}
                          for f in faces]}
    if args.action == "aggregates":
        if args.u is None:
            raise ParseError("--u is required")
        return {"aggregates": [{"level": fmt_scalar(a.level), "dim": a.dim,
                                "vertices": [[fmt_scalar(x) for x in p.vertices[i]] for i in sorted(a.vertices)]}
                               for a in p.aggregates(_vec(args.u))]}
    raise ParseError(f"unknown polytope action {args.action}")


def cmd_dual(args):
    f = function_from_json(_one_input(args))
    return function_json(concave.dual(f))


def cmd_ma(args):
    f = function_from_json(_one_input(args))
    return measure_json(measures.monge_ampere(f))


def cmd_mixed_volume(args):
    qs = [polytope_from_json(_load(p)) for p in args.inputs or []]
    if not qs:
        raise ParseError("need --in files")
    return value_json(measures.mixed_volume(qs))


def cmd_mixed_integral(args):
    gs = [function_from_json(_load(p)) for p in args.inputs or []]
    if not gs:
        raise ParseError("need --in files")
    return value_json(measures.mixed_integral(gs))


def _named_function(name, k, c):
    """f and a flag telling whether it maps rationals to rationals."""
    if name == "monomial":
        return (lambda z: Fraction(z) ** k), True
    if name == "power":
        return (lambda z: (Fraction(z) + c) ** k), True
    if name == "exp":
        return (lambda z: math.exp(float(z))), False
    if name == "zlogz":
        return (lambda z: float(z) * math.log(float(z)) if z > 0 else 0.0), False
    raise ParseError(f"unknown function family {name!r}")


def cmd_integrate(args):
    if args.action == "simplex-monomial":
        if args.alpha is None:
            raise ParseError("--alpha is required")
        alpha = [int(x) for x in args.alpha.split(",")]
        return value_json(integration.simplex_monomial(alpha, args.log_index))
    p = polytope_from_json(_one_input(args))
    if args.action == "coeffs":
        if args.u is None:
            raise ParseError("--u is required")
        co = integration.coefficients(p, _vec(args.u))
        return {"direction": [fmt_scalar(x) for x in co.direction],
                "entries": [{"level": fmt_scalar(a.level), "dim": a.dim,
                             "vertices": sorted(a.vertices),
                             "coeffs": [fmt_scalar(c) for c in cs[:a.dim + 1]]} for a, cs in co.entries]}
    if args.action == "brion":
        if args.u is None:
            raise ParseError("--u is required")
        f, _ = _named_function(args.f, args.k, parse_scalar(args.c))
        return value_json(integration.brion_short(p, _vec(args.u), f))
    if args.action == "l-log-l":
        if args.m is None:
            raise ParseError("--m is required")
        m, c = _vec(args.m), parse_scalar(args.c)
        exact = heights.l_log_l_integral_exact(p, m, c) if len(p.vertices) == p.dim + 1 else None
        if exact is not None:
            return value_json(exact / p.volume())
        return value_json(integration.simplex_l_log_l(p, m, c))
    raise ParseError(f"unknown integrate action {args.action}")


def _roof_from_json(d, polytope):
    kind = d.get("type", "pa")
    if kind == "canonical":
        return concave.concave_pa([((0,) * polytope.ambient_dim, 0)], polytope)
    if kind == "fubini-study":
        return heights.fubini_study_roof(polytope.ambient_dim)
    if kind == "entropy":
        forms = tuple((tuple(parse_scalar(x) for x in f["m"]), parse_scalar(f["c"])) for f in d["forms"])
        weights = tuple(parse_scalar(w) for w in d["weights"])
        return heights.EntropyRoof(polytope, forms, weights)
    if kind == "pa":
        return function_from_json(d["function"])
    raise ParseError(f"unknown roof type {kind!r}")


def cmd_height(args):
    a = args.action
    lam = parse_scalar(args.lam)
    if a == "fs":
        return value_json(heights.fubini_study_height(args.n))
    if a == "veronese":
        v = heights.veronese_height(args.r)
        return {"symbolic": v["symbolic"], "float": fmt_scalar(v["float"])}
    if a == "bundle":
        if args.a is None:
            raise ParseError("--a is required")
        out = heights.bundle_height(args.n, _vec(args.a))
        return {"degree": str(out["degree"]), "height": str(out["height"])}
    if a == "curve":
        if args.m is None or args.p is None:
            raise ParseError("--m and --p are required")
        m = [int(x) for x in args.m.split(",")]
        p = list(_vec(args.p))
        if args.place == "global":
            return value_json(heights.curve_global_height(m, p))
        return value_json(heights.curve_local_height(m, p, args.place))
    if a == "local":
        psi = function_from_json(_one_input(args))
        val = heights.local_height(psi, lam)
        dual = concave.dual(psi)
        _emit_samples(args.emit_samples, dual.domain, dual)
        return value_json(val)
    if a == "face":
        psi = function_from_json(_one_input(args))
        if args.face is None:
            raise ParseError("--face is required")
        face = polytope_from_json(_load(args.face))
        stab = concave.stability_set(psi)
        if not _is_face(stab, face):
            raise DomainError("the given polytope is not a face of the stability set")
        return value_json(heights.face_local_height(psi, face, lam))
    if a == "pullback":
        psi = function_from_json(_one_input(args))
        if args.H is None:
            raise ParseError("--H is required")
        shift = _vec(args.u0) if args.u0 else None
        return value_json(heights.pullback_height(psi, _matrix(args.H), shift, lam))
    if a == "global":
        d = _one_input(args)
        p = polytope_from_json(d["polytope"])
        places = []
        for pl in d.get("places", []):
            roof = _roof_from_json(pl.get("roof", {"type": "canonical"}), p)
            places.append(heights.Place(pl.get("place", "inf"), roof, parse_scalar(pl.get("weight", 1))))
        return value_json(heights.global_height(heights.ToricMetric(p, tuple(places))))
    if a == "polytope-metric":
        p = polytope_from_json(_one_input(args))
        if args.forms is None:
            raise ParseError("--forms is required")
        fd = _load(args.forms)
        forms = [(tuple(parse_scalar(x) for x in f["m"]), parse_scalar(f["c"])) for f in fd]
        weights = [parse_scalar(f.get("weight", 1)) for f in fd]
        res = heights.polytope_metric_height(p, forms, weights)
        _emit_samples(args.emit_samples, p, heights.EntropyRoof(p, tuple(forms), tuple(weights)))
        out = value_json(res.value)
        out["general_path"] = fmt_scalar(res.general)
        return out
    if a == "entropy":
        delta = polytope_from_json(_one_input(args))
        gamma = polytope_from_json(_load(args.gamma)) if args.gamma else delta
        return value_json(heights.entropy_average(delta, gamma, parse_scalar(args.c)))
    raise ParseError(f"unknown height action {a}")


def _is_face(p: poly.Polyhedron, f: poly.Polyhedron) -> bool:
    target = set(f.vertices)
    return any({p.vertices[i] for i in face.vertices} == target and not face.rays
               for face in p.face_lattice)


# ------------------------------------------------------------------ verify

def reference_table_rows(seed: int = 0, tol: float = 1e-10):
    """(item, computed, expected, ok) rows for the closed-form values."""
    rows = []

    def add(item, got, want, exact=True):
        ok = (got == want) if exact else abs(float(got) - float(want)) <= max(tol, 1e-9) * max(1, abs(float(want)))
        rows.append((item, got, want, ok))

    fs = [Fraction(1, 2), Fraction(5, 4), Fraction(13, 6), Fraction(77, 24), Fraction(87, 20), Fraction(223, 40)]
    for n, want in enumerate(fs, start=1):
        add(f"fubini-study n={n}", heights.fubini_study_height(n), want)
        via_monomials = factorial(n + 1) * sum(
            -Fraction(1, 2) * integration.simplex_monomial([int(j == i) for j in range(n + 1)], i)
            for i in range(n + 1))
        add(f"fubini-study n={n} (monomial route)", via_monomials, want)
    s3 = math.sqrt(3)
    veronese = {1: 0.5, 2: 1 + math.pi / (3 * s3), 3: 1.5 + math.pi / 2,
                5: 2.5 + 7 * math.pi / (3 * s3), 7: 3.5 + (1 + math.sqrt(2)) * math.pi}
    for r, want in veronese.items():
        add(f"veronese r={r}", heights.veronese_height(r)["float"], want, exact=False)
        add(f"veronese r={r} (roots)", heights.curve_global_height(list(range(1, r + 1)), [1] * r), want,
            exact=False)
    for b in range(7):
        want = Fraction(b * b, 2) + Fraction(9 * b, 4) + 3
        add(f"hirzebruch b={b}", heights.bundle_height(1, [1, b + 1])["height"], want)
    bh = heights.bundle_height(1, [1, 1, 1])
    add("bundle n=1 a=(1,1,1) degree", bh["degree"], Fraction(3))
    add("bundle n=1 a=(1,1,1) height", bh["height"], Fraction(8))
    for n in (1, 2, 3):
        s = poly.standard_simplex(n)
        add(f"entropy simplex n={n}", heights.entropy_average(s, s, Fraction(1, 2)),
            integration.harmonic_tail(2, n + 1))
    add("monomial (0,1,1)", integration.simplex_monomial([0, 1, 1]), Fraction(1, 24))
    add("monomial (0,1) log w1", integration.simplex_monomial([0, 1], 1), Fraction(-1, 4))
    add("monomial (0,0,0)", integration.simplex_monomial([0, 0, 0]), Fraction(1, 2))
    rng = random.Random(seed)
    from .sampling import random_lattice_polytope
    for i in range(5):
        n = rng.randint(1, 3)
        p = random_lattice_polytope(rng, n, npts=n + 3)
        u = tuple(rng.randint(-3, 3) for _ in range(n))
        co = integration.coefficients(p, u)
        vol = co.integrate(lambda k, z: float(z) ** (n - k) / factorial(n - k))
        add(f"volume identity #{i} (n={n})", vol, p.volume(), exact=False)
    return rows


def cmd_verify(args):
    if args.action != "paper-tables":
        raise ParseError(f"unknown verify action {args.action}")
    rows = reference_table_rows(args.seed, args.tol)
    out = {"rows": [{"item": it, "computed": _show(g), "expected": _show(w), "ok": ok}
                    for it, g, w, ok in rows],
           "all_ok": all(r[3] for r in rows)}
    if args.emit_samples:
        with open(args.emit_samples, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["item", "computed", "expected", "ok"])
            for it, g, wv, ok in rows:
                w.writerow([it, _show(g), _show(wv), ok])
    return out


def _show(x):
    if isinstance(x, LogLinear):
        return str(x.rational) if x.is_rational else fmt_scalar(float(x))
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return fmt_scalar(x)


# ------------------------------------------------------------------ driver

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="inputs", action="append", metavar="PATH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--emit-samples", dest="emit_samples", metavar="PATH")

    parser = argparse.ArgumentParser(prog="toricheight", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polytope", parents=[common])
    p.add_argument("action", choices=("volume", "faces", "aggregates"))
    p.add_argument("--dim", type=int)
    p.add_argument("--u")
    p.set_defaults(func=cmd_polytope)

    for name, fn in (("dual", cmd_dual), ("ma", cmd_ma), ("mixed-volume", cmd_mixed_volume),
                     ("mixed-integral", cmd_mixed_integral)):
        sp = sub.add_parser(name, parents=[common])
        sp.set_defaults(func=fn)

    p = sub.add_parser("integrate", parents=[common])
    p.add_argument("action", choices=("coeffs", "brion", "simplex-monomial", "l-log-l"))
    p.add_argument("--u")
    p.add_argument("--f", default="monomial", choices=("monomial", "power", "exp", "zlogz"))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--c", default="0")
    p.add_argument("--m")
    p.add_argument("--alpha")
    p.add_argument("--log-index", dest="log_index", type=int)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("height", parents=[common])
    p.add_argument("action", choices=("local", "global", "face", "pullback", "polytope-metric",
                                      "entropy", "fs", "curve", "veronese", "bundle"))
    p.add_argument("--lam", default="1")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--a")
    p.add_argument("--m")
    p.add_argument("--p")
    p.add_argument("--place", default="global")
    p.add_argument("--face")
    p.add_argument("--H")
    p.add_argument("--u0")
    p.add_argument("--forms")
    p.add_argument("--gamma")
    p.add_argument("--c", default="1/2")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("action", choices=("paper-tables",))
    p.set_defaults(func=cmd_verify)
    return parser


def _tsv(obj) -> str:
    lines = []
    if isinstance(obj, dict) and "rows" in obj:
        lines.append("item\tcomputed\texpected\tok")
        for r in obj["rows"]:
            lines.append(f"{r['item']}\t{r['computed']}\t{r['expected']}\t{r['ok']}")
        return "\n".join(lines) + "\n"
    if isinstance(obj, dict):
        for k, v in obj.items():
            lines.append(f"{k}\t{json.dumps(v) if isinstance(v, (list, dict)) else v}")
        return "\n".join(lines) + "\n"
    return json.dumps(obj) + "\n"


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except (ParseError, DomainError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (heights.InternalConsistencyError, NumericError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    text = _tsv(result) if args.format == "tsv" else json.dumps(result) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if isinstance(result, dict) and result.get("all_ok") is False:
        return 3
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

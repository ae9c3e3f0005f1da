"""Univariate polynomial utilities: roots with multiplicities, p-adic
valuations and Newton polygons.

Coefficient lists are in increasing degree: ``[a0, a1, ..., ad]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import isprime

from .polytope import DomainError


class NumericError(ArithmeticError):
    """An iterative method failed to reach its tolerance."""


# ------------------------------------------------------- exact polynomial ops

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _deriv(p):
    return _trim([i * p[i] for i in range(1, len(p))] or [Fraction(0)])


def _divmod(a, b):
    a = [Fraction(x) for x in _trim(a)]
    b = [Fraction(x) for x in _trim(b)]
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = a[:]
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        coef = r[i + len(b) - 1] / lead
        q[i] = coef
        for j, bj in enumerate(b):
            r[i + j] -= coef * bj
    return _trim(q), _trim(r[:len(b) - 1] or [Fraction(0)])


def _is_zero_poly(p):
    return all(x == 0 for x in p)


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while not _is_zero_poly(b):
        _, r = _divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [x / lead for x in a]


def squarefree_decomposition(coeffs):
    """Yun's algorithm: list of (factor, multiplicity) with exact rational coefficients."""
    f = [Fraction(x) for x in _trim(coeffs)]
    if len(f) <= 1:
        return []
    out = []
    fp = _deriv(f)
    a = _gcd(f, fp)
    b, _ = _divmod(f, a)
    c, _ = _divmod(fp, a)
    d = [x - y for x, y in _zip_pad(c, _deriv(b))]
    i = 1
    while len(_trim(b)) > 1:
        a = _gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b, _ = _divmod(b, a)
        c, _ = _divmod(d, a)
        d = [x - y for x, y in _zip_pad(c, _deriv(b))]
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


# ------------------------------------------------------------- numeric roots

def aberth(coeffs, tol: float = 1e-13, max_iter: int = 500) -> np.ndarray:
    """All complex roots of a polynomial by the Aberth-Ehrlich iteration."""
    c = np.array([complex(x) for x in _trim(coeffs)])
    deg = len(c) - 1
    if deg < 1:
        return np.zeros(0, dtype=complex)
    if deg == 1:
        return np.array([-c[0] / c[1]])
    mon = c[::-1] / c[-1]                      # monic, highest degree first
    dmon = np.polyder(mon)
    radius = 1 + np.max(np.abs(mon[1:]))        # Cauchy bound
    # scale initial circle by the geometric mean of the root moduli
    r0 = abs(mon[-1]) ** (1.0 / deg) if mon[-1] != 0 else 1.0
    r0 = min(max(r0, 1e-8), radius)
    k = np.arange(deg)
    z = r0 * np.exp(2j * np.pi * k / deg + 0.4j)
    for _ in range(max_iter):
        pz = np.polyval(mon, z)
        dz = np.polyval(dmon, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            step = ratio / (1.0 - ratio * s)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            return z
    # accept if residuals are small relative to coefficient size
    res = np.abs(np.polyval(mon, z)) / np.polyval(np.abs(mon), np.abs(z))
    if np.all(res < 1e-10):
        return z
    raise NumericError("Aberth iteration did not converge")


@dataclass(frozen=True)
class Root:
    value: complex
    multiplicity: int


def _canonical(roots):
    return sorted(roots, key=lambda r: (round(r.value.real, 9), round(r.value.imag, 9)))


def roots(coeffs, cluster_tol: float = 1e-8) -> list:
    """Roots with multiplicities, sorted by (real, imag).

    Rational coefficients go through an exact square-free decomposition first,
    so repeated roots are detected exactly. Float/complex input falls back
    to clustering roots closer than ``cluster_tol`` times the root scale.
    """
    coeffs = list(coeffs)
    if not coeffs or all(x == 0 for x in coeffs):
        raise DomainError("the zero polynomial has no root list")
    if all(isinstance(x, (int, Fraction)) for x in coeffs):
        out = []
        for factor, mult in squarefree_decomposition(coeffs):
            for z in aberth(factor):
                out.append(Root(complex(z), mult))
        return _canonical(out)
    z = aberth(coeffs)
    scale = max(1.0, float(np.max(np.abs(z)))) if len(z) else 1.0
    used = [False] * len(z)
    out = []
    for i in range(len(z)):
        if used[i]:
            continue
        group = [i]
        for j in range(i + 1, len(z)):
            if not used[j] and abs(z[j] - z[i]) <= cluster_tol * scale:
                group.append(j)
                used[j] = True
        out.append(Root(complex(np.mean(z[group])), len(group)))
    return _canonical(out)


# --------------------------------------------------------------- p-adic side

def p_adic_valuation(x, p: int) -> int:
    """v_p of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("valuation of zero is +infinity")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class NewtonSegment:
    start: int          # exponent at the left end
    end: int            # exponent at the right end
    slope: Fraction     # change in valuation per unit exponent

    @property
    def root_valuation(self) -> Fraction:
        """Valuation shared by the roots this segment accounts for."""
        return -self.slope

    @property
    def length(self) -> int:
        return self.end - self.start


def newton_polygon(coeffs, p: int) -> list:
    """Lower convex hull of {(i, v_p(a_i))}, as segments left to right."""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    coeffs = _trim(coeffs)
    if coeffs[0] == 0 or len(coeffs) < 2:
        raise DomainError("need a nonzero constant term and positive degree")
    pts = [(i, Fraction(p_adic_valuation(a, p))) for i, a in enumerate(coeffs) if a != 0]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return [NewtonSegment(a[0], b[0], (b[1] - a[1]) / (b[0] - a[0])) for a, b in zip(hull, hull[1:])]


def root_valuations(coeffs, p: int) -> list:
    """Multiset of v_p of the nonzero roots, one entry per root."""
    out = []
    for seg in newton_polygon(coeffs, p):
        out.extend([seg.root_valuation] * seg.length)
    return sorted(out)

"""Small exact/float linear algebra kernel.

Vectors are tuples. Exact mode works over ``Fraction``/``int``; float mode
uses a relative tolerance. Nothing here knows about polytopes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, sqrt
from typing import Iterable, Sequence

Vec = tuple
FLOAT_TOL = 1e-9


def is_exact(*values) -> bool:
    """True when every scalar in the (possibly nested) input is int/Fraction."""
    for v in values:
        if isinstance(v, (tuple, list)):
            if not is_exact(*v):
                return False
        elif isinstance(v, float):
            return False
    return True


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def sub(a, b) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def add(a, b) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a) -> Vec:
    return tuple(c * x for x in a)


def is_zero(x, exact: bool, ref: float = 1.0) -> bool:
    if exact:
        return x == 0
    return abs(x) <= FLOAT_TOL * max(1.0, ref)


def norm_inf(a) -> float:
    return max((abs(float(x)) for x in a), default=0.0)


def rref(rows: Iterable[Sequence], ncols: int, exact: bool = True):
    """Row-reduced echelon form. Returns (rows, pivot_columns)."""
    m = [list(Fraction(x) if exact else float(x) for x in r) for r in rows]
    ref = max((norm_inf(r) for r in m), default=1.0) if not exact else 1.0
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        if exact:
            piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        else:
            best = max(range(r, len(m)), key=lambda i: abs(m[i][c]))
            piv = best if abs(m[best][c]) > FLOAT_TOL * max(1.0, ref) else None
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not (m[i][c] == 0):
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


def rank(rows, ncols: int, exact: bool = True) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return len(rref(rows, ncols, exact)[1])


def nullspace(rows, ncols: int, exact: bool = True) -> list[Vec]:
    """Basis of {x : r.x = 0 for every row r}."""
    rows = list(rows)
    if not rows:
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return [tuple(one if i == j else zero for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows, ncols, exact)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0) if exact else 0.0] * ncols
        v[f] = Fraction(1) if exact else 1.0
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def row_basis(rows, ncols: int, exact: bool = True) -> list[Vec]:
    rows = list(rows)
    if not rows:
        return []
    return rref(rows, ncols, exact)[0]


def solve(matrix, rhs, exact: bool = True):
    """Solve a square nonsingular system by Gauss-Jordan."""
    n = len(matrix)
    aug = [list(matrix[i]) + [rhs[i]] for i in range(n)]
    red, piv = rref(aug, n, exact)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(row[n] for row in red)


def det(matrix, exact: bool = True):
    n = len(matrix)
    if n == 0:
        return Fraction(1) if exact else 1.0
    m = [list(Fraction(x) if exact else float(x) for x in r) for r in matrix]
    sign = 1
    d = Fraction(1) if exact else 1.0
    for c in range(n):
        if exact:
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        else:
            piv = max(range(c, n), key=lambda i: abs(m[i][c]))
            if m[piv][c] == 0:
                piv = None
        if piv is None:
            return Fraction(0) if exact else 0.0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * d


def gram(vectors):
    return [[dot(a, b) for b in vectors] for a in vectors]


def project(v, basis, exact: bool = True) -> Vec:
    """Orthogonal projection of v onto span(basis); basis must be independent."""
    if not basis:
        return tuple(0 * x for x in v)
    g = gram(basis)
    coeffs = solve(g, [dot(b, v) for b in basis], exact)
    out = [0] * len(v)
    for c, b in zip(coeffs, basis):
        for i, x in enumerate(b):
            out[i] += c * x
    return tuple(out)


def integerize(v) -> tuple[int, ...]:
    """Positive multiple of a rational vector with coprime integer entries."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    return primitive(ints)


def primitive(v) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def normalize_float(v) -> Vec:
    m = norm_inf(v)
    return tuple(float(x) / m for x in v) if m else tuple(float(x) for x in v)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """A basis of the lattice {x in Z^n : A x = 0}; the result is saturated.

    Column operations bring A to echelon form A U = [H | 0] with U unimodular;
    the trailing columns of U span the kernel lattice.
    """
    a = [list(int(x) for x in r) for r in rows]
    n = ncols
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # columns of U

    def colop(i, j, q):  # col_j -= q * col_i
        for r in a:
            r[j] -= q * r[i]
        for r in u:
            r[j] -= q * r[i]

    def swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    col = 0
    for row in range(len(a)):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if a[row][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(a[row][j]))
            swap(col, jmin)
            done = True
            for j in range(col + 1, n):
                if a[row][j] != 0:
                    colop(col, j, a[row][j] // a[row][col])
                    if a[row][j] != 0:
                        done = False
            if done:
                break
        if any(a[row][j] != 0 for j in range(col, n)):
            col += 1
    return [tuple(u[i][j] for i in range(n)) for j in range(col, n)]


def lattice_basis_of_span(vectors: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Basis of the saturated lattice Z^n intersected with span(vectors)."""
    vectors = [tuple(Fraction(x) for x in v) for v in vectors]
    if not vectors or rank(vectors, n) == 0:
        return []
    perp = nullspace(vectors, n)
    if not perp:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel([integerize(p) for p in perp], n)


def coordinates(v, basis, exact: bool = True) -> Vec:
    """Coordinates of v (assumed in span(basis)) with respect to basis."""
    g = gram(basis)
    return solve(g, [dot(b, v) for b in basis], exact)


def euclid_norm(v) -> float:
    return sqrt(float(dot(v, v)))

"""Numbers of the form q0 + sum_p q_p log p with rational q's.

Heights on simplices with rational data land in this group, so keeping
them symbolic lets identities such as the simplex entropy be checked
exactly instead of to a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import log

from sympy import factorint


@dataclass(frozen=True)
class LogLinear:
    rational: Fraction = Fraction(0)
    logs: tuple = ()   # sorted ((prime, coefficient), ...)

    @staticmethod
    def of(x) -> "LogLinear":
        if isinstance(x, LogLinear):
            return x
        return LogLinear(Fraction(x))

    @staticmethod
    def log_of(x) -> "LogLinear":
        """log of a positive rational."""
        x = Fraction(x)
        if x <= 0:
            raise ValueError("log of a non-positive number")
        coeffs: dict = {}
        for p, e in factorint(x.numerator).items():
            coeffs[p] = coeffs.get(p, 0) + e
        for p, e in factorint(x.denominator).items():
            coeffs[p] = coeffs.get(p, 0) - e
        return LogLinear(Fraction(0), _norm(coeffs))

    def _dict(self):
        return dict(self.logs)

    def __add__(self, other):
        other = LogLinear.of(other)
        d = self._dict()
        for p, c in other.logs:
            d[p] = d.get(p, 0) + c
        return LogLinear(self.rational + other.rational, _norm(d))

    __radd__ = __add__

    def __neg__(self):
        return LogLinear(-self.rational, tuple((p, -c) for p, c in self.logs))

    def __sub__(self, other):
        return self + (-LogLinear.of(other))

    def __rsub__(self, other):
        return LogLinear.of(other) - self

    def __mul__(self, k):
        if isinstance(k, LogLinear):
            if k.logs and self.logs:
                raise TypeError("product of two transcendental parts")
            if k.logs:
                return k * self.rational
            k = k.rational
        k = Fraction(k)
        return LogLinear(self.rational * k, _norm({p: c * k for p, c in self.logs}))

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / Fraction(k))

    def __float__(self):
        return float(self.rational) + sum(float(c) * log(p) for p, c in self.logs)

    @property
    def is_rational(self) -> bool:
        return not self.logs

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.rational == other
        if isinstance(other, LogLinear):
            return self.rational == other.rational and self.logs == other.logs
        return NotImplemented

    def __hash__(self):
        return hash((self.rational, self.logs))

    def __str__(self):
        parts = []
        if self.rational != 0 or not self.logs:
            parts.append(str(self.rational))
        for p, c in self.logs:
            parts.append(f"{c}*log({p})")
        return " + ".join(parts)


def _norm(d):
    return tuple(sorted((p, Fraction(c)) for p, c in d.items() if c != 0))

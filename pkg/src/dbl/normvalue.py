"""Exact arithmetic for norm values of the form q^e (q, e rational).

A NormValue is either zero or a finite product of rational prime powers
prod p**e_p with rational exponents e_p.  That representation makes
multiplication exact (add exponent vectors) and makes comparison decidable
by cross-exponentiation of big integers: after clearing denominators,
comparing prod p**n_p with 1 is an integer comparison.

Values that happen to be rational numbers (all exponents integral) support
exact addition; adding anything else raises UnsupportedValue, which keeps
every operation in the library decidable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import UnsupportedValue


@lru_cache(maxsize=4096)
def factor_int(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of a positive integer by trial division."""
    if n <= 0:
        raise ValueError("factor_int needs a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _factor_fraction(q: Fraction) -> dict[int, Fraction]:
    vec: dict[int, Fraction] = {}
    for p, e in factor_int(q.numerator):
        vec[p] = vec.get(p, Fraction(0)) + e
    for p, e in factor_int(q.denominator):
        vec[p] = vec.get(p, Fraction(0)) - e
    return {p: e for p, e in vec.items() if e != 0}


class NormValue:
    """An exact nonnegative real of the form q^e, totally ordered."""

    __slots__ = ("_zero", "_vec")

    def __init__(self, zero: bool, vec: tuple[tuple[int, Fraction], ...]):
        self._zero = zero
        self._vec = vec

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "NormValue":
        return _ZERO

    @staticmethod
    def one() -> "NormValue":
        return _ONE

    @staticmethod
    def from_fraction(q) -> "NormValue":
        q = Fraction(q)
        if q < 0:
            raise ValueError("norm values are nonnegative")
        if q == 0:
            return _ZERO
        vec = _factor_fraction(q)
        return NormValue(False, tuple(sorted(vec.items())))

    @staticmethod
    def from_pow(base, exponent) -> "NormValue":
        """The value base**exponent with base a positive rational."""
        base = Fraction(base)
        exponent = Fraction(exponent)
        if base <= 0:
            raise ValueError("base must be positive")
        if base == 1 or exponent == 0:
            return _ONE
        vec = {p: e * exponent for p, e in _factor_fraction(base).items()}
        return NormValue(False, tuple(sorted(vec.items())))

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self._zero

    @property
    def is_one(self) -> bool:
        return not self._zero and not self._vec

    def is_rational(self) -> bool:
        """True when the value is an actual rational number."""
        if self._zero:
            return True
        return all(e.denominator == 1 for _, e in self._vec)

    def as_fraction(self) -> Fraction:
        if self._zero:
            return Fraction(0)
        if not self.is_rational():
            raise UnsupportedValue(f"{self} is irrational")
        out = Fraction(1)
        for p, e in self._vec:
            out *= Fraction(p) ** int(e)
        return out

    # -- canonical base/exponent form ----------------------------------

    def canonical_pow(self) -> tuple[Fraction, Fraction]:
        """Write the value as base**exp with exp > 0 minimal-denominator.

        Returns (1, 0) for the value 1; undefined for zero.
        """
        if self._zero:
            raise ValueError("zero has no power form")
        if not self._vec:
            return Fraction(1), Fraction(0)
        den = 1
        for _, e in self._vec:
            den = den * e.denominator // gcd(den, e.denominator)
        ints = [(p, int(e * den)) for p, e in self._vec]
        g = 0
        for _, m in ints:
            g = gcd(g, abs(m))
        base = Fraction(1)
        for p, m in ints:
            base *= Fraction(p) ** (m // g)
        return base, Fraction(g, den)

    # -- arithmetic ----------------------------------------------------

    def __mul__(self, other: "NormValue") -> "NormValue":
        if self._zero or other._zero:
            return _ZERO
        vec = dict(self._vec)
        for p, e in other._vec:
            s = vec.get(p, Fraction(0)) + e
            if s == 0:
                vec.pop(p, None)
            else:
                vec[p] = s
        return NormValue(False, tuple(sorted(vec.items())))

    def __pow__(self, exponent) -> "NormValue":
        exponent = Fraction(exponent)
        if self._zero:
            if exponent <= 0:
                raise ValueError("0**e needs e > 0")
            return _ZERO
        if exponent == 0:
            return _ONE
        vec = {p: e * exponent for p, e in self._vec}
        return NormValue(False, tuple(sorted(vec.items())))

    def __add__(self, other: "NormValue") -> "NormValue":
        # Sums are only exact for rational values; everything that needs
        # addition (Archimedean bounds) is restricted to those.
        return NormValue.from_fraction(self.as_fraction() + other.as_fraction())

    def __sub__(self, other: "NormValue") -> "NormValue":
        d = self.as_fraction() - other.as_fraction()
        if d < 0:
            raise ValueError("norm values are nonnegative")
        return NormValue.from_fraction(d)

    # -- total order ----------------------------------------------------

    def compare(self, other: "NormValue") -> int:
        """-1, 0, or 1 as self <, =, > other."""
        if self._zero and other._zero:
            return 0
        if self._zero:
            return -1
        if other._zero:
            return 1
        diff: dict[int, Fraction] = dict(self._vec)
        for p, e in other._vec:
            s = diff.get(p, Fraction(0)) - e
            if s == 0:
                diff.pop(p, None)
            else:
                diff[p] = s
        if not diff:
            return 0
        den = 1
        for e in diff.values():
            den = den * e.denominator // gcd(den, e.denominator)
        num = 1
        inv = 1
        for p, e in diff.items():
            m = int(e * den)
            if m > 0:
                num *= p**m
            else:
                inv *= p ** (-m)
        if num == inv:
            return 0
        return 1 if num > inv else -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormValue):
            return NotImplemented
        return self._zero == other._zero and self._vec == other._vec

    def __hash__(self):
        return hash((self._zero, self._vec))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    # -- presentation ----------------------------------------------------

    def __repr__(self):
        if self._zero:
            return "NormValue(0)"
        if not self._vec:
            return "NormValue(1)"
        base, exp = self.canonical_pow()
        if exp == 1:
            return f"NormValue({base})"
        return f"NormValue({base}^{exp})"

    def to_json(self):
        if self._zero:
            return {"kind": "zero"}
        if self.is_rational():
            q = self.as_fraction()
            return {"kind": "rational", "value": f"{q.numerator}/{q.denominator}"}
        base, exp = self.canonical_pow()
        return {
            "kind": "pow",
            "base": f"{base.numerator}/{base.denominator}",
            "exp": f"{exp.numerator}/{exp.denominator}",
        }

    @staticmethod
    def from_json(obj) -> "NormValue":
        kind = obj["kind"]
        if kind == "zero":
            return _ZERO
        if kind == "rational":
            return NormValue.from_fraction(Fraction(obj["value"]))
        return NormValue.from_pow(Fraction(obj["base"]), Fraction(obj["exp"]))


_ZERO = NormValue(True, ())
_ONE = NormValue(False, ())

NV_ZERO = _ZERO
NV_ONE = _ONE


def nv_compare(u: NormValue, v: NormValue) -> str:
    """Ordering of two norm values: 'less' | 'equal' | 'greater'."""
    c = u.compare(v)
    return "less" if c < 0 else ("equal" if c == 0 else "greater")


def nv_max(values, default=None):
    out = default
    for v in values:
        if out is None or v > out:
            out = v
    if out is None:
        raise ValueError("nv_max of empty sequence needs a default")
    return out


def nv_sum(values) -> NormValue:
    total = Fraction(0)
    for v in values:
        total += v.as_fraction()
    return NormValue.from_fraction(total)

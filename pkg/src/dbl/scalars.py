"""Exact normed rings with a norm gap at 0.

Five ring descriptors are supported:

  IntInf      Z with the Euclidean absolute value
  IntTriv     Z with the trivial norm (1 on nonzero)
  FpTriv(p)   the field F_p with the trivial norm
  ZmodTriv(n) Z/n with the trivial norm
  ZmodQuot(n) Z/n with the quotient norm inherited from IntInf

Every nonzero element has norm >= 1, so the norm topology is discrete.
Elements are plain Python ints, reduced to [0, n) for the Z/n variants.
n = 1 is allowed for the Z/n variants and gives the zero ring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ElementOutOfRange, UnsupportedRing, ValidationFailure
from .normvalue import NV_ONE, NV_ZERO, NormValue, factor_int

_KINDS = ("IntInf", "IntTriv", "FpTriv", "ZmodTriv", "ZmodQuot")


def quotient_norm(n: int, a: int) -> NormValue:
    """Quotient norm on Z/n: min |a + kn| over representatives.

    The minimum is attained in the symmetric range (-n/2, n/2], so after
    reducing a it is min(a, n - a).
    """
    if n < 1:
        raise ElementOutOfRange(f"modulus {n} < 1")
    if not 0 <= a < n:
        raise ElementOutOfRange(f"residue {a} not reduced mod {n}")
    if a == 0:
        return NV_ZERO
    return NormValue.from_fraction(min(a, n - a))


def _is_prime(p: int) -> bool:
    return p >= 2 and factor_int(p) == ((p, 1),)


@dataclass(frozen=True)
class RingDescriptor:
    """A supported exact normed ring, with declared metadata flags."""

    kind: str
    p: int | None = None
    n: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UnsupportedRing(f"unknown ring kind {self.kind!r}")
        if self.kind == "FpTriv":
            if self.p is None or not _is_prime(self.p):
                raise UnsupportedRing(f"FpTriv needs a prime, got {self.p}")
        if self.kind in ("ZmodTriv", "ZmodQuot"):
            if self.n is None or self.n < 1:
                raise UnsupportedRing(f"Z/n needs n >= 1, got {self.n}")

    # -- structure ------------------------------------------------------

    @property
    def modulus(self) -> int | None:
        if self.kind == "FpTriv":
            return self.p
        if self.kind in ("ZmodTriv", "ZmodQuot"):
            return self.n
        return None

    @property
    def is_zero_ring(self) -> bool:
        return self.modulus == 1

    @property
    def non_archimedean(self) -> bool:
        return self.kind in ("IntTriv", "FpTriv", "ZmodTriv")

    @property
    def ordered_ring(self) -> bool:
        return self.kind in ("IntInf", "IntTriv")

    @property
    def isolation_gap(self) -> NormValue:
        return NV_ONE

    @property
    def one_norm(self) -> NormValue:
        return NV_ZERO if self.is_zero_ring else NV_ONE

    @property
    def spectrum_connected(self) -> bool:
        # Declared metadata: for Z/n the spectrum is one point per prime
        # divisor of n, so connected means n is a prime power.
        m = self.modulus
        if m is None or self.kind == "FpTriv":
            return True
        return len(factor_int(m)) == 1 if m > 1 else False

    def nontrivial_idempotent(self) -> int | None:
        """An idempotent other than 0, 1 when the ring has one."""
        m = self.modulus
        if m is None or m <= 1:
            return None
        for e in range(2, m):
            if (e * e - e) % m == 0:
                return e
        return None

    # -- element arithmetic ----------------------------------------------

    def reduce(self, a: int) -> int:
        m = self.modulus
        if m is None:
            return int(a)
        return int(a) % m

    def check_element(self, a) -> int:
        if not isinstance(a, int) or isinstance(a, bool):
            raise ElementOutOfRange(f"{a!r} is not an integer element")
        m = self.modulus
        if m is not None and not 0 <= a < m:
            raise ElementOutOfRange(f"{a} not reduced mod {m}")
        return a

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 0 if self.is_zero_ring else 1

    def add(self, a: int, b: int) -> int:
        return self.reduce(a + b)

    def sub(self, a: int, b: int) -> int:
        return self.reduce(a - b)

    def neg(self, a: int) -> int:
        return self.reduce(-a)

    def mul(self, a: int, b: int) -> int:
        return self.reduce(a * b)

    def eq(self, a: int, b: int) -> bool:
        return self.reduce(a) == self.reduce(b)

    def elements(self, bound: int):
        """Sample of elements: all of Z/n, or |a| <= bound for Z."""
        m = self.modulus
        if m is not None:
            return list(range(m))
        return list(range(-bound, bound + 1))

    # -- norms -----------------------------------------------------------

    def norm(self, a) -> NormValue:
        a = self.check_element(a)
        if self.kind == "IntInf":
            return NormValue.from_fraction(abs(a))
        if self.kind == "ZmodQuot":
            return quotient_norm(self.n, a)
        # trivial-norm variants
        return NV_ZERO if a == 0 else NV_ONE

    # -- serialization -----------------------------------------------------

    def to_json(self):
        out = {"kind": self.kind}
        if self.p is not None:
            out["p"] = self.p
        if self.n is not None:
            out["n"] = self.n
        return out

    @staticmethod
    def from_json(obj) -> "RingDescriptor":
        return RingDescriptor(obj["kind"], p=obj.get("p"), n=obj.get("n"))

    @staticmethod
    def parse(text: str) -> "RingDescriptor":
        """Parse 'IntInf', 'FpTriv(3)', 'ZmodQuot(6)', ..."""
        text = text.strip()
        if "(" in text:
            name, _, rest = text.partition("(")
            arg = int(rest.rstrip(")"))
            if name == "FpTriv":
                return RingDescriptor(name, p=arg)
            if name in ("ZmodTriv", "ZmodQuot"):
                return RingDescriptor(name, n=arg)
            raise UnsupportedRing(f"cannot parse ring {text!r}")
        if text in ("IntInf", "IntTriv"):
            return RingDescriptor(text)
        raise UnsupportedRing(f"cannot parse ring {text!r}")

    def __str__(self):
        m = self.modulus
        return self.kind if m is None else f"{self.kind}({m})"


def int_inf() -> RingDescriptor:
    return RingDescriptor("IntInf")


def int_triv() -> RingDescriptor:
    return RingDescriptor("IntTriv")


def fp_triv(p: int) -> RingDescriptor:
    return RingDescriptor("FpTriv", p=p)


def zmod_triv(n: int) -> RingDescriptor:
    return RingDescriptor("ZmodTriv", n=n)


def zmod_quot(n: int) -> RingDescriptor:
    return RingDescriptor("ZmodQuot", n=n)


def validate_ring(ring: RingDescriptor, sample_bound: int) -> dict:
    """Check the normed-ring laws on all pairs of sampled elements.

    Verifies submultiplicativity, the triangle inequality (strong form when
    the ring is declared non-Archimedean), the norm gap, and norm(a) = 0
    iff a = 0.  Raises ValidationFailure with the first witness pair.
    """
    if sample_bound < 2:
        raise ValueError("sample_bound must be >= 2")
    sample = ring.elements(sample_bound)
    gap = ring.isolation_gap
    for a in sample:
        na = ring.norm(a)
        if (a == ring.zero) != na.is_zero:
            raise ValidationFailure("definiteness", a)
        if a != ring.zero and na < gap:
            raise ValidationFailure("isolation", a)
    for a in sample:
        na = ring.norm(a)
        for b in sample:
            nb = ring.norm(b)
            nprod = ring.norm(ring.mul(a, b))
            if nprod > na * nb:
                raise ValidationFailure("submultiplicativity", (a, b))
            nsum = ring.norm(ring.add(a, b))
            if ring.non_archimedean:
                bigger = na if na >= nb else nb
                if nsum > bigger:
                    raise ValidationFailure("strong triangle", (a, b))
            elif nsum.as_fraction() > na.as_fraction() + nb.as_fraction():
                raise ValidationFailure("triangle", (a, b))
    return {
        "ring": str(ring),
        "sample_bound": sample_bound,
        "pairs_checked": len(sample) ** 2,
        "submultiplicative": True,
        "triangle": "strong" if ring.non_archimedean else "weak",
        "isolation_gap": ring.isolation_gap.to_json(),
        "one_norm": ring.one_norm.to_json(),
    }

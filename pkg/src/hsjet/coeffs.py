"""Exact coefficient rings: QQ, ZZ and prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Coeff = Union[int, Fraction]


class CoefficientError(ValueError):
    """A value cannot be represented in (or mapped into) a coefficient ring."""


class RingMismatch(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class CoefficientRing:
    """One of the three supported exact base rings.

    Elements are plain Python numbers in canonical form: ``Fraction`` for QQ,
    ``int`` for ZZ, and the least non-negative residue (an ``int``) for F_p.
    """

    kind: str  # "QQ", "ZZ" or "Fp"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("QQ", "ZZ", "Fp"):
            raise ValueError(f"unknown coefficient ring kind {self.kind!r}")
        if self.kind == "Fp":
            if not (2 <= self.p < 2**31) or not _is_prime(self.p):
                raise ValueError(f"characteristic must be a prime below 2^31, got {self.p}")
        elif self.p != 0:
            raise ValueError("p is only meaningful for prime fields")

    # construction -------------------------------------------------------
    @classmethod
    def rationals(cls) -> "CoefficientRing":
        return cls("QQ")

    @classmethod
    def integers(cls) -> "CoefficientRing":
        return cls("ZZ")

    @classmethod
    def prime_field(cls, p: int) -> "CoefficientRing":
        return cls("Fp", p)

    @property
    def is_field(self) -> bool:
        return self.kind != "ZZ"

    @property
    def characteristic(self) -> int:
        return self.p

    # element handling ---------------------------------------------------
    def __call__(self, value) -> Coeff:
        """Coerce an int or Fraction into canonical form."""
        if isinstance(value, bool):
            value = int(value)
        if self.kind == "QQ":
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator == 1:
                value = value.numerator
            elif self.kind == "ZZ":
                raise CoefficientError(f"{value} is not an integer")
            else:
                if value.denominator % self.p == 0:
                    raise CoefficientError(f"{value} has a denominator divisible by {self.p}")
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if not isinstance(value, int):
            raise CoefficientError(f"cannot coerce {value!r} into {self}")
        return value % self.p if self.kind == "Fp" else value

    @property
    def zero(self) -> Coeff:
        return self(0)

    @property
    def one(self) -> Coeff:
        return self(1)

    def add(self, a: Coeff, b: Coeff) -> Coeff:
        s = a + b
        return s % self.p if self.kind == "Fp" else s

    def sub(self, a: Coeff, b: Coeff) -> Coeff:
        s = a - b
        return s % self.p if self.kind == "Fp" else s

    def neg(self, a: Coeff) -> Coeff:
        return (-a) % self.p if self.kind == "Fp" else -a

    def mul(self, a: Coeff, b: Coeff) -> Coeff:
        s = a * b
        return s % self.p if self.kind == "Fp" else s

    def inv(self, a: Coeff) -> Coeff:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "QQ":
            return 1 / Fraction(a)
        if self.kind == "Fp":
            return pow(a, -1, self.p)
        if a in (1, -1):
            return a
        raise CoefficientError(f"{a} is not a unit in ZZ")

    def div(self, a: Coeff, b: Coeff) -> Coeff:
        return self.mul(a, self.inv(b))

    def power(self, a: Coeff, e: int) -> Coeff:
        if self.kind == "Fp":
            return pow(a, e, self.p)
        return a**e

    def convert(self, value: Coeff, source: "CoefficientRing") -> Coeff:
        """Image of ``value`` under the canonical map ``source -> self``."""
        if source == self:
            return value
        if source.kind == "Fp":
            raise CoefficientError(f"no canonical map from {source} to {self}")
        if self.kind == "ZZ" and source.kind == "QQ":
            raise CoefficientError(f"no canonical map from {source} to {self}")
        return self(value)

    def format(self, c: Coeff) -> str:
        if isinstance(c, Fraction):
            if c.denominator == 1:
                return str(c.numerator)
            return f"{c.numerator}/{c.denominator}"
        return str(c)

    def __str__(self) -> str:
        return f"F_{self.p}" if self.kind == "Fp" else self.kind


QQ = CoefficientRing.rationals()
ZZ = CoefficientRing.integers()


def GF(p: int) -> CoefficientRing:
    return CoefficientRing.prime_field(p)

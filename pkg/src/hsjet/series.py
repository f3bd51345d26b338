"""Truncated power series R[t]/(t^{m+1}) over a generic coefficient carrier."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence, Tuple


class OrderMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficient list ``coeffs[j]`` of ``t^j`` for ``j = 0..order``.

    Coefficients may be anything closed under ``+``, ``-`` and ``*``
    (Fractions, Polynomials, other series). When ``modulus`` is set the
    coefficients are integers reduced mod that prime after every operation.
    """

    coeffs: Tuple[Any, ...]
    modulus: Optional[int] = None

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")
        if self.modulus is not None:
            object.__setattr__(self, "coeffs", tuple(c % self.modulus for c in self.coeffs))
        else:
            object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def constant(cls, c, order: int, zero=0, modulus: Optional[int] = None) -> "TruncatedSeries":
        return cls((c,) + (zero,) * order, modulus)

    @classmethod
    def of(cls, coeffs: Sequence, modulus: Optional[int] = None) -> "TruncatedSeries":
        return cls(tuple(coeffs), modulus)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, j: int):
        return self.coeffs[j]

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            return False
        if other.order != self.order or other.modulus != self.modulus:
            raise OrderMismatch(f"order {self.order} vs {other.order}")
        return True

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        zero = self.coeffs[0] * 0
        return TruncatedSeries((zero + other,) + (zero,) * self.order, self.modulus)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._lift(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.modulus)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-a for a in self.coeffs), self.modulus)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        n = len(a)
        out = []
        for k in range(n):
            acc = a[0] * b[k]
            for i in range(1, k + 1):
                acc = acc + a[i] * b[k - i]
            out.append(acc)
        return TruncatedSeries(tuple(out), self.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncatedSeries":
        if e < 0:
            raise ValueError("negative exponent")
        result = self._lift(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coeffs):
            s = str(c)
            if j == 0:
                parts.append(s)
            else:
                s = f"({s})" if any(ch in s for ch in "+- ") else s
                parts.append(f"{s}*t" if j == 1 else f"{s}*t^{j}")
        return " + ".join(parts)


def ts_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    if not isinstance(b, TruncatedSeries) or a.order != b.order:
        raise OrderMismatch("series orders differ")
    return a * b


def ts_scale_t(a: TruncatedSeries, z) -> TruncatedSeries:
    """Reparametrize ``t -> z*t``: coefficient j is multiplied by ``z**j``."""
    out = [a.coeffs[0]]
    zj = None
    for c in a.coeffs[1:]:
        zj = z if zj is None else zj * z
        out.append(zj * c)
    return TruncatedSeries(tuple(out), a.modulus)


def ts_eval_at_zero(a: TruncatedSeries):
    return a.coeffs[0]

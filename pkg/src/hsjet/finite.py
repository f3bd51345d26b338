"""Finite rings used as targets for homomorphism enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .coeffs import GF, Coeff, CoefficientRing
from .poly import JetVariable, Polynomial
from .series import TruncatedSeries


@dataclass(frozen=True)
class FiniteRing:
    """``F_p`` (``base is None``) or ``base[t]/(t^{m+1})``.

    Field elements are residues ``0..p-1``; truncated-ring elements are
    :class:`TruncatedSeries`. Enumeration order is canonical: residues
    ascending, series lexicographically by coefficient tuple.
    """

    p: int
    m: int = 0
    base: Optional["FiniteRing"] = None

    @classmethod
    def prime_field(cls, p: int) -> "FiniteRing":
        GF(p)  # validates primality
        return cls(p)

    @classmethod
    def truncated(cls, base, m: int) -> "FiniteRing":
        if isinstance(base, int):
            base = cls.prime_field(base)
        if m < 0:
            raise ValueError("truncation order must be non-negative")
        return cls(base.p, m, base)

    @property
    def is_field(self) -> bool:
        return self.base is None

    @property
    def coefficient_ring(self) -> CoefficientRing:
        return GF(self.p)

    @property
    def size(self) -> int:
        if self.base is None:
            return self.p
        return self.base.size ** (self.m + 1)

    def series_ring(self, m: int) -> "FiniteRing":
        return FiniteRing.truncated(self, m)

    @property
    def _modulus(self) -> Optional[int]:
        return self.p if self.base is not None and self.base.is_field else None

    def make(self, coeffs) -> TruncatedSeries:
        return TruncatedSeries(tuple(coeffs), self._modulus)

    def elements(self) -> Iterator:
        if self.base is None:
            return iter(range(self.p))
        return (self.make(c) for c in itertools.product(list(self.base.elements()), repeat=self.m + 1))

    @property
    def zero(self):
        return self.embed(0)

    @property
    def one(self):
        return self.embed(1)

    def embed(self, c: Coeff, source: Optional[CoefficientRing] = None):
        """Image of a base-ring coefficient under the structure map."""
        if source is not None:
            c = GF(self.p).convert(c, source)
        else:
            c = GF(self.p)(c)
        if self.base is None:
            return c
        return self.make((self.base.embed(c),) + (self.base.zero,) * self.m)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def evaluate(self, f: Polynomial, assignment: Mapping[JetVariable, object]):
        """Evaluate ``f`` at ``assignment``; coefficients go through the structure map."""
        if self.base is None:
            fp = GF(self.p)
            return f.evaluate(assignment, lambda c: fp.convert(c, f.ring)) % self.p
        return f.evaluate(assignment, lambda c: self.embed(c, f.ring))

    def scale_t(self, a, z):
        """``t -> z t`` on an element of a truncated ring (``z`` in the base)."""
        from .series import ts_scale_t

        return ts_scale_t(a, z)

    def __str__(self) -> str:
        if self.base is None:
            return f"F_{self.p}"
        inner = str(self.base)
        return f"{inner}[t]/(t^{self.m + 1})"

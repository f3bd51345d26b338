"""Sparse multivariate polynomials over jet-indexed variables."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Tuple, TypeVar

from .coeffs import QQ, Coeff, CoefficientRing, RingMismatch

T = TypeVar("T")


@dataclass(frozen=True, order=True)
class JetVariable:
    """The symbol ``d<order><name>``; order 0 is the base variable itself.

    Dataclass ordering (name, then order) is the canonical variable enumeration.
    """

    name: str
    order: int = 0

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("jet order must be non-negative")

    @property
    def weight(self) -> int:
        return self.order

    def jet(self, k: int) -> "JetVariable":
        return JetVariable(self.name, k)

    def __str__(self) -> str:
        return self.name if self.order == 0 else f"d{self.order}{self.name}"

    def __repr__(self) -> str:
        return f"JetVariable({str(self)!r})"


@dataclass(frozen=True)
class Monomial:
    """Exponent map stored as a tuple of (variable, exponent) sorted by variable."""

    items: Tuple[Tuple[JetVariable, int], ...] = ()

    @classmethod
    def from_dict(cls, exps: Mapping[JetVariable, int]) -> "Monomial":
        return cls(tuple(sorted((v, e) for v, e in exps.items() if e)))

    @classmethod
    def of(cls, var: JetVariable, e: int = 1) -> "Monomial":
        return cls(((var, e),)) if e else cls()

    def as_dict(self) -> Dict[JetVariable, int]:
        return dict(self.items)

    @property
    def variables(self) -> Tuple[JetVariable, ...]:
        return tuple(v for v, _ in self.items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.items)

    @property
    def weight(self) -> int:
        return sum(e * v.weight for v, e in self.items)

    def exponent(self, var: JetVariable) -> int:
        for v, e in self.items:
            if v == var:
                return e
        return 0

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = dict(self.items)
        for v, e in other.items:
            d[v] = d.get(v, 0) + e
        return Monomial.from_dict(d)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __str__(self) -> str:
        if not self.items:
            return "1"
        return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in self.items)


def _grevlex_key(mon: Monomial, enumeration: Tuple[JetVariable, ...]):
    exps = mon.as_dict()
    return (mon.degree,) + tuple(-exps.get(v, 0) for v in reversed(enumeration))


class Polynomial:
    """An exact polynomial: a map Monomial -> nonzero coefficient over ``ring``.

    Instances are immutable; every operation returns a new polynomial.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Coeff]] = None, ring: CoefficientRing = QQ):
        self.ring = ring
        clean: Dict[Monomial, Coeff] = {}
        for mon, c in (terms or {}).items():
            c = ring(c)
            if c != 0:
                clean[mon] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Coeff], ring: CoefficientRing) -> "Polynomial":
        # terms already canonical and zero-free
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, ring: CoefficientRing = QQ) -> "Polynomial":
        return cls._raw({}, ring)

    @classmethod
    def constant(cls, c, ring: CoefficientRing = QQ) -> "Polynomial":
        return cls({Monomial(): c}, ring)

    @classmethod
    def var(cls, v, ring: CoefficientRing = QQ, order: int = 0) -> "Polynomial":
        if isinstance(v, str):
            v = JetVariable(v, order)
        return cls._raw({Monomial.of(v): ring.one}, ring)

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Coeff]:
        return self._terms

    def items(self) -> Iterator[Tuple[Monomial, Coeff]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_term(self) -> Coeff:
        return self._terms.get(Monomial(), self.ring.zero)

    def coefficient(self, mon: Monomial) -> Coeff:
        return self._terms.get(mon, self.ring.zero)

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v in m.variables)

    @property
    def total_degree(self) -> int:
        return max((m.degree for m in self._terms), default=-1)

    def sorted_terms(self):
        """Terms in canonical order: weighted degree, then graded reverse lex, descending."""
        enum = tuple(sorted(self.variables()))
        return sorted(self._terms.items(), key=lambda mc: (mc[0].weight, _grevlex_key(mc[0], enum)), reverse=True)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.ring)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = ring.add(out.get(m, ring.zero), c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out, ring)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: self.ring.neg(c) for m, c in self._terms.items()}, self.ring)

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        out: Dict[Monomial, Coeff] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                out[m] = ring.add(out.get(m, ring.zero), ring.mul(c1, c2))
        return Polynomial._raw({m: c for m, c in out.items() if c}, ring)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ring(c)
        return Polynomial._raw({m: self.ring.mul(a, c) for m, a in self._terms.items()} if c else {}, self.ring)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.ring)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # evaluation and substitution ----------------------------------------
    def evaluate(self, values: Mapping[JetVariable, T], embed: Callable[[Coeff], T]) -> T:
        """Evaluate in any carrier supporting ``+``, ``*`` and ``**``.

        ``embed`` maps coefficients into the carrier. Variables missing from
        ``values`` raise ``KeyError``.
        """
        total = embed(self.ring.zero)
        cache: Dict[Tuple[JetVariable, int], T] = {}
        for mon, c in self._terms.items():
            term = embed(c)
            for v, e in mon.items:
                key = (v, e)
                if key not in cache:
                    cache[key] = values[v] ** e if e > 1 else values[v]
                term = term * cache[key]
            total = total + term
        return total

    def substitute(self, images: Mapping[JetVariable, "Polynomial"]) -> "Polynomial":
        """Ring homomorphism sending each variable to its image (identity if absent)."""
        ring = self.ring
        values = {}
        for v in self.variables():
            img = images.get(v)
            if img is None:
                img = Polynomial.var(v, ring)
            elif isinstance(img, Polynomial) and img.ring != ring:
                raise RingMismatch(f"image of {v} lives over {img.ring}, not {ring}")
            values[v] = img
        return self.evaluate(values, lambda c: Polynomial.constant(c, ring))

    def diff(self, var: JetVariable) -> "Polynomial":
        """Formal partial derivative."""
        ring = self.ring
        out: Dict[Monomial, Coeff] = {}
        for mon, c in self._terms.items():
            d = mon.as_dict()
            e = d.get(var, 0)
            if not e:
                continue
            d[var] = e - 1
            m = Monomial.from_dict(d)
            out[m] = ring.add(out.get(m, ring.zero), ring.mul(c, ring(e)))
        return Polynomial(out, ring)

    def map_coefficients(self, target: CoefficientRing) -> "Polynomial":
        """Apply the canonical coefficient map ``self.ring -> target``."""
        return Polynomial({m: target.convert(c, self.ring) for m, c in self._terms.items()}, target)

    def weighted_degree_info(self) -> "WeightInfo":
        weights = {m.weight for m in self._terms}
        if not weights:
            return WeightInfo(True, None)
        if len(weights) == 1:
            return WeightInfo(True, weights.pop())
        return WeightInfo(False, None)

    def is_homogeneous_of_weight(self, w: int) -> bool:
        return all(m.weight == w for m in self._terms)

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        from .parser import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, {self.ring})"


@dataclass(frozen=True)
class WeightInfo:
    is_homogeneous: bool
    weight: Optional[int]


def variables_of(polys: Iterable[Polynomial]) -> frozenset:
    out = set()
    for p in polys:
        out |= p.variables()
    return frozenset(out)

"""The universal Hasse-Schmidt prolongation ``d_k`` and higher-derivation checks.

``d_k f`` is the coefficient of ``t^k`` after substituting
``x -> x + d1x*t + ... + dmx*t^m`` for every active variable, with
constants left fixed. The Leibniz rule is then a property to verify, not an
assumption of the implementation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from .finite import FiniteRing
from .poly import JetVariable, Polynomial
from .series import TruncatedSeries
from .verdict import Verdict

if TYPE_CHECKING:
    from .presentation import Presentation


class ProlongationError(ValueError):
    pass


@dataclass(frozen=True)
class ProlongationContext:
    jet_order: int
    active_vars: FrozenSet[str] = frozenset()
    constants: FrozenSet[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "active_vars", frozenset(self.active_vars))
        object.__setattr__(self, "constants", frozenset(self.constants))
        if self.jet_order < 0:
            raise ValueError("jet order must be non-negative")
        clash = self.active_vars & self.constants
        if clash:
            raise ValueError(f"names both active and constant: {sorted(clash)}")

    @classmethod
    def for_polys(cls, m: int, polys: Iterable[Polynomial], constants: Iterable[str] = ()) -> "ProlongationContext":
        constants = frozenset(constants)
        names = {v.name for p in polys for v in p.variables()}
        return cls(m, frozenset(names - constants), constants)


def _arc_values(f: Polynomial, order: int, ctx: ProlongationContext) -> Dict[JetVariable, TruncatedSeries]:
    ring = f.ring
    zero = Polynomial.zero(ring)
    values = {}
    for v in f.variables():
        if v.order != 0:
            raise ProlongationError(f"{v} is a jet variable; prolong expects order-0 input")
        if v.name in ctx.active_vars:
            values[v] = TruncatedSeries(tuple(Polynomial.var(v.jet(j), ring) for j in range(order + 1)))
        elif v.name in ctx.constants:
            values[v] = TruncatedSeries.constant(Polynomial.var(v, ring), order, zero)
        else:
            raise ProlongationError(f"{v} is neither an active variable nor a constant")
    return values


def prolong_series(f: Polynomial, ctx: ProlongationContext, order: int | None = None) -> TruncatedSeries:
    """All prolongations ``(d_0 f, ..., d_order f)`` as one series."""
    order = ctx.jet_order if order is None else order
    ring = f.ring
    zero = Polynomial.zero(ring)
    values = _arc_values(f, order, ctx)
    return f.evaluate(values, lambda c: TruncatedSeries.constant(Polynomial.constant(c, ring), order, zero))


def prolong(f: Polynomial, k: int, ctx: ProlongationContext) -> Polynomial:
    if not 0 <= k <= ctx.jet_order:
        raise ProlongationError(f"k={k} outside 0..{ctx.jet_order}")
    return prolong_series(f, ctx, k)[k]


def prolong_all(f: Polynomial, ctx: ProlongationContext) -> List[Polynomial]:
    return list(prolong_series(f, ctx).coeffs)


def leibniz_check(f: Polynomial, g: Polynomial, k: int, ctx: ProlongationContext) -> Verdict:
    lhs = prolong(f * g, k, ctx)
    df = prolong_all(f, ProlongationContext(k, ctx.active_vars, ctx.constants))
    dg = prolong_all(g, ProlongationContext(k, ctx.active_vars, ctx.constants))
    rhs = Polynomial.zero(f.ring)
    for i in range(k + 1):
        rhs = rhs + df[i] * dg[k - i]
    diff = lhs - rhs
    if diff.is_zero():
        return Verdict(True, f"d{k}(f*g) = sum d_i f * d_j g")
    return Verdict(False, f"Leibniz fails at k={k}", {"difference": diff})


# ---------------------------------------------------------------------------
# higher derivations on finite data


@dataclass(frozen=True)
class HigherDerivation:
    """``(D_0, ..., D_m)`` given by its values on the generators of ``source``.

    ``components[name][i]`` is ``D_i(name)``, an element of ``target``.
    Constants of ``source`` may be given too; they must be killed by ``D_i``
    for ``i >= 1``.
    """

    order: int
    source: "Presentation"
    target: FiniteRing
    components: Mapping[str, Tuple] = field(default_factory=dict)

    def arc(self) -> Dict[str, TruncatedSeries]:
        arc_ring = self.target.series_ring(self.order)
        return {name: arc_ring.make(vals) for name, vals in self.components.items()}

    @classmethod
    def from_arc(cls, source: "Presentation", target: FiniteRing, arc: Mapping[str, TruncatedSeries]) -> "HigherDerivation":
        orders = {s.order for s in arc.values()}
        if len(orders) != 1:
            raise ValueError("arc components must share one truncation order")
        return cls(orders.pop(), source, target, {name: tuple(s.coeffs) for name, s in arc.items()})


def check_higher_derivation(D: HigherDerivation) -> Verdict:
    """Accept iff the arc built from ``D`` is an algebra map into ``target[t]/(t^{m+1})``."""
    P = D.source
    target = D.target
    if target.size > 10**6:
        raise ValueError("target ring too large to enumerate")
    missing = [g for g in P.base_names if g not in D.components]
    if missing:
        return Verdict(False, f"no values given for generators {missing}")
    for name, vals in D.components.items():
        if len(vals) != D.order + 1:
            return Verdict(False, f"{name}: expected {D.order + 1} components, got {len(vals)}")
    for c in P.constants:
        if c in D.components and any(not target.is_zero(v) for v in D.components[c][1:]):
            return Verdict(False, f"constant {c} is not killed by D_i for i >= 1", {"violated": "constants"})
    arc_ring = target.series_ring(D.order)
    arc = D.arc()
    values = {}
    for name in list(P.base_names) + list(P.constants):
        if name in arc:
            values[JetVariable(name)] = arc[name]
        else:
            raise ValueError(f"constant {name} needs a value in the target")
    for rel in P.relations:
        img = arc_ring.evaluate(rel, values)
        if not arc_ring.is_zero(img):
            k = next(i for i, c in enumerate(img.coeffs) if not target.is_zero(c))
            why = "D_0 is not a ring homomorphism" if k == 0 else f"Leibniz rule violated in order {k}"
            return Verdict(False, f"relation {rel} violated: {why} ({img.coeffs[k]} != 0)",
                           {"relation": rel, "order": k, "value": img})
    return Verdict(True, "arc map is an algebra homomorphism")


def derivation_arc_roundtrip(D: HigherDerivation) -> Verdict:
    arc = D.arc()
    back = HigherDerivation.from_arc(D.source, D.target, arc)
    if dict(back.components) != {k: tuple(v) for k, v in D.components.items()}:
        return Verdict(False, "derivation -> arc -> derivation changed the data")
    if back.arc() != arc:
        return Verdict(False, "arc -> derivation -> arc changed the data")
    return Verdict(True, "round trip is the identity")


def enumerate_derivations(P: "Presentation", target: FiniteRing, m: int, budget: int = 10**7) -> List[HigherDerivation]:
    """All higher derivations of order ``m`` from ``P`` into ``target``, by brute force."""
    gens = list(P.base_names)
    choices = list(itertools.product(list(target.elements()), repeat=m + 1))
    if len(choices) ** len(gens) > budget:
        raise ValueError("derivation enumeration exceeds budget")
    out = []
    for combo in itertools.product(choices, repeat=len(gens)):
        D = HigherDerivation(m, P, target, dict(zip(gens, combo)))
        if check_higher_derivation(D):
            out.append(D)
    return out

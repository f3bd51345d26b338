"""Buchberger's algorithm over QQ and F_p: reduced bases, normal forms, membership."""

from __future__ import annotations

import functools
import heapq
import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coeffs import CoefficientError, CoefficientRing, RingMismatch
from .poly import JetVariable, Monomial, Polynomial, variables_of

Exp = Tuple[int, ...]
Dense = Dict[Exp, object]

DEFAULT_MAX_PAIRS = 10**5


class GroebnerTimeout(RuntimeError):
    """The configured pair-count bound was exceeded."""


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order over an explicit variable enumeration (largest first).

    ``kind`` is ``"lex"``, ``"grevlex"`` or ``"elim"``; the last is a block
    order comparing the first ``block`` variables by grevlex before the rest,
    which makes it an elimination order for those variables.
    """

    kind: str = "grevlex"
    variables: Tuple[JetVariable, ...] = ()
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable enumeration has duplicates")

    @classmethod
    def elimination(cls, eliminate: Iterable[JetVariable], keep: Iterable[JetVariable]) -> "MonomialOrder":
        elim = tuple(sorted(set(eliminate)))
        rest = tuple(v for v in sorted(set(keep)) if v not in elim)
        return cls("elim", elim + rest, len(elim))

    def extended(self, extra: Iterable[JetVariable]) -> "MonomialOrder":
        """Same order with unseen variables appended as the smallest ones."""
        new = tuple(v for v in sorted(set(extra)) if v not in set(self.variables))
        if not new:
            return self
        return MonomialOrder(self.kind, self.variables + new, self.block)

    def key(self):
        kind, b = self.kind, self.block
        if kind == "lex":
            return lambda e: e
        if kind == "grevlex":
            return lambda e: (sum(e), tuple(-x for x in reversed(e)))

        def elim_key(e):
            head, tail = e[:b], e[b:]
            return (sum(head), tuple(-x for x in reversed(head)), sum(tail), tuple(-x for x in reversed(tail)))

        return elim_key


def default_order(polys: Iterable[Polynomial], kind: str = "grevlex") -> MonomialOrder:
    return MonomialOrder(kind, tuple(sorted(variables_of(polys))))


# ---------------------------------------------------------------------------
# dense helpers over a fixed enumeration


class _Engine:
    def __init__(self, ring: CoefficientRing, order: MonomialOrder):
        if not ring.is_field:
            raise CoefficientError(f"Groebner bases need field coefficients, got {ring}")
        self.ring = ring
        self.order = order
        self.vars = order.variables
        self.index = {v: i for i, v in enumerate(self.vars)}
        self.key = order.key()
        self.n = len(self.vars)

    def dense(self, f: Polynomial) -> Dense:
        if f.ring != self.ring:
            raise RingMismatch(f"{f.ring} vs {self.ring}")
        out = {}
        for mon, c in f.items():
            e = [0] * self.n
            for v, k in mon.items:
                e[self.index[v]] = k
            out[tuple(e)] = c
        return out

    def sparse(self, d: Dense) -> Polynomial:
        terms = {}
        for e, c in d.items():
            terms[Monomial(tuple((self.vars[i], k) for i, k in enumerate(e) if k))] = c
        return Polynomial(terms, self.ring)

    def lead(self, d: Dense) -> Exp:
        return max(d, key=self.key)

    def monic(self, d: Dense) -> Dense:
        ring = self.ring
        inv = ring.inv(d[self.lead(d)])
        return {e: ring.mul(c, inv) for e, c in d.items()}

    def sub_mul(self, p: Dense, c, shift: Exp, g: Dense) -> None:
        """In place: ``p -= c * x^shift * g``."""
        ring = self.ring
        for e, a in g.items():
            m = tuple(x + y for x, y in zip(e, shift))
            v = ring.sub(p.get(m, ring.zero), ring.mul(c, a))
            if v:
                p[m] = v
            else:
                p.pop(m, None)

    def reduce(self, f: Dense, basis: Sequence[Tuple[Exp, Dense]]) -> Dense:
        """Full reduction of ``f`` by monic ``basis`` given as (lead, poly) pairs."""
        ring = self.ring
        p = dict(f)
        rem: Dense = {}
        key = self.key
        while p:
            lt = max(p, key=key)
            c = p[lt]
            for lm, g in basis:
                if all(a >= b for a, b in zip(lt, lm)):
                    shift = tuple(a - b for a, b in zip(lt, lm))
                    self.sub_mul(p, c, shift, g)
                    break
            else:
                rem[lt] = c
                del p[lt]
        return rem

    def spoly(self, f: Tuple[Exp, Dense], g: Tuple[Exp, Dense]) -> Dense:
        lf, pf = f
        lg, pg = g
        lcm = tuple(max(a, b) for a, b in zip(lf, lg))
        out = {}
        ring = self.ring
        self.sub_mul(out, ring(-1), tuple(a - b for a, b in zip(lcm, lf)), pf)
        self.sub_mul(out, ring.one, tuple(a - b for a, b in zip(lcm, lg)), pg)
        return out


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis: monic, interreduced, sorted by leading monomial (descending)."""

    order: MonomialOrder
    basis: Tuple[Polynomial, ...]
    ring: CoefficientRing

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.basis)

    def leading_monomials(self) -> List[Polynomial]:
        eng = _Engine(self.ring, self.order)
        return [eng.sparse({eng.lead(d): self.ring.one}) for d in map(eng.dense, self.basis)]


def _ring_of(polys: Sequence[Polynomial], ring: Optional[CoefficientRing]) -> CoefficientRing:
    rings = {p.ring for p in polys}
    if ring is not None:
        rings.add(ring)
    if len(rings) > 1:
        raise RingMismatch(f"generators over different rings: {sorted(map(str, rings))}")
    if not rings:
        raise ValueError("cannot infer the coefficient ring of an empty generator list")
    return rings.pop()


def buchberger(
    gens: Sequence[Polynomial],
    order: Optional[MonomialOrder] = None,
    *,
    ring: Optional[CoefficientRing] = None,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    verify: bool = True,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Uses the coprime-leading-monomial criterion only and processes pairs by
    smallest lcm first. Raises :class:`GroebnerTimeout` after ``max_pairs``
    S-polynomials.
    """
    gens = list(gens)
    ring = _ring_of(gens, ring)
    if order is None:
        order = default_order(gens)
    else:
        order = order.extended(variables_of(gens))
    eng = _Engine(ring, order)
    key = eng.key

    G: List[Tuple[Exp, Dense]] = []
    for f in gens:
        d = eng.dense(f)
        if d:
            d = eng.monic(d)
            G.append((eng.lead(d), d))

    heap = []
    counter = itertools.count()

    def push_pairs(j: int):
        lj = G[j][0]
        for i in range(j):
            li = G[i][0]
            lcm = tuple(max(a, b) for a, b in zip(li, lj))
            heapq.heappush(heap, (key(lcm), next(counter), i, j))

    for j in range(len(G)):
        push_pairs(j)

    processed = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        li, lj = G[i][0], G[j][0]
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        processed += 1
        if processed > max_pairs:
            raise GroebnerTimeout(f"more than {max_pairs} S-pairs")
        r = eng.reduce(eng.spoly(G[i], G[j]), G)
        if r:
            r = eng.monic(r)
            G.append((eng.lead(r), r))
            push_pairs(len(G) - 1)

    # minimize
    minimal: List[Tuple[Exp, Dense]] = []
    for idx, (lm, d) in enumerate(G):
        redundant = False
        for jdx, (lm2, _) in enumerate(G):
            if jdx == idx:
                continue
            if all(a >= b for a, b in zip(lm, lm2)) and (lm != lm2 or jdx < idx):
                redundant = True
                break
        if not redundant:
            minimal.append((lm, d))
    # interreduce tails
    reduced = []
    for idx, (lm, d) in enumerate(minimal):
        others = [g for jdx, g in enumerate(minimal) if jdx != idx]
        tail = {e: c for e, c in d.items() if e != lm}
        r = eng.reduce(tail, others)
        r[lm] = d[lm]
        reduced.append((lm, r))
    reduced.sort(key=lambda g: key(g[0]), reverse=True)
    gb = GroebnerBasis(order, tuple(eng.sparse(d) for _, d in reduced), ring)
    if verify:
        bad = buchberger_criterion_violations(gb)
        if bad:  # pragma: no cover - would indicate an engine bug
            raise AssertionError(f"basis fails Buchberger's criterion on pairs {bad}")
    return gb


def buchberger_criterion_violations(gb: GroebnerBasis) -> List[Tuple[int, int]]:
    """Pairs whose S-polynomial does not reduce to zero (empty for a Groebner basis)."""
    eng = _Engine(gb.ring, gb.order)
    G = []
    for g in gb.basis:
        d = eng.dense(g)
        G.append((eng.lead(d), eng.monic(d)))
    bad = []
    for i, j in itertools.combinations(range(len(G)), 2):
        if eng.reduce(eng.spoly(G[i], G[j]), G):
            bad.append((i, j))
    return bad


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    if f.ring != gb.ring:
        raise RingMismatch(f"{f.ring} vs {gb.ring}")
    order = gb.order.extended(f.variables())
    eng = _Engine(gb.ring, order)
    G = []
    for g in gb.basis:
        d = eng.dense(g)
        G.append((eng.lead(d), d))
    return eng.sparse(eng.reduce(eng.dense(f), G))


def _divides_out(f: Polynomial, gens: Sequence[Polynomial]) -> bool:
    """Plain multivariate division by ``gens``; a zero remainder proves membership."""
    order = default_order(list(gens) + [f])
    eng = _Engine(f.ring, order)
    G = []
    for g in gens:
        d = eng.monic(eng.dense(g))
        G.append((eng.lead(d), d))
    return not eng.reduce(eng.dense(f), G)


@functools.lru_cache(maxsize=256)
def _cached_basis(gens: Tuple[Polynomial, ...], order: Optional[MonomialOrder], ring: CoefficientRing,
                  max_pairs: int) -> GroebnerBasis:
    return buchberger(gens, order, ring=ring, max_pairs=max_pairs)


def ideal_membership(f: Polynomial, gens: Sequence[Polynomial], order: Optional[MonomialOrder] = None,
                     max_pairs: int = DEFAULT_MAX_PAIRS) -> bool:
    gens = tuple(g for g in gens if not g.is_zero())
    if f.is_zero():
        return True
    if not gens:
        return False
    if _divides_out(f, gens):
        return True
    gb = _cached_basis(gens, order, f.ring, max_pairs)
    return normal_form(f, gb).is_zero()


def ideal_equal(gens1: Sequence[Polynomial], gens2: Sequence[Polynomial], order: Optional[MonomialOrder] = None, **kw) -> bool:
    """Mutual containment of the two generated ideals."""
    g1 = [g for g in gens1 if not g.is_zero()]
    g2 = [g for g in gens2 if not g.is_zero()]
    if not g1 or not g2:
        return not g1 and not g2
    order = order or default_order(g1 + g2)
    gb1 = _cached_basis(tuple(g1), order, g1[0].ring, kw.get("max_pairs", DEFAULT_MAX_PAIRS))
    gb2 = _cached_basis(tuple(g2), order, g2[0].ring, kw.get("max_pairs", DEFAULT_MAX_PAIRS))
    return all(normal_form(f, gb1).is_zero() for f in g2) and all(normal_form(f, gb2).is_zero() for f in g1)


def eliminate(gens: Sequence[Polynomial], drop: Iterable[JetVariable], **kw) -> List[Polynomial]:
    """Generators of ``(gens)`` intersected with the ring without the ``drop`` variables."""
    drop = set(drop)
    order = MonomialOrder.elimination(drop, variables_of(gens))
    gb = buchberger(gens, order, **kw)
    return [g for g in gb.basis if not (g.variables() & drop)]


def power_ideal(gens: Sequence[Polynomial], m: int) -> List[Polynomial]:
    """All products of ``m`` generators (with repetition), deduplicated in first-seen order."""
    if m < 0:
        raise ValueError("power must be non-negative")
    gens = list(gens)
    if m == 0:
        ring = gens[0].ring if gens else None
        return [Polynomial.constant(1, ring)] if ring else [Polynomial.constant(1)]
    out: List[Polynomial] = []
    seen = set()
    for combo in itertools.combinations_with_replacement(range(len(gens)), m):
        prod = gens[combo[0]]
        for i in combo[1:]:
            prod = prod * gens[i]
        if prod not in seen:
            seen.add(prod)
            out.append(prod)
    return out

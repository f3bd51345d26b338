"""Brute-force ground truth over finite rings.

Enumerates algebra maps into ``F_p`` and ``F_p[t]/(t^{m+1})``, translates
between jet points and arcs, and computes dilation orbits. Enumeration is
depth first over generators in declaration order (constants first), and
each relation is tested as soon as all of its variables are assigned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .coeffs import GF
from .finite import FiniteRing
from .poly import JetVariable, Polynomial
from .presentation import GradedAlgebraMap, Presentation, dilation_map, induced_map, jet_presentation, localize
from .series import TruncatedSeries, ts_scale_t
from .verdict import Verdict

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int, partial: int = 0):
        super().__init__(f"enumeration budget of {budget} candidate assignments exceeded")
        self.budget = budget
        self.partial = partial


@dataclass(frozen=True)
class HomPoint:
    """An algebra map ``presentation -> target`` given on generators (and constants)."""

    presentation: Presentation
    target: FiniteRing
    assignment: Tuple[Tuple[JetVariable, object], ...]

    def __getitem__(self, var: Union[str, JetVariable]):
        if isinstance(var, str):
            var = _lookup(var, self.presentation)
        for v, a in self.assignment:
            if v == var:
                return a
        raise KeyError(var)

    def as_dict(self) -> Dict[JetVariable, object]:
        return dict(self.assignment)

    def values(self) -> Tuple:
        return tuple(a for _, a in self.assignment)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{v}={_fmt(a)}" for v, a in self.assignment) + ")"


def _lookup(name: str, P: Presentation) -> JetVariable:
    for g in _unknowns(P):
        if str(g) == name:
            return g
    raise KeyError(name)


def _fmt(a) -> str:
    if isinstance(a, TruncatedSeries):
        return "[" + ",".join(map(str, a.coeffs)) + "]"
    return str(a)


def _as_ring(R: Union[int, FiniteRing]) -> FiniteRing:
    return FiniteRing.prime_field(R) if isinstance(R, int) else R


def _unknowns(P: Presentation) -> Tuple[JetVariable, ...]:
    return tuple(JetVariable(c) for c in P.constants) + P.generators


def _compile(P: Presentation, R: FiniteRing, order: Sequence[JetVariable]):
    """Relations as (check depth, term list) with coefficients already embedded in R."""
    index = {v: i for i, v in enumerate(order)}
    fp = GF(R.p)
    compiled = []
    for rel in P.relations:
        terms = []
        depth = -1
        for mon, c in rel.items():
            c = fp.convert(c, rel.ring)
            if c == 0:
                continue
            factors = tuple((index[v], e) for v, e in mon.items)
            depth = max([depth] + [i for i, _ in factors])
            terms.append((c, factors))
        compiled.append((depth, terms))
    return compiled


def _evaluate(terms, values, R: FiniteRing):
    if R.is_field:
        total = 0
        for c, factors in terms:
            t = c
            for i, e in factors:
                t *= values[i] ** e
            total += t
        return total % R.p
    total = R.zero
    for c, factors in terms:
        t = R.embed(c)
        for i, e in factors:
            t = t * (values[i] ** e if e > 1 else values[i])
        total = total + t
    return total


def enumerate_homs(P: Presentation, R: Union[int, FiniteRing], budget: int = DEFAULT_BUDGET,
                   constant_values: Optional[Sequence] = None) -> List[HomPoint]:
    """All assignments of the unknowns of ``P`` in ``R`` satisfying every relation.

    ``constant_values`` restricts the values tried for the constants of ``P``
    (default: all of ``R``).
    """
    R = _as_ring(R)
    order = _unknowns(P)
    compiled = _compile(P, R, order)
    zero = R.zero
    by_depth: Dict[int, list] = {}
    for depth, terms in compiled:
        by_depth.setdefault(depth, []).append(terms)
    # relations with no variables
    for terms in by_depth.get(-1, []):
        if _evaluate(terms, [], R) != zero:
            return []
    elements = list(R.elements())
    const_elements = elements if constant_values is None else list(constant_values)
    n_const = len(P.constants)
    n = len(order)
    points: List[HomPoint] = []
    values: List = [None] * n
    spent = 0

    def dfs(d: int):
        nonlocal spent
        if d == n:
            points.append(HomPoint(P, R, tuple(zip(order, values))))
            return
        checks = by_depth.get(d, ())
        for a in (const_elements if d < n_const else elements):
            spent += 1
            if spent > budget:
                raise BudgetExceeded(budget, len(points))
            values[d] = a
            if all(_evaluate(t, values, R) == zero for t in checks):
                dfs(d + 1)
        values[d] = None

    dfs(0)
    return points


def enumerate_arcs(P: Presentation, R: Union[int, FiniteRing], m: int, budget: int = DEFAULT_BUDGET) -> List[HomPoint]:
    """All algebra maps ``P -> R[t]/(t^{m+1})``; constants go to constant series."""
    R = _as_ring(R)
    if not R.is_field:
        raise ValueError("arcs are taken over a prime field")
    S = R.series_ring(m)
    consts = [S.make((a,) + (0,) * m) for a in R.elements()]
    return enumerate_homs(P, S, budget, constant_values=consts)


def count_points(P: Presentation, q: Union[int, FiniteRing], budget: int = DEFAULT_BUDGET) -> int:
    R = _as_ring(q)
    if not R.is_field:
        raise ValueError("point counts are over prime fields")
    return len(enumerate_homs(P, R, budget))


def _base_of(JP: Presentation) -> Presentation:
    if JP.jet_order == 0:
        return JP
    if JP.base is None:
        raise ValueError("jet presentation does not record its base presentation")
    return JP.base


def jet_point_to_arc(p: HomPoint) -> HomPoint:
    """``x -> p(x) + p(d1x) t + ... + p(dmx) t^m``."""
    JP = p.presentation
    m = JP.jet_order
    base = _base_of(JP)
    R = p.target
    arc_ring = R.series_ring(m)
    vals = p.as_dict()
    assignment = []
    for v in _unknowns(base):
        if v.name in base.constants:
            coeffs = (vals[v],) + (R.zero,) * m
        else:
            coeffs = tuple(vals[v.jet(k)] for k in range(m + 1))
        assignment.append((v, arc_ring.make(coeffs)))
    return HomPoint(base, R, tuple(assignment))


def arc_to_jet_point(arc: HomPoint, JP: Optional[Presentation] = None) -> HomPoint:
    """Read off the coefficients of an arc as a point of the jet presentation."""
    P = arc.presentation
    m = arc.target.m
    R = arc.target.base
    JP = JP if JP is not None else jet_presentation(P, m)
    vals = arc.as_dict()
    assignment = []
    for v in _unknowns(JP):
        if v.name in JP.constants:
            assignment.append((v, vals[JetVariable(v.name)][0]))
        else:
            assignment.append((v, vals[JetVariable(v.name)][v.order]))
    return HomPoint(JP, R, tuple(assignment))


def desideratum_check(P: Presentation, R: Union[int, FiniteRing], m: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Jet points of HS^m and arcs ``P -> R[t]/(t^{m+1})`` correspond bijectively."""
    R = _as_ring(R)
    JP = jet_presentation(P, m)
    jets = enumerate_homs(JP, R, budget)
    arcs = enumerate_arcs(P, R, m, budget)
    arc_set = {a.assignment for a in arcs}
    jet_set = {j.assignment for j in jets}
    forward = all(jet_point_to_arc(j).assignment in arc_set for j in jets)
    backward = all(arc_to_jet_point(a, JP).assignment in jet_set for a in arcs)
    round_jet = all(arc_to_jet_point(jet_point_to_arc(j), JP).assignment == j.assignment for j in jets)
    round_arc = all(jet_point_to_arc(arc_to_jet_point(a, JP)).assignment == a.assignment for a in arcs)
    ok = len(jets) == len(arcs) and forward and backward and round_jet and round_arc
    return Verdict(ok, f"{len(jets)} jet points, {len(arcs)} arcs",
                   {"jet_points": len(jets), "arcs": len(arcs), "inverse": round_jet and round_arc})


def truncate_point(p: HomPoint, i: int) -> HomPoint:
    """Image of a jet point under the projection J_j -> J_i (forget orders above i)."""
    JP = p.presentation
    base = _base_of(JP)
    Ji = jet_presentation(base, i)
    vals = p.as_dict()
    return HomPoint(Ji, p.target, tuple((v, vals[v]) for v in _unknowns(Ji)))


def truncation_surjectivity(P: Presentation, i: int, j: int, q: Union[int, FiniteRing],
                            budget: int = DEFAULT_BUDGET) -> Verdict:
    if i > j:
        raise ValueError("need i <= j")
    R = _as_ring(q)
    Ji = enumerate_homs(jet_presentation(P, i), R, budget)
    Jj = enumerate_homs(jet_presentation(P, j), R, budget)
    image = {truncate_point(p, i).assignment for p in Jj}
    missing = [p for p in Ji if p.assignment not in image]
    return Verdict(not missing, f"{len(Ji) - len(missing)}/{len(Ji)} points of J_{i} lift to J_{j}",
                   {"points_i": len(Ji), "points_j": len(Jj), "not_lifted": len(missing),
                    "witnesses": missing[:5]})


@dataclass
class JetMapImage:
    image: List[HomPoint]
    complement: List[HomPoint]
    target_points: int
    routes_agree: bool

    @property
    def surjective(self) -> bool:
        return not self.complement


def jet_map_image(phi: GradedAlgebraMap, m: int, q: Union[int, FiniteRing], budget: int = DEFAULT_BUDGET) -> JetMapImage:
    """Point-level map J_m(Spec B') -> J_m(Spec B) of an algebra map ``phi: B -> B'``.

    Computed by precomposing arcs with ``phi`` and, independently, by
    pulling jet points back along the induced map of jet algebras.
    """
    R = _as_ring(q)
    B, B2 = phi.source, phi.target
    JB, JB2 = jet_presentation(B, m), jet_presentation(B2, m)
    arc_ring = R.series_ring(m)
    hs_phi = induced_map(phi, m)
    sources = enumerate_homs(JB2, R, budget)
    image_pts: Dict[tuple, HomPoint] = {}
    agree = True
    for p in sources:
        arc = jet_point_to_arc(p)
        arc_vals = arc.as_dict()
        composed = tuple((g, arc_ring.evaluate(phi.images[g], arc_vals)) for g in _unknowns(B))
        q_pt = arc_to_jet_point(HomPoint(B, arc_ring, composed), JB)
        pulled = tuple((g, R.evaluate(hs_phi.images[g], p.as_dict())) for g in JB.generators)
        if tuple(v for v in q_pt.assignment if v[0] in set(JB.generators)) != pulled:
            agree = False
        image_pts.setdefault(q_pt.assignment, q_pt)
    targets = enumerate_homs(JB, R, budget)
    complement = [t for t in targets if t.assignment not in image_pts]
    image = [t for t in targets if t.assignment in image_pts]
    return JetMapImage(image, complement, len(targets), agree)


# ---------------------------------------------------------------------------
# dilation on points


def dilate_point(p: HomPoint, z: int) -> HomPoint:
    """``d_j x -> z^j d_j x`` on a point with values in a prime field."""
    R = p.target
    return HomPoint(p.presentation, R, tuple((v, (pow(z, v.weight, R.p) * a) % R.p) for v, a in p.assignment))


def _satisfies(P: Presentation, R: FiniteRing, values: Mapping[JetVariable, object]) -> bool:
    return all(R.is_zero(R.evaluate(r, values)) for r in P.relations)


def dilation_point_checks(P: Presentation, m: int, q: Union[int, FiniteRing], budget: int = DEFAULT_BUDGET) -> List[Verdict]:
    """Dilation on every point of J_m(P)(F_q), through three routes.

    The algebra map pulled back to points, the direct weight formula, and
    reparametrization ``t -> z t`` of the associated arc must all agree.
    """
    R = _as_ring(q)
    JP = jet_presentation(P, m)
    pts = enumerate_homs(JP, R, budget)
    maps = {z: dilation_map(P, m, z) for z in range(R.p)}
    identity_ok = collapse_ok = routes_ok = closed_ok = True
    for p in pts:
        vals = p.as_dict()
        for z in range(R.p):
            via_map = tuple((g, R.evaluate(maps[z].images[g], vals)) for g in JP.generators)
            direct = dilate_point(p, z)
            arc = jet_point_to_arc(p)
            scaled = HomPoint(arc.presentation, arc.target,
                              tuple((v, ts_scale_t(s, z)) for v, s in arc.assignment))
            via_arc = arc_to_jet_point(scaled, JP)
            if not (via_map == tuple((v, a) for v, a in direct.assignment if v in set(JP.generators))
                    and via_arc.assignment == direct.assignment):
                routes_ok = False
            if not _satisfies(JP, R, direct.as_dict()):
                closed_ok = False
            if z == 1 and direct.assignment != p.assignment:
                identity_ok = False
            if z == 0:
                s_pi = tuple((v, a if v.order == 0 else 0) for v, a in p.assignment)
                if direct.assignment != s_pi:
                    collapse_ok = False
    n = len(pts)
    return [
        Verdict(identity_ok, f"z=1 fixes all {n} points"),
        Verdict(collapse_ok, f"z=0 equals zero section after projection on {n} points"),
        Verdict(routes_ok, "algebra map, weight formula and t -> zt agree"),
        Verdict(closed_ok, "dilated points satisfy the jet relations"),
    ]


@dataclass
class Orbit:
    representative: HomPoint
    size: int
    stabilizer: int
    members: List[HomPoint] = field(default_factory=list, repr=False)


@dataclass
class OrbitData:
    orbit_count: int
    orbits: List[Orbit]
    points: int


def gm_orbits(fiber: Presentation, q: Union[int, FiniteRing], budget: int = DEFAULT_BUDGET) -> OrbitData:
    """Orbits of ``F_q^*`` acting by ``v -> z^weight v`` on the nonzero points of a fiber."""
    R = _as_ring(q)
    if not R.is_field:
        raise ValueError("orbits are computed over prime fields")
    if fiber.constants or any(g.weight == 0 for g in fiber.generators):
        raise ValueError("a fiber must have only weight-positive generators")
    pts = [p for p in enumerate_homs(fiber, R, budget) if any(a for a in p.values())]
    units = range(1, R.p)
    seen = set()
    orbits = []
    for p in pts:
        if p.assignment in seen:
            continue
        members = {}
        stab = 0
        for z in units:
            d = dilate_point(p, z)
            if not _satisfies(fiber, R, d.as_dict()):
                raise AssertionError(f"dilation by {z} leaves the fiber at {p}")
            if d.assignment == p.assignment:
                stab += 1
            members.setdefault(d.assignment, d)
        size = len(members)
        assert size * stab == R.p - 1, "orbit-stabilizer mismatch"
        seen.update(members)
        orbits.append(Orbit(p, size, stab, list(members.values())))
    return OrbitData(len(orbits), orbits, len(pts))


# ---------------------------------------------------------------------------
# structural checks at point level


def product_count_check(P1: Presentation, P2: Presentation, m: int, q: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    from .presentation import product_presentation

    prod, _ = product_presentation(P1, P2, m)
    a = count_points(jet_presentation(P1, m), q, budget)
    b = count_points(jet_presentation(P2, m), q, budget)
    c = count_points(jet_presentation(prod, m), q, budget)
    return Verdict(a * b == c, f"{a} * {b} = {c}" if a * b == c else f"{a} * {b} != {c}",
                   {"left": a, "right": b, "product": c})


def localization_count_check(P: Presentation, s: Union[str, Polynomial], m: int, q: int,
                             budget: int = DEFAULT_BUDGET) -> Verdict:
    """Jets of ``P[1/s]`` versus arcs of ``P`` along which ``s`` stays a unit."""
    R = _as_ring(q)
    if isinstance(s, str):
        s = P.parse(s)
    local = count_points(jet_presentation(localize(P, s), m), R, budget)
    arc_ring = R.series_ring(m)
    unit_arcs = 0
    for arc in enumerate_arcs(P, R, m, budget):
        val = arc_ring.evaluate(s, arc.as_dict())
        if val[0] % R.p:
            unit_arcs += 1
    return Verdict(local == unit_arcs, f"{local} jet points of the localization, {unit_arcs} arcs with s invertible",
                   {"localized_jets": local, "unit_arcs": unit_arcs})


def _rank_mod_p(rows: List[List[int]], p: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(a * inv) % p for a in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def jacobian_deficient(P: Presentation, point: Mapping[JetVariable, int], q: int) -> bool:
    """True when the Jacobian of the relations drops rank at ``point`` (not a smooth complete intersection there)."""
    R = _as_ring(q)
    if not P.relations:
        return False
    rows = [[R.evaluate(r.diff(g), point) for g in P.generators] for r in P.relations]
    return _rank_mod_p(rows, R.p) < len(P.relations)

"""Presentations of algebras and their jet algebras, with the structural maps between them."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .coeffs import QQ, ZZ, CoefficientRing
from .groebner import MonomialOrder, eliminate, ideal_equal, ideal_membership
from .parser import _JET_NAME, parse_poly
from .poly import JetVariable, Polynomial, variables_of
from .prolong import ProlongationContext, prolong, prolong_all
from .verdict import Verdict

_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*$")


class PresentationError(ValueError):
    pass


class IllDefinedMap(PresentationError):
    """A relation of the source does not map into the target's relation ideal."""

    def __init__(self, message: str, relation: Polynomial, image: Polynomial):
        super().__init__(message)
        self.relation = relation
        self.image = image


class EmptyScheme(Exception):
    """Signal (not an error): the requested projectivized jet space is empty."""


class NotInPowerIdeal(PresentationError):
    pass


class LeadingFormError(AssertionError):
    pass


@dataclass(frozen=True)
class Presentation:
    """``ring[constants][generators] / (relations)``, optionally a relative tower.

    ``tower`` is the inner presentation B when this presents C over B; the
    generator names of B then appear among ``constants``. Jet presentations
    remember the presentation they were prolonged from in ``base``.
    """

    ring: CoefficientRing
    generators: Tuple[JetVariable, ...]
    relations: Tuple[Polynomial, ...] = ()
    constants: Tuple[str, ...] = ()
    jet_order: int = 0
    tower: Optional["Presentation"] = None
    base: Optional["Presentation"] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        gens = tuple(JetVariable(g) if isinstance(g, str) else g for g in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "constants", tuple(self.constants))
        if len(set(gens)) != len(gens):
            raise PresentationError("duplicate generator")
        names = set(self.base_names) | set(self.constants)
        for n in names:
            if not _IDENT.match(n):
                raise PresentationError(f"invalid identifier {n!r}")
            m = _JET_NAME.match(n)
            if m and m.group(2) in names:
                raise PresentationError(f"{n!r} would be read as a jet variable of {m.group(2)!r}")
        if set(self.base_names) & set(self.constants):
            raise PresentationError("a name is both a generator and a constant")
        allowed = set(gens) | {JetVariable(c) for c in self.constants}
        for r in self.relations:
            if r.ring != self.ring:
                raise PresentationError(f"relation {r} is over {r.ring}, not {self.ring}")
            extra = r.variables() - allowed
            if extra:
                raise PresentationError(f"relation {r} uses undeclared {sorted(map(str, extra))}")

    # construction -------------------------------------------------------
    @classmethod
    def from_strings(
        cls,
        ring: CoefficientRing,
        variables: Sequence[str],
        relations: Sequence[str] = (),
        constants: Sequence[str] = (),
        tower: Optional["Presentation"] = None,
    ) -> "Presentation":
        declared = set(variables) | set(constants)
        rels = tuple(parse_poly(r, declared, ring) for r in relations)
        return cls(ring, tuple(JetVariable(v) for v in variables), rels, tuple(constants), 0, tower)

    # inspection ---------------------------------------------------------
    @property
    def base_names(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for g in self.generators:
            seen.setdefault(g.name, None)
        return tuple(seen)

    @property
    def declared(self) -> frozenset:
        return frozenset(self.base_names) | frozenset(self.constants)

    def parse(self, text: str) -> Polynomial:
        return parse_poly(text, self.declared, self.ring)

    def var(self, name: str, order: int = 0) -> Polynomial:
        return Polynomial.var(JetVariable(name, order), self.ring)

    def field_ring(self) -> CoefficientRing:
        """Coefficient field used for ideal computations (ZZ is widened to QQ)."""
        return QQ if self.ring == ZZ else self.ring

    def field_relations(self) -> List[Polynomial]:
        fr = self.field_ring()
        return [r.map_coefficients(fr) for r in self.relations]

    def contains(self, f: Polynomial) -> bool:
        """Is ``f`` in the relation ideal (over the coefficient field)?"""
        fr = self.field_ring()
        return ideal_membership(f.map_coefficients(fr), self.field_relations())

    def map_coefficients(self, target: CoefficientRing) -> "Presentation":
        tower = self.tower.map_coefficients(target) if self.tower else None
        base = self.base.map_coefficients(target) if self.base else None
        return Presentation(target, self.generators, tuple(r.map_coefficients(target) for r in self.relations),
                            self.constants, self.jet_order, tower, base)

    def with_relations(self, relations: Iterable[Polynomial]) -> "Presentation":
        return replace(self, relations=tuple(relations))

    def __str__(self) -> str:
        gens = ", ".join(f"{g}[w={g.weight}]" for g in self.generators)
        head = f"{self.ring}"
        if self.constants:
            head += "[" + ", ".join(self.constants) + "]"
        rels = "\n".join(f"  {r}" for r in self.relations) or "  (none)"
        return f"{head}[{gens}]\nrelations:\n{rels}"


def flatten(P: Presentation) -> Presentation:
    """Present a tower C/B/A directly over A."""
    if P.tower is None:
        return P
    B = flatten(P.tower)
    bnames = set(B.base_names) | set(B.constants)
    stray = set(P.constants) - bnames
    if stray:
        raise PresentationError(f"constants {sorted(stray)} are not generators of the inner presentation")
    clash = set(B.base_names) & set(P.base_names)
    if clash:
        raise PresentationError(f"generator names clash across the tower: {sorted(clash)}")
    return Presentation(P.ring, B.generators + P.generators, B.relations + P.relations, B.constants, P.jet_order)


def _ensure_base(P: Presentation):
    if P.jet_order != 0 or any(g.order for g in P.generators):
        raise PresentationError("expected a base presentation (jet order 0)")


def _jet_relations(P: Presentation, m: int, ctx: ProlongationContext) -> List[Polynomial]:
    out = []
    for f in P.relations:
        for g in prolong_all(f, ctx):
            if not g.is_zero():
                out.append(g)
    return out


def _jet_generators(P: Presentation, m: int) -> Tuple[JetVariable, ...]:
    # ordered by jet order first so enumeration can prune relation by relation
    return tuple(g.jet(k) for k in range(m + 1) for g in P.generators)


def jet_presentation(P: Presentation, m: int) -> Presentation:
    """Presentation of HS^m: generators ``d_k x`` and relations ``d_k f`` for every relation ``f``."""
    if m < 0:
        raise PresentationError("jet order must be non-negative")
    _ensure_base(P)
    if m == 0:
        return P
    ctx = ProlongationContext(m, frozenset(P.base_names), frozenset(P.constants))
    return Presentation(P.ring, _jet_generators(P, m), tuple(_jet_relations(P, m, ctx)), P.constants, m, P.tower, P)


def relative_jet_presentation(C: Presentation, m: int) -> Presentation:
    """HS^m_{C/B}: as :func:`jet_presentation` with the inner generators held constant.

    Relations of the inner presentation B are carried along unchanged (their
    positive-weight prolongations vanish).
    """
    if C.tower is None:
        return jet_presentation(C, m)
    B = flatten(C.tower)
    clash = set(B.base_names) & set(C.base_names)
    if clash:
        raise PresentationError(f"names shared by B and C generators: {sorted(clash)}")
    J = jet_presentation(C, m)
    return replace(J, relations=B.relations + J.relations)


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class GradedAlgebraMap:
    """Algebra map given by generator images; certified well defined on construction."""

    source: Presentation
    target: Presentation
    images: Mapping[JetVariable, Polynomial]
    weight_rule: str = "weight-preserving"

    def __post_init__(self):
        missing = [g for g in self.source.generators if g not in self.images]
        if missing:
            raise PresentationError(f"no image for {', '.join(map(str, missing))}")

    def apply(self, f: Polynomial) -> Polynomial:
        return f.substitute(self.images)

    def image(self, g: Union[str, JetVariable]) -> Polynomial:
        if isinstance(g, str):
            g = JetVariable(g)
        return self.images[g]

    def certify(self) -> "GradedAlgebraMap":
        """Raise :class:`IllDefinedMap` unless every source relation lands in the target ideal."""
        fr = self.target.field_ring()
        tgt = self.target.field_relations()
        for rel in self.source.relations:
            img = self.apply(rel)
            if img.is_zero():
                continue
            if not ideal_membership(img.map_coefficients(fr), tgt):
                raise IllDefinedMap(f"relation {rel} maps to {img}, outside the target ideal", rel, img)
        return self

    def then(self, other: "GradedAlgebraMap") -> "GradedAlgebraMap":
        """``other`` after ``self``."""
        images = {g: other.apply(img) for g, img in self.images.items()}
        return GradedAlgebraMap(self.source, other.target, images, self.weight_rule)

    def same_on_generators(self, other: "GradedAlgebraMap") -> bool:
        return all(self.images[g] == other.images.get(g) for g in self.source.generators)

    def __str__(self) -> str:
        return "\n".join(f"{g} -> {self.images[g]}" for g in self.source.generators)


def algebra_map(source: Presentation, target: Presentation, images: Mapping[str, Union[str, Polynomial]],
                certify: bool = True) -> GradedAlgebraMap:
    """Build a map from generator-name images; strings are parsed in the target's names."""
    parsed = {}
    for g in source.generators:
        key = str(g)
        if key not in images:
            raise PresentationError(f"no image for generator {key}")
        img = images[key]
        parsed[g] = target.parse(img) if isinstance(img, str) else img
    extra = set(images) - {str(g) for g in source.generators}
    if extra:
        raise PresentationError(f"images given for non-generators {sorted(extra)}")
    f = GradedAlgebraMap(source, target, parsed, "algebra map")
    return f.certify() if certify else f


def identity_map(P: Presentation) -> GradedAlgebraMap:
    return GradedAlgebraMap(P, P, {g: Polynomial.var(g, P.ring) for g in P.generators}, "identity")


def truncation_map(P: Presentation, i: int, j: int) -> GradedAlgebraMap:
    """f_ij : HS^i -> HS^j, ``d_k x -> d_k x``."""
    if i > j:
        raise PresentationError(f"truncation needs i <= j, got {i} > {j}")
    src, tgt = jet_presentation(P, i), jet_presentation(P, j)
    f = GradedAlgebraMap(src, tgt, {g: Polynomial.var(g, P.ring) for g in src.generators}, f"f_{i}{j}")
    return f.certify()


def zero_section_map(P: Presentation, m: int) -> GradedAlgebraMap:
    """HS^m -> B killing every positive-weight generator."""
    JP = jet_presentation(P, m)
    images = {g: (Polynomial.var(g, P.ring) if g.order == 0 else Polynomial.zero(P.ring)) for g in JP.generators}
    s = GradedAlgebraMap(JP, P, images, "zero section").certify()
    back = truncation_map(P, 0, m).then(s)
    assert back.same_on_generators(identity_map(P)), "zero section is not a section of f_0m"
    return s


def _as_poly(z, ring: CoefficientRing) -> Polynomial:
    if isinstance(z, Polynomial):
        return z
    if isinstance(z, str):
        return Polynomial.var(JetVariable(z), ring)
    return Polynomial.constant(z, ring)


def dilation_map(P: Presentation, m: int, z) -> GradedAlgebraMap:
    """``d_j x -> z^j d_j x``; ``z`` is a coefficient, a polynomial, or a formal symbol name."""
    JP = jet_presentation(P, m)
    zp = _as_poly(z, P.ring)
    symbols = tuple(sorted(v.name for v in zp.variables() if v.name not in JP.declared))
    for s in symbols:
        hit = _JET_NAME.match(s)
        if hit and hit.group(2) in JP.declared:
            raise PresentationError(f"symbol {s} clashes with a jet variable")
    target = replace(JP, constants=JP.constants + symbols) if symbols else JP
    images = {g: zp ** g.order * Polynomial.var(g, P.ring) for g in JP.generators}
    phi = GradedAlgebraMap(JP, target, images, "weight w -> z^w").certify()
    if zp == 1:
        assert phi.same_on_generators(identity_map(JP)), "dilation by 1 is not the identity"
    if zp.is_zero():
        collapse = zero_section_map(P, m).then(truncation_map(P, 0, m))
        assert phi.same_on_generators(collapse), "dilation by 0 differs from inclusion after zero section"
    return phi


def induced_map(phi: GradedAlgebraMap, m: int) -> GradedAlgebraMap:
    """HS^m_phi : ``d_k x -> d_k phi(x)``."""
    B, B2 = phi.source, phi.target
    _ensure_base(B)
    _ensure_base(B2)
    phi.certify()
    ctx = ProlongationContext(m, frozenset(B2.base_names), frozenset(B2.constants))
    src, tgt = jet_presentation(B, m), jet_presentation(B2, m)
    images = {}
    for g in B.generators:
        ds = prolong_all(phi.images[g], ctx)
        for k in range(m + 1):
            images[g.jet(k)] = ds[k]
    return GradedAlgebraMap(src, tgt, images, f"HS^{m} of algebra map").certify()


def truncation_system_check(P: Presentation, i: int, j: int, k: int) -> Verdict:
    fik = truncation_map(P, i, k)
    fjk_fij = truncation_map(P, i, j).then(truncation_map(P, j, k))
    ok = fik.same_on_generators(fjk_fij)
    ok_id = truncation_map(P, i, i).same_on_generators(identity_map(jet_presentation(P, i)))
    return Verdict(ok and ok_id, f"f_{i}{k} = f_{j}{k} o f_{i}{j}, f_{i}{i} = id")


def dilation_checks(P: Presentation, m: int, z: str = "z", w: str = "w") -> List[Verdict]:
    """Algebra-level dilation properties: identity at 1, collapse at 0, group law, truncation compatibility."""
    out = []
    one = dilation_map(P, m, 1)
    out.append(Verdict(one.same_on_generators(identity_map(jet_presentation(P, m))), "dilation(1) = id"))
    zero = dilation_map(P, m, 0)
    collapse = zero_section_map(P, m).then(truncation_map(P, 0, m))
    out.append(Verdict(zero.same_on_generators(collapse), "dilation(0) = f_0m o s_m"))
    dz, dw = dilation_map(P, m, z), dilation_map(P, m, w)
    zw = Polynomial.var(z, P.ring) * Polynomial.var(w, P.ring)
    dzw = dilation_map(P, m, zw)
    comp = {g: dz.apply(img) for g, img in dw.images.items()}
    out.append(Verdict(all(comp[g] == dzw.images[g] for g in comp), "dilation(z) o dilation(w) = dilation(zw)"))
    ok = True
    for i in range(m + 1):
        left = truncation_map(P, i, m).then(dilation_map(P, m, z))
        right = dilation_map(P, i, z)
        ok &= all(left.images[g] == right.images[g] for g in right.source.generators)
    out.append(Verdict(ok, "dilation commutes with truncation maps"))
    return out


# ---------------------------------------------------------------------------
# constructions


def _rename(P: Presentation, taken: set, suffix: str = "_2") -> Presentation:
    mapping = {}
    for n in list(P.base_names) + list(P.constants):
        new = n
        while new in taken:
            new += suffix
        mapping[n] = new
    if all(k == v for k, v in mapping.items()):
        return P
    images = {JetVariable(k): Polynomial.var(JetVariable(v), P.ring) for k, v in mapping.items()}
    return Presentation(P.ring, tuple(JetVariable(mapping[g.name], g.order) for g in P.generators),
                        tuple(r.substitute(images) for r in P.relations),
                        tuple(mapping[c] for c in P.constants), P.jet_order)


def product_presentation(P1: Presentation, P2: Presentation, m: int) -> Tuple[Presentation, Verdict]:
    """Tensor product over the base; verdict compares its jets with the union of the factors' jets."""
    _ensure_base(P1)
    _ensure_base(P2)
    if P1.ring != P2.ring:
        raise PresentationError("factors over different coefficient rings")
    P2 = _rename(P2, set(P1.base_names) | set(P1.constants))
    prod = Presentation(P1.ring, P1.generators + P2.generators, P1.relations + P2.relations, P1.constants + P2.constants)
    J, J1, J2 = jet_presentation(prod, m), jet_presentation(P1, m), jet_presentation(P2, m)
    same = set(J.generators) == set(J1.generators) | set(J2.generators) and \
        list(J.relations) == list(J1.relations) + list(J2.relations)
    return prod, Verdict(same, "jets of the product are the union of the jets of the factors")


def localize(P: Presentation, s: Union[Polynomial, str], name: str = "u") -> Presentation:
    """``P[name] / (s*name - 1)``."""
    _ensure_base(P)
    if name in P.declared:
        raise PresentationError(f"name {name!r} already in use")
    if isinstance(s, str):
        s = P.parse(s)
    u = Polynomial.var(JetVariable(name), P.ring)
    return Presentation(P.ring, P.generators + (JetVariable(name),), P.relations + (s * u - 1,), P.constants)


def fiber_presentation(JP: Presentation, point: Mapping[str, object]) -> Presentation:
    """Substitute field values for the order-0 generators; keep the weight-positive part."""
    base = [g for g in JP.generators if g.order == 0]
    missing = [str(g) for g in base if g.name not in point]
    if missing:
        raise PresentationError(f"point gives no value for {missing}")
    ring = JP.ring
    images = {g: Polynomial.constant(ring(Fraction(point[g.name])), ring) for g in base}
    rels = []
    for r in JP.relations:
        img = r.substitute(images)
        if img.is_zero():
            continue
        if img.is_constant():
            raise PresentationError(f"point violates relation {r} (value {img})")
        rels.append(img)
    gens = tuple(g for g in JP.generators if g.order > 0)
    return Presentation(ring, gens, tuple(rels), JP.constants, JP.jet_order)


def first_sequence_check(C: Presentation, m: int) -> Verdict:
    """Kernel of HS^m_{C/A} -> HS^m_{C/B} versus the ideal generated by positive-weight ``d_i b``.

    The kernel is computed independently by elimination from the graph of the
    map; both ideals live in the polynomial carrier of HS^m_{C/A}.
    """
    flat = flatten(C)
    B = flatten(C.tower) if C.tower is not None else None
    fr = C.field_ring()
    JA = [r.map_coefficients(fr) for r in jet_presentation(flat, m).relations]
    JB = [r.map_coefficients(fr) for r in relative_jet_presentation(C, m).relations]
    bnames = list(B.base_names) if B else []
    ctx = ProlongationContext(m, frozenset(flat.base_names), frozenset(flat.constants))
    lifted = [prolong(Polynomial.var(b, fr), i, ctx) for b in bnames for i in range(1, m + 1)]
    claimed = JA + lifted

    carrier = set(jet_presentation(flat, m).generators) | {JetVariable(c) for c in flat.constants}
    killed = {JetVariable(b, i) for b in bnames for i in range(1, m + 1)}
    used = {v.name for v in carrier}
    suffix = "_img"
    while any(n + suffix in used for n in used):
        suffix += "_"
    ren = {v: JetVariable(v.name + suffix, v.order) for v in carrier if v not in killed}
    ren_polys = {v: Polynomial.var(w, fr) for v, w in ren.items()}
    graph = [r.substitute(ren_polys) for r in JB]
    graph += [Polynomial.var(v, fr) - ren_polys[v] for v in sorted(ren)]
    graph += [Polynomial.var(v, fr) for v in sorted(killed)]
    kernel = eliminate(graph, ren.values())
    equal = ideal_equal(kernel, claimed) if (kernel or claimed) else True
    return Verdict(equal, "kernel of HS_{C/A} -> HS_{C/B} equals (HS_{B/A})^+ HS_{C/A}",
                   {"kernel": kernel, "claimed": claimed})


def base_change_check(P: Presentation, p: int, m: int) -> Verdict:
    """Jets then reduce mod p versus reduce mod p then jets, relation by relation."""
    from .coeffs import GF

    Fp = GF(p)
    a = [r.map_coefficients(Fp) for r in jet_presentation(P, m).relations]
    a = [r for r in a if not r.is_zero()]
    b = list(jet_presentation(P.map_coefficients(Fp), m).relations) if m else \
        [r for r in P.map_coefficients(Fp).relations if not r.is_zero()]
    return Verdict(a == b, f"jet and reduction mod {p} commute", {"jet_then_reduce": a, "reduce_then_jet": b})


def gg_line_sheaf_degree(m: int) -> int:
    """Least d such that O(d) on the projectivized jet bundle of order m is a line sheaf."""
    if m == 0:
        raise EmptyScheme("the projectivized jet bundle of order 0 is empty")
    if m < 0:
        raise ValueError("m must be positive")
    return math.lcm(*range(1, m + 1))


def leading_form_restriction(b: Polynomial, E_vars: Sequence[str], m: int, P: Optional[Presentation] = None) -> Polynomial:
    """``(d_m b)`` restricted to ``E = {x = 0 : x in E_vars}`` for ``b`` in ``(E_vars)^m``."""
    if P is not None and P.relations:
        raise PresentationError("leading forms are only defined here on a polynomial chart")
    ring = b.ring
    fr = QQ if ring == ZZ else ring
    E = [JetVariable(x) for x in E_vars]
    gens = [Polynomial.var(x, fr) for x in E]
    from .groebner import power_ideal

    if not ideal_membership(b.map_coefficients(fr), power_ideal(gens, m)):
        raise NotInPowerIdeal(f"{b} does not vanish to order {m} along {list(E_vars)}")
    names = {v.name for v in b.variables()} | set(E_vars)
    consts = set(P.constants) if P is not None else set()
    ctx = ProlongationContext(m, frozenset(names - consts), frozenset(consts))
    db = prolong(b, m, ctx)
    survivor = db.substitute({x: Polynomial.zero(ring) for x in E})
    Eset = set(E_vars)
    for mon, _ in survivor.items():
        e_deg = 0
        for v, e in mon.items:
            if v.name in Eset:
                if v.order != 1:
                    raise LeadingFormError(f"term {mon} keeps {v} after restriction")
                e_deg += e
            elif v.order != 0:
                raise LeadingFormError(f"term {mon} keeps differentiated coefficient {v}")
        if e_deg != m:
            raise LeadingFormError(f"term {mon} has degree {e_deg} != {m} in the differentials")
    return survivor

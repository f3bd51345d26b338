"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 unreadable input,
3 semantic error, 4 enumeration or Groebner budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .arcs import (
    BudgetExceeded,
    count_points,
    desideratum_check,
    dilation_point_checks,
    enumerate_homs,
    gm_orbits,
    jacobian_deficient,
    jet_map_image,
    localization_count_check,
    product_count_check,
    truncation_surjectivity,
)
from .coeffs import QQ, CoefficientError, RingMismatch
from .fileformat import FileFormatError, load_presentation, presentation_to_dict
from .groebner import GroebnerTimeout
from .parser import ParseError
from .poly import JetVariable
from .presentation import (
    EmptyScheme,
    Presentation,
    PresentationError,
    algebra_map,
    base_change_check,
    dilation_checks,
    fiber_presentation,
    first_sequence_check,
    identity_map,
    induced_map,
    jet_presentation,
    leading_form_restriction,
    localize,
    product_presentation,
    truncation_system_check,
)
from .prolong import ProlongationContext, ProlongationError, leibniz_check
from .sampling import random_poly
from .verdict import Verdict

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SEMANTIC, EXIT_BUDGET = 0, 1, 2, 3, 4

CHECKS = ("leibniz", "desideratum", "product", "localization", "base-change",
          "first-sequence", "dilation", "functoriality", "truncation")


class UsageError(ValueError):
    pass


@dataclass
class Report:
    data: Dict[str, Any] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)
    status: int = EXIT_OK

    def add(self, label: str, verdict: Verdict, expected_failure: bool = False) -> None:
        if verdict.ok:
            tag = "PASS"
        elif expected_failure:
            tag = "EXPECTED"
        else:
            tag = "FAIL"
            self.status = EXIT_FAIL
        self.lines.append(f"{tag} {label}: {verdict.detail}")
        self.data.setdefault("checks", []).append({"check": label, "status": tag, "detail": verdict.detail})


def _presentation_data(P: Presentation) -> Dict[str, Any]:
    return {
        "ring": str(P.ring),
        "jet_order": P.jet_order,
        "constants": list(P.constants),
        "generators": [{"name": str(g), "weight": g.weight} for g in P.generators],
        "relations": [str(r) for r in P.relations],
    }


def _require(value, name: str):
    if value is None:
        raise UsageError(f"--{name} is required for this command")
    return value


def _parse_point(text: str) -> Dict[str, str]:
    point = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"malformed point coordinate {part!r} (expected name=value)")
        k, v = part.split("=", 1)
        point[k.strip()] = v.strip()
    return point


def _parse_map(text: str) -> Dict[str, str]:
    images = {}
    for part in text.replace(";", ",").split(","):
        if not part.strip():
            continue
        if "->" not in part:
            raise UsageError(f"malformed map image {part!r} (expected 'x -> expr')")
        k, v = part.split("->", 1)
        images[k.strip()] = v.strip()
    return images


# commands -------------------------------------------------------------------


def cmd_jet(args) -> Report:
    P = load_presentation(args.file)
    J = jet_presentation(P, args.m)
    rep = Report({"command": "jet", "m": args.m, "presentation": _presentation_data(J)})
    rep.lines.append(f"HS^{args.m} over {J.ring}")
    rep.lines.append("generators: " + ", ".join(f"{g} (weight {g.weight})" for g in J.generators))
    rep.lines.append(f"relations ({len(J.relations)}):")
    rep.lines.extend(f"  {r}" for r in J.relations)
    return rep


def _fiber_of(P: Presentation, m: int, fiber: Optional[str]) -> Presentation:
    J = jet_presentation(P, m)
    if fiber is None:
        return J
    return fiber_presentation(J, _parse_point(fiber))


def cmd_count(args) -> Report:
    P = load_presentation(args.file)
    q = _require(args.q, "q")
    m = args.m if args.m is not None else 0
    target = _fiber_of(P, m, args.fiber)
    n = count_points(target, q, args.budget)
    rep = Report({"command": "count", "q": q, "m": m, "fiber": args.fiber, "count": n})
    where = f" fiber over {args.fiber}" if args.fiber else ""
    rep.lines.append(f"points of J_{m}{where} over F_{q}: {n}")
    return rep


def cmd_fiber(args) -> Report:
    P = load_presentation(args.file)
    m = args.m if args.m is not None else 1
    F = _fiber_of(P, m, _require(args.fiber, "fiber"))
    rep = Report({"command": "fiber", "m": m, "fiber": args.fiber, "presentation": _presentation_data(F)})
    rep.lines.append(f"fiber of J_{m} over {args.fiber}")
    rep.lines.append("generators: " + ", ".join(str(g) for g in F.generators))
    rep.lines.append(f"relations ({len(F.relations)}):")
    rep.lines.extend(f"  {r}" for r in F.relations)
    if args.q is not None:
        n = count_points(F, args.q, args.budget)
        rep.data["count"] = n
        rep.data["q"] = args.q
        rep.lines.append(f"points over F_{args.q}: {n}")
    return rep


def cmd_orbits(args) -> Report:
    P = load_presentation(args.file)
    q = _require(args.q, "q")
    m = args.m if args.m is not None else 1
    F = _fiber_of(P, m, _require(args.fiber, "fiber"))
    od = gm_orbits(F, q, args.budget)
    orbits = [{"representative": {str(v): a for v, a in o.representative.assignment},
               "size": o.size, "stabilizer": o.stabilizer} for o in od.orbits]
    rep = Report({"command": "orbits", "q": q, "m": m, "fiber": args.fiber,
                  "nonzero_points": od.points, "orbit_count": od.orbit_count, "orbits": orbits})
    rep.lines.append(f"{od.points} nonzero fiber points, {od.orbit_count} orbit(s) under F_{q}^*")
    for o in od.orbits:
        rep.lines.append(f"  {o.representative}  size {o.size}  stabilizer {o.stabilizer}")
    return rep


def _load_map(args, P: Presentation):
    target = load_presentation(args.target) if getattr(args, "target", None) else P
    return algebra_map(P, target, _parse_map(_require(args.map, "map")))


def cmd_induced(args) -> Report:
    P = load_presentation(args.file)
    m = args.m if args.m is not None else 1
    phi = _load_map(args, P)
    hs = induced_map(phi, m)
    rep = Report({"command": "induced", "m": m,
                  "images": {str(g): str(hs.images[g]) for g in hs.source.generators}})
    rep.lines.append(f"HS^{m} of the map:")
    rep.lines.extend(f"  {g} -> {hs.images[g]}" for g in hs.source.generators)
    if args.q is not None:
        res = jet_map_image(phi, m, args.q, args.budget)
        rep.data.update({"q": args.q, "target_points": res.target_points, "image_size": len(res.image),
                         "surjective": res.surjective, "routes_agree": res.routes_agree,
                         "not_in_image": [{str(v): a for v, a in p.assignment} for p in res.complement[:10]]})
        rep.lines.append(f"image: {len(res.image)}/{res.target_points} points of the target jet space over F_{args.q}")
        for p in res.complement[:10]:
            rep.lines.append(f"  not in image: {p}")
        if not res.routes_agree:
            rep.status = EXIT_FAIL
            rep.lines.append("FAIL arc composition and induced map disagree")
    return rep


def cmd_leading_form(args) -> Report:
    P = load_presentation(args.file)
    m = _require(args.m, "m")
    E = [e.strip() for e in _require(args.E, "E").split(",") if e.strip()]
    b = P.parse(_require(args.b, "b"))
    lf = leading_form_restriction(b, E, m, P)
    rep = Report({"command": "leading-form", "b": str(b), "E": E, "m": m, "leading_form": str(lf)})
    rep.lines.append(str(lf))
    return rep


# verify -------------------------------------------------------------------


def _verify_leibniz(P, args, rep):
    rng = random.Random(args.seed)
    names = list(P.base_names)
    if not names:
        raise UsageError("leibniz needs at least one generator")
    ctx = ProlongationContext(4, frozenset(names), frozenset(P.constants))
    pool = names + list(P.constants)
    passed = 0
    for _ in range(args.count):
        f = random_poly(rng, pool, P.ring)
        g = random_poly(rng, pool, P.ring)
        k = rng.randint(0, 4)
        if leibniz_check(f, g, k, ctx):
            passed += 1
    rep.data.update({"cases_passed": passed, "cases": args.count, "seed": args.seed})
    rep.add("leibniz", Verdict(passed == args.count, f"{passed}/{args.count}"))


def _verify_truncation(P, args, rep):
    i = args.i if args.i is not None else 1
    j = args.j if args.j is not None else 2
    rep.add("direct system", truncation_system_check(P, 0, i, j))
    if args.q is None:
        return
    v = truncation_surjectivity(P, i, j, args.q, args.budget)
    witnesses = v.data.pop("witnesses")
    expected = bool(witnesses) and all(
        jacobian_deficient(P, {g: w[g] for g in P.generators}, args.q) for w in witnesses)
    rep.data.update(v.data)
    rep.data["witnesses"] = [{str(var): a for var, a in w.assignment} for w in witnesses]
    label = f"pi_{j}{i} surjective over F_{args.q}"
    if expected:
        v.detail += "; non-liftable points lie over singular points (expected)"
    rep.add(label, v, expected_failure=expected)
    rep.lines.extend(f"  witness: {w}" for w in witnesses)


def cmd_verify(args) -> Report:
    P = load_presentation(args.file)
    rep = Report({"command": "verify", "check": args.check})
    m = args.m if args.m is not None else 1
    check = args.check
    if check == "leibniz":
        _verify_leibniz(P, args, rep)
    elif check == "desideratum":
        v = desideratum_check(P, _require(args.q, "q"), m, args.budget)
        rep.data.update(v.data)
        rep.add(f"jet desideratum m={m} q={args.q}", v)
    elif check == "product":
        other = load_presentation(args.other) if args.other else P
        prod, v = product_presentation(P, other, m)
        rep.add("jets of product = product of jets", v)
        if args.q is not None:
            c = product_count_check(P, other, m, args.q, args.budget)
            rep.data.update(c.data)
            rep.add(f"point counts multiply over F_{args.q}", c)
    elif check == "localization":
        s = P.parse(args.s) if args.s else P.var(P.base_names[0])
        v = localization_count_check(P, s, m, _require(args.q, "q"), args.budget)
        rep.data.update(v.data)
        rep.add(f"localization at {s}", v)
    elif check == "base-change":
        v = base_change_check(P, _require(args.q, "q"), m)
        rep.data.update({k: [str(r) for r in val] for k, val in v.data.items()})
        rep.add(f"base change to F_{args.q}", v)
    elif check == "first-sequence":
        if P.tower is None:
            raise UsageError("first-sequence needs a presentation with a 'tower'")
        v = first_sequence_check(P, m)
        rep.data.update({k: [str(r) for r in val] for k, val in v.data.items()})
        rep.add(f"first exact sequence m={m}", v)
    elif check == "dilation":
        for v in dilation_checks(P, m):
            rep.add(v.detail, Verdict(v.ok, "on generators"))
        if args.q is not None:
            for v in dilation_point_checks(P, m, args.q, args.budget):
                rep.add(v.detail, Verdict(v.ok, f"points over F_{args.q}"))
    elif check == "functoriality":
        phi = _load_map(args, P)
        if phi.target is not P:
            raise UsageError("functoriality composes an endomorphism; omit --target")
        chain = phi.then(phi).then(phi)
        lhs = induced_map(chain, m)
        hs = induced_map(phi, m)
        rhs = hs.then(hs).then(hs)
        same = all(lhs.images[g] == rhs.images[g] for g in lhs.source.generators)
        rep.add("HS(phi o phi o phi) = HS(phi)^3", Verdict(same, f"{len(lhs.source.generators)} generators"))
        ident = induced_map(identity_map(P), m)
        rep.add("HS(id) = id", Verdict(ident.same_on_generators(identity_map(jet_presentation(P, m))), "on generators"))
    elif check == "truncation":
        _verify_truncation(P, args, rep)
    rep.data["passed"] = rep.status == EXIT_OK
    return rep


# entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--budget", type=int, default=10**7)

    parser = argparse.ArgumentParser(prog="hsjet", description="Hasse-Schmidt jet algebras and arc checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jet", parents=[common], help="print the jet presentation HS^m")
    p.add_argument("file")
    p.add_argument("-m", "--m", type=int, required=True)
    p.set_defaults(func=cmd_jet)

    p = sub.add_parser("verify", parents=[common], help="run a named verification")
    p.add_argument("check", choices=CHECKS)
    p.add_argument("file")
    p.add_argument("--q", type=int)
    p.add_argument("-m", "--m", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--other", help="second factor for the product check")
    p.add_argument("--s", help="element to invert for the localization check")
    p.add_argument("--map", help="endomorphism for the functoriality check, e.g. 'x -> x^2'")
    p.add_argument("--target")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", parents=[common], help="count F_q points")
    p.add_argument("file")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("-m", "--m", type=int)
    p.add_argument("--fiber")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("fiber", parents=[common], help="fiber of J_m over a point")
    p.add_argument("file")
    p.add_argument("-m", "--m", type=int)
    p.add_argument("--fiber", required=True)
    p.add_argument("--q", type=int)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("orbits", parents=[common], help="dilation orbits on a jet fiber")
    p.add_argument("file")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("-m", "--m", type=int)
    p.add_argument("--fiber", required=True)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("induced", parents=[common], help="jet map induced by an algebra map")
    p.add_argument("file")
    p.add_argument("--map", required=True)
    p.add_argument("--target", help="target presentation file (default: the source)")
    p.add_argument("--q", type=int)
    p.add_argument("-m", "--m", type=int)
    p.set_defaults(func=cmd_induced)

    p = sub.add_parser("leading-form", parents=[common], help="restricted top prolongation of b along E")
    p.add_argument("file")
    p.add_argument("--b", required=True)
    p.add_argument("--E", required=True)
    p.add_argument("-m", "--m", type=int, required=True)
    p.set_defaults(func=cmd_leading_form)
    return parser


def _emit(rep: Report, fmt: str, out) -> None:
    if fmt == "structured":
        rep.data["exit_code"] = rep.status
        out.write(json.dumps(rep.data, indent=2) + "\n")
    else:
        out.write("\n".join(rep.lines) + "\n")


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = args.func(args)
    except (FileFormatError, ParseError, OSError) as exc:
        rep = Report({"error": str(exc), "kind": "parse"}, [f"error: {exc}"], EXIT_PARSE)
    except (BudgetExceeded, GroebnerTimeout) as exc:
        partial = getattr(exc, "partial", None)
        rep = Report({"error": str(exc), "kind": "budget", "partial_points": partial},
                     [f"error: {exc}"] + ([f"points found before stopping: {partial}"] if partial is not None else []),
                     EXIT_BUDGET)
    except EmptyScheme as exc:
        rep = Report({"error": str(exc), "kind": "empty-scheme"}, [f"empty scheme: {exc}"], EXIT_SEMANTIC)
    except (UsageError, PresentationError, CoefficientError, RingMismatch, ProlongationError,
            ValueError, AssertionError) as exc:
        rep = Report({"error": str(exc), "kind": "semantic"}, [f"error: {exc}"], EXIT_SEMANTIC)
    _emit(rep, args.format, out)
    return rep.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

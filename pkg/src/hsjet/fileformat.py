"""JSON presentation files: ``{ring, constants, variables, relations, tower}``."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Union

from .coeffs import QQ, ZZ, CoefficientRing, GF
from .presentation import Presentation

_KEYS = {"ring", "constants", "variables", "relations", "tower"}


class FileFormatError(ValueError):
    pass


def ring_from_json(value: Any) -> CoefficientRing:
    if value == "QQ":
        return QQ
    if value == "ZZ":
        return ZZ
    if isinstance(value, dict) and set(value) == {"Fp"} and isinstance(value["Fp"], int):
        try:
            return GF(value["Fp"])
        except ValueError as exc:
            raise FileFormatError(str(exc)) from None
    raise FileFormatError(f"ring must be \"QQ\", \"ZZ\" or {{\"Fp\": p}}, got {value!r}")


def ring_to_json(ring: CoefficientRing):
    return {"Fp": ring.p} if ring.kind == "Fp" else ring.kind


def presentation_from_dict(doc: Dict[str, Any], ring: CoefficientRing | None = None) -> Presentation:
    if not isinstance(doc, dict):
        raise FileFormatError("a presentation must be a JSON object")
    unknown = set(doc) - _KEYS
    if unknown:
        raise FileFormatError(f"unknown keys {sorted(unknown)}")
    if "variables" not in doc:
        raise FileFormatError("missing key 'variables'")
    ring = ring_from_json(doc["ring"]) if "ring" in doc else ring
    if ring is None:
        raise FileFormatError("missing key 'ring'")
    for key in ("constants", "variables", "relations"):
        val = doc.get(key, [])
        if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
            raise FileFormatError(f"{key!r} must be a list of strings")
    tower = presentation_from_dict(doc["tower"], ring) if doc.get("tower") is not None else None
    if tower is not None and tower.ring != ring:
        raise FileFormatError("tower is over a different ring")
    return Presentation.from_strings(ring, doc["variables"], doc.get("relations", []), doc.get("constants", []), tower)


def presentation_to_dict(P: Presentation) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "ring": ring_to_json(P.ring),
        "constants": list(P.constants),
        "variables": [str(g) for g in P.generators],
        "relations": [str(r) for r in P.relations],
    }
    if P.tower is not None:
        doc["tower"] = presentation_to_dict(P.tower)
    return doc


def load_presentation(path: Union[str, Path]) -> Presentation:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: {exc}") from None
    return presentation_from_dict(doc)

"""Reading the JSON cover-spec document."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import jsonschema

from .cover import BranchComponent, CoverData, derive_eigensheaf_degrees
from .errors import DegreeMismatch, SpecError
from .groups import AbelianGroup
from .poly import HomogPoly, random_section

_INT = {"type": "integer"}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["ambient_dim", "group", "branch"],
    "properties": {
        "ambient_dim": {"type": "integer", "minimum": 2},
        "group": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 2}},
        "branch": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["label", "degree"],
                "properties": {
                    "label": {"type": "array", "items": _INT},
                    "degree": {"type": "integer", "minimum": 1},
                    "poly": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "prefixItems": [{"type": "array", "items": {"type": "integer", "minimum": 0}},
                                            _INT, {"type": "integer", "not": {"const": 0}}],
                            "minItems": 3,
                            "maxItems": 3,
                        },
                    },
                    "seed": _INT,
                },
                "oneOf": [{"required": ["poly"]}, {"required": ["seed"]}],
            },
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "primes": {"type": "array", "minItems": 1,
                           "items": {"type": "integer", "minimum": 3, "maximum": 2**31 - 1}},
                "trials": {"type": "integer", "minimum": 1},
                "strictness": {"enum": ["weak", "strict"]},
                "sampling_seed": _INT,
            },
        },
    },
}

DEFAULT_OPTIONS = {"primes": [101, 211, 307], "trials": 2, "strictness": "weak", "sampling_seed": 0}


@dataclass
class CoverSpec:
    ambient_dim: int
    group: AbelianGroup
    branch: list[dict]
    options: dict
    raw: dict = field(repr=False)

    @property
    def sha256(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def sections(self) -> list[HomogPoly]:
        out = []
        nv = self.ambient_dim + 1
        for i, b in enumerate(self.branch):
            if "poly" in b:
                try:
                    p = HomogPoly.from_json(b["poly"], nv, b["degree"])
                except DegreeMismatch as exc:
                    raise SpecError(f"branch {i}: {exc}") from exc
                if p.is_zero():
                    raise SpecError(f"branch {i}: zero polynomial")
            else:
                p = random_section(self.ambient_dim, b["degree"], b["seed"])
            out.append(p)
        return out

    def build_cover(self, require_generation: bool = True) -> CoverData:
        comps = [
            BranchComponent(self.group.element(b["label"]), b["degree"], s)
            for b, s in zip(self.branch, self.sections())
        ]
        return derive_eigensheaf_degrees(self.ambient_dim, self.group, comps, require_generation)


def parse_spec(doc: Any) -> CoverSpec:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise SpecError(f"{path}: {exc.message}") from None
    try:
        group = AbelianGroup(tuple(doc["group"]))
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    for i, b in enumerate(doc["branch"]):
        if len(b["label"]) != group.rank:
            raise SpecError(f"branch/{i}/label: expected {group.rank} exponents")
        for j, term in enumerate(b.get("poly", [])):
            if len(term[0]) != doc["ambient_dim"] + 1:
                raise SpecError(f"branch/{i}/poly/{j}: expected {doc['ambient_dim'] + 1} exponents")
    options = dict(DEFAULT_OPTIONS)
    options.update(doc.get("options", {}))
    return CoverSpec(doc["ambient_dim"], group, [dict(b) for b in doc["branch"]], options, doc)


def load_spec(path: str | Path) -> CoverSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from None
    return parse_spec(doc)


def spec_document(
    ambient_dim: int,
    group: list[int],
    branch: list[dict],
    options: Optional[dict] = None,
) -> dict:
    doc = {"ambient_dim": ambient_dim, "group": list(group), "branch": branch}
    if options:
        doc["options"] = options
    return doc

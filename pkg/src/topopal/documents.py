"""JSON model documents.

A document looks like::

    {
      "worlds": ["x", "y"],
      "family": [{"name": "Y", "members": ["y"]}, {"name": "ALLXY", "members": ["x", "y"]}],
      "generate": true,
      "valuation": {"p": ["x"]},
      "meta": "free text"
    }

With ``generate`` the family is a cover/raw subset space and the model's
topology is the one it generates (the family is kept for ``pre`` mode).
Without it the family must already be a topology.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .model import SubsetModel
from .topology import SubsetFamily, Topology, TopologyError, WorldSet, generate_topology, verify_topology


class DocumentError(ValueError):
    pass


@dataclass
class ModelDocument:
    worlds: list[str]
    family: list[tuple[str, list[str]]]
    generate: bool = False
    valuation: dict[str, list[str]] = field(default_factory=dict)
    meta: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "worlds": list(self.worlds),
            "family": [{"name": n, "members": list(ms)} for n, ms in self.family],
            "generate": self.generate,
            "valuation": {p: list(ws) for p, ws in self.valuation.items()},
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> ModelDocument:
        try:
            worlds = [str(w) for w in data["worlds"]]
            family = [(str(e["name"]), [str(w) for w in e["members"]]) for e in data["family"]]
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"malformed model document: {exc}") from None
        valuation = {str(p): [str(w) for w in ws] for p, ws in data.get("valuation", {}).items()}
        return cls(worlds, family, bool(data.get("generate", False)), valuation, str(data.get("meta", "")))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def loads(cls, text: str) -> ModelDocument:
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from None

    def to_model(self) -> SubsetModel:
        try:
            ws = WorldSet.of(self.worlds)
            names = [n for n, _ in self.family]
            if len(set(names)) != len(names):
                raise DocumentError("family member names must be unique")
            if "ALL" in names:
                raise DocumentError("'ALL' is reserved for the whole space")
            fam = SubsetFamily(ws, tuple(ws.mask(ms) for _, ms in self.family))
            val = {p: ws.mask(v) for p, v in self.valuation.items()}
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
        range_names = dict(zip(names, fam.members))
        if self.generate:
            return SubsetModel(ws, generate_topology(fam), val, fam, range_names)
        check = verify_topology(fam)
        if not check:
            shown = ", ".join(ws.format(m) for m in check.witness)
            raise DocumentError(f"family is not a topology ({check.reason}: {shown}); "
                                "set \"generate\": true to close it")
        try:
            topo = Topology(ws, fam.members)
        except TopologyError as exc:  # pragma: no cover - verify_topology ran first
            raise DocumentError(str(exc)) from None
        return SubsetModel(ws, topo, val, None, range_names)

    @classmethod
    def from_model(cls, m: SubsetModel, meta: str = "") -> ModelDocument:
        ws = m.universe
        names = {mask: n for n, mask in m.range_names.items()}
        if m.raw_family is not None:
            members, generate = list(m.raw_family.members), True
        else:
            assert m.topology is not None
            members, generate = list(m.topology.opens), False
        family = []
        for k, mask in enumerate(members):
            family.append((names.get(mask, f"U{k}"), ws.members(mask)))
        valuation = {p: ws.members(v) for p, v in sorted(m.valuation.items())}
        return cls(list(ws.names), family, generate, valuation, meta)


def load_model(source: str | Path) -> SubsetModel:
    return ModelDocument.loads(Path(source).read_text(encoding="utf-8")).to_model()


def save_model(m: SubsetModel, dest: str | Path, meta: str = "") -> None:
    Path(dest).write_text(ModelDocument.from_model(m, meta).dumps(), encoding="utf-8")

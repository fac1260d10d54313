"""Instance files: a triangulation, boundary labels and optional Morse data, as JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .complex_core import (
    BoundaryDecomposition,
    SimplicialComplex,
    assign_labels,
    build_complex,
    detect_boundary,
)
from .errors import ParseError
from .meshes import generate_example
from .morse_data import CriticalInventory, classify_pl_critical, general_inventory


@dataclass
class Instance:
    name: str
    complex: SimplicialComplex
    decomposition: BoundaryDecomposition
    critical_points: tuple[tuple[int, int], ...] | None = None
    boundary_morse: dict | None = None

    @property
    def dimension(self) -> int:
        return self.complex.dimension

    @property
    def mode(self) -> str:
        return (self.boundary_morse or {}).get("mode", "bott")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.decomposition.labels

    def inventory(self) -> CriticalInventory:
        """Critical counts from the file, or from PL classification when absent."""
        if self.critical_points is not None:
            base = CriticalInventory.from_points(self.dimension, self.critical_points)
        else:
            base = classify_pl_critical(self.complex)
        if self.mode == "general":
            records = self.boundary_morse.get("inventory", [])
            return general_inventory(base.counts, records, self.decomposition)
        return base

    def to_dict(self) -> dict:
        out = {"name": self.name}
        out.update(self.complex.to_dict())
        out["boundary_labels"] = self.decomposition.to_records()
        if self.critical_points is not None:
            out["critical_points"] = [{"vertex": v, "index": i} for v, i in self.critical_points]
        if self.boundary_morse is not None:
            out["boundary_morse"] = self.boundary_morse
        return out


def _require(data: dict, key: str, kind):
    if key not in data:
        raise ParseError(f"missing field {key!r}")
    if not isinstance(data[key], kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return data[key]


def parse_instance(data: dict, strict: bool = False) -> Instance:
    """Validate a decoded instance document and build the complex.

    Schema problems raise ParseError; NonManifold and the other complex
    errors propagate from ``build_complex``.
    """
    if not isinstance(data, dict):
        raise ParseError("instance document must be a JSON object")
    name = str(data.get("name", "instance"))
    dimension = _require(data, "dimension", int)
    vertices = _require(data, "vertices", list)
    tops = _require(data, "top_simplices", list)
    try:
        if any(not isinstance(v, dict) or "id" not in v for v in vertices):
            raise ParseError("every vertex record needs an 'id'")
        if any(not isinstance(t, list) for t in tops):
            raise ParseError("top simplices must be arrays of vertex ids")
        cx = build_complex(tops, vertices, strict=strict)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
    if cx.dimension != dimension:
        raise ParseError(f"declared dimension {dimension} but simplices have dimension {cx.dimension}")

    comps = detect_boundary(cx)
    records = data.get("boundary_labels", [])
    if not isinstance(records, list):
        raise ParseError("boundary_labels must be an array")
    try:
        by_comp = {int(r["component"]): str(r["class"]) for r in records}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad boundary label record: {exc}") from exc
    if len(by_comp) != len(records):
        raise ParseError("a boundary component is labelled twice")
    if set(by_comp) - set(range(len(comps))):
        raise ParseError(f"labels name unknown components {sorted(set(by_comp) - set(range(len(comps))))}")
    try:
        dec = assign_labels(comps, [by_comp[i] for i in sorted(by_comp)])
    except ValueError as exc:
        raise ParseError(str(exc)) from exc

    crit = None
    if "critical_points" in data:
        try:
            crit = tuple((int(p["vertex"]), int(p["index"])) for p in data["critical_points"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad critical point record: {exc}") from exc
        unknown = [v for v, _ in crit if v not in cx.vertices]
        if unknown:
            raise ParseError(f"critical points at unknown vertices {unknown}")
    bmorse = data.get("boundary_morse")
    if bmorse is not None:
        if not isinstance(bmorse, dict) or bmorse.get("mode", "bott") not in ("bott", "general"):
            raise ParseError("boundary_morse.mode must be 'bott' or 'general'")
    if crit and (bmorse or {}).get("mode", "bott") == "bott":
        on_boundary = sorted(v for v, _ in crit if v in cx.boundary_vertices())
        if on_boundary:
            raise ParseError(f"bott mode critical points must be interior, got boundary vertices {on_boundary}")
    return Instance(name, cx, dec, crit, bmorse)


def load_instance(path: str | Path, strict: bool = False) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
        data = json.loads(text)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read instance {path}: {exc}") from exc
    return parse_instance(data, strict=strict)


def dump_instance(instance: Instance) -> str:
    return json.dumps(instance.to_dict(), indent=1) + "\n"


def make_instance(name: str, labels: Sequence[str] | None = None, resolution: int | None = None) -> Instance:
    """Bundled example with the given component labels.

    The sign of each label selects the collar profile of the sampled Morse
    function, so the labelling is always Bott-admissible.
    """
    signs = None if labels is None else [lab.replace("\u2212", "-")[-1] for lab in labels]
    mesh = generate_example(name, resolution, signs)
    labels = mesh.suggested_labels if labels is None else labels
    comps = detect_boundary(mesh.complex)
    dec = assign_labels(comps, list(labels))
    tag = name if not labels else f"{name}[{','.join(dec.labels)}]"
    return Instance(tag, mesh.complex, dec)

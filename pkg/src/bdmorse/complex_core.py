"""Triangulated manifolds with boundary, boundary components and their labels.

Every simplex is stored as the ascending tuple of its vertex ids; that tuple
order is the reference orientation used by all incidence matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    DanglingVertex,
    DuplicateTopSimplex,
    LabelCountMismatch,
    NonManifold,
)

Simplex = tuple[int, ...]

CLASSES = ("a+", "a-", "r+", "r-")


@dataclass(frozen=True)
class Vertex:
    id: int
    coords: tuple[float, ...] | None = None
    f: float | None = None


class SimplicialComplex:
    """Pure n-dimensional simplicial complex with its full face lattice.

    Immutable after construction. ``simplices[k]`` lists the k-simplices in
    lexicographic order and ``index[k]`` maps each of them to its position.
    """

    def __init__(self, dimension: int, vertices: Mapping[int, Vertex], top_simplices: Sequence[Simplex]):
        self.dimension = dimension
        self.vertices = dict(sorted(vertices.items()))
        self.top_simplices = tuple(sorted(top_simplices))
        faces: list[set[Simplex]] = [set() for _ in range(dimension + 1)]
        for top in self.top_simplices:
            for k in range(dimension + 1):
                faces[k].update(itertools.combinations(top, k + 1))
        self.simplices: list[list[Simplex]] = [sorted(fs) for fs in faces]
        self.index: list[dict[Simplex, int]] = [
            {s: i for i, s in enumerate(level)} for level in self.simplices
        ]
        cofaces: dict[Simplex, int] = {}
        for top in self.top_simplices:
            for facet in itertools.combinations(top, dimension):
                cofaces[facet] = cofaces.get(facet, 0) + 1
        self._facet_cofaces = cofaces

    def __repr__(self) -> str:
        counts = ", ".join(str(len(s)) for s in self.simplices)
        return f"SimplicialComplex(dim={self.dimension}, counts=({counts}))"

    def count(self, k: int) -> int:
        if 0 <= k <= self.dimension:
            return len(self.simplices[k])
        return 0

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices)

    @property
    def has_morse_values(self) -> bool:
        return all(v.f is not None for v in self.vertices.values())

    def f(self, vertex: int) -> float:
        value = self.vertices[vertex].f
        if value is None:
            raise KeyError(f"vertex {vertex} carries no Morse value")
        return value

    def facet_coface_count(self, facet: Simplex) -> int:
        return self._facet_cofaces.get(tuple(facet), 0)

    def boundary_facets(self) -> list[Simplex]:
        """(n-1)-simplices lying in exactly one top simplex, sorted."""
        return sorted(s for s, c in self._facet_cofaces.items() if c == 1)

    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(v for s in self.boundary_facets() for v in s)

    def neighbors(self, vertex: int) -> set[int]:
        out: set[int] = set()
        for a, b in self.simplices[1] if self.dimension >= 1 else ():
            if a == vertex:
                out.add(b)
            elif b == vertex:
                out.add(a)
        return out

    def link(self, vertex: int) -> list[Simplex]:
        """Maximal simplices of the link of ``vertex``."""
        return sorted(
            tuple(u for u in top if u != vertex) for top in self.top_simplices if vertex in top
        )

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts))

    def to_dict(self) -> dict:
        verts = []
        for v in self.vertices.values():
            rec: dict = {"id": v.id}
            if v.coords is not None:
                rec["coords"] = list(v.coords)
            if v.f is not None:
                rec["f"] = v.f
            verts.append(rec)
        return {
            "dimension": self.dimension,
            "vertices": verts,
            "top_simplices": [list(s) for s in self.top_simplices],
        }

    def with_morse_values(self, values: Mapping[int, float]) -> "SimplicialComplex":
        verts = {
            vid: Vertex(vid, v.coords, float(values[vid])) for vid, v in self.vertices.items()
        }
        return SimplicialComplex(self.dimension, verts, self.top_simplices)


def _as_vertex(rec) -> Vertex:
    if isinstance(rec, Vertex):
        return rec
    if isinstance(rec, Mapping):
        coords = rec.get("coords")
        f = rec.get("f")
        return Vertex(
            int(rec["id"]),
            None if coords is None else tuple(float(c) for c in coords),
            None if f is None else float(f),
        )
    return Vertex(int(rec))


def build_complex(
    top_simplices: Iterable[Sequence[int]],
    vertex_records: Iterable | None = None,
    strict: bool = False,
) -> SimplicialComplex:
    """Build and validate a pure complex from its top simplices.

    ``vertex_records`` are ``Vertex`` objects, dicts with ``id`` and optional
    ``coords``/``f``, or bare ids; when omitted the ids are taken from the
    simplices. ``strict`` additionally checks that every vertex link has the
    homology of a sphere (interior) or of a point (boundary).
    """
    tops: list[Simplex] = []
    dims = set()
    for raw in top_simplices:
        ids = [int(v) for v in raw]
        if len(set(ids)) != len(ids):
            raise ValueError(f"top simplex {raw} repeats a vertex")
        tops.append(tuple(sorted(ids)))
        dims.add(len(ids) - 1)
    if not tops:
        raise ValueError("complex has no top simplices")
    if len(dims) != 1:
        raise ValueError(f"top simplices of mixed dimension {sorted(dims)}")
    n = dims.pop()
    seen: set[Simplex] = set()
    for t in tops:
        if t in seen:
            raise DuplicateTopSimplex(f"top simplex {t} listed twice")
        seen.add(t)

    used = {v for t in tops for v in t}
    if vertex_records is None:
        vertices = {v: Vertex(v) for v in used}
    else:
        vertices = {}
        for rec in vertex_records:
            vx = _as_vertex(rec)
            if vx.id in vertices:
                raise ValueError(f"vertex {vx.id} declared twice")
            vertices[vx.id] = vx
        missing = used - vertices.keys()
        if missing:
            raise DanglingVertex(f"simplices reference undeclared vertices {sorted(missing)}")
        unused = vertices.keys() - used
        if unused:
            raise DanglingVertex(f"vertices {sorted(unused)} lie in no top simplex")
        with_f = [v.f is not None for v in vertices.values()]
        if any(with_f) and not all(with_f):
            raise ValueError("Morse values must be given on every vertex or on none")

    cx = SimplicialComplex(n, vertices, tops)
    bad = [s for s, c in cx._facet_cofaces.items() if c > 2]
    if bad:
        raise NonManifold(f"(n-1)-simplex {min(bad)} is a face of {cx._facet_cofaces[min(bad)]} top simplices")
    if strict:
        check_links(cx)
    return cx


def check_links(cx: SimplicialComplex) -> None:
    """Link condition up to homology; raises NonManifold on failure."""
    from .cohomology import reduced_betti_of

    n = cx.dimension
    bverts = cx.boundary_vertices()
    sphere = tuple(1 if k == n - 1 else 0 for k in range(-1, n))
    point = tuple(0 for _ in range(-1, n))
    for v in cx.vertices:
        profile = tuple(reduced_betti_of(cx.link(v), max_degree=n - 1))
        expected = point if v in bverts else sphere
        if profile != expected:
            where = "boundary" if v in bverts else "interior"
            raise NonManifold(f"link of {where} vertex {v} has reduced Betti {profile}")


@dataclass(frozen=True)
class BoundaryComponent:
    id: int
    simplices: tuple[Simplex, ...]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for s in self.simplices for v in s)

    def closure(self) -> set[Simplex]:
        out: set[Simplex] = set()
        for s in self.simplices:
            for k in range(1, len(s) + 1):
                out.update(itertools.combinations(s, k))
        return out


def detect_boundary(cx: SimplicialComplex) -> list[BoundaryComponent]:
    """Group boundary (n-1)-simplices into components connected through (n-2)-faces.

    Components are numbered by their smallest simplex.
    """
    facets = cx.boundary_facets()
    if not facets:
        return []
    parent = list(range(len(facets)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if cx.dimension >= 2:
        owner: dict[Simplex, int] = {}
        for i, s in enumerate(facets):
            for ridge in itertools.combinations(s, len(s) - 1):
                j = owner.setdefault(ridge, i)
                if j != i:
                    parent[find(i)] = find(j)
    groups: dict[int, list[Simplex]] = {}
    for i, s in enumerate(facets):
        groups.setdefault(find(i), []).append(s)
    ordered = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
    return [BoundaryComponent(i, tuple(g)) for i, g in enumerate(ordered)]


@dataclass(frozen=True)
class BoundaryDecomposition:
    """Boundary components with a class in {a+, a-, r+, r-} each."""

    components: tuple[BoundaryComponent, ...]
    labels: tuple[str, ...]

    def of_class(self, *classes: str) -> list[BoundaryComponent]:
        return [c for c, lab in zip(self.components, self.labels) if lab in classes]

    def subcomplex(self, *classes: str) -> set[Simplex]:
        """Closure of every component whose label is among ``classes``."""
        out: set[Simplex] = set()
        for comp in self.of_class(*classes):
            out |= comp.closure()
        return out

    @property
    def relative_part(self) -> set[Simplex]:
        return self.subcomplex("r+", "r-")

    def label_of(self, component_id: int) -> str:
        return self.labels[component_id]

    def to_records(self) -> list[dict]:
        return [{"component": c.id, "class": lab} for c, lab in zip(self.components, self.labels)]


def assign_labels(components: Sequence[BoundaryComponent], labels: Sequence[str]) -> BoundaryDecomposition:
    labels = [_normalize_class(lab) for lab in labels]
    if len(labels) != len(components):
        raise LabelCountMismatch(f"{len(components)} boundary components but {len(labels)} labels")
    return BoundaryDecomposition(tuple(components), tuple(labels))


def _normalize_class(label: str) -> str:
    lab = label.strip().replace("−", "-")
    if lab not in CLASSES:
        raise ValueError(f"unknown boundary class {label!r}; expected one of {CLASSES}")
    return lab


def orientation(cx: SimplicialComplex) -> dict[Simplex, int] | None:
    """Coherent orientation signs of the top simplices, or None if non-orientable.

    The facet obtained by dropping position i of a top simplex inherits the
    sign (-1)^i times the simplex sign; neighbours must induce opposite signs.
    """
    n = cx.dimension
    by_facet: dict[Simplex, list[tuple[Simplex, int]]] = {}
    for top in cx.top_simplices:
        for i in range(n + 1):
            facet = top[:i] + top[i + 1:]
            by_facet.setdefault(facet, []).append((top, (-1) ** i))
    signs: dict[Simplex, int] = {}
    for start in cx.top_simplices:
        if start in signs:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            top = stack.pop()
            for i in range(n + 1):
                facet = top[:i] + top[i + 1:]
                induced = signs[top] * (-1) ** i
                for other, sgn in by_facet[facet]:
                    if other == top:
                        continue
                    want = -induced * sgn
                    if other not in signs:
                        signs[other] = want
                        stack.append(other)
                    elif signs[other] != want:
                        return None
    return signs


@dataclass
class ExampleMesh:
    """A generated instance: complex with Morse values plus suggested labels."""

    name: str
    complex: SimplicialComplex
    signs: tuple[str, ...]
    suggested_labels: tuple[str, ...] = field(default=())

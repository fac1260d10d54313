"""Critical-point inventories and the mu sequence of the boundary Morse inequalities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cohomology import BettiVector, reduced_betti_of
from .complex_core import BoundaryDecomposition, SimplicialComplex
from .errors import DegenerateVertex, MissingMorseValues, ModeMismatch

MuVector = tuple[int, ...]


@dataclass(frozen=True)
class BoundaryCount:
    """c_{k,k'} contribution of one boundary component; side is "a" or "r"."""

    component: int
    k: int
    k_prime: int
    count: int
    side: str

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("boundary counts must be non-negative")
        if self.count and self.k_prime not in (self.k - 1, self.k):
            raise ValueError(f"c_{{{self.k},{self.k_prime}}} must vanish unless k' is k-1 or k")
        if self.side not in ("a", "r"):
            raise ValueError(f"side must be 'a' or 'r', got {self.side!r}")


@dataclass
class CriticalInventory:
    counts: tuple[int, ...]
    mode: str = "bott"
    located: dict[int, int] = field(default_factory=dict)
    boundary: tuple[BoundaryCount, ...] = ()

    def __post_init__(self):
        if self.mode not in ("bott", "general"):
            raise ValueError(f"unknown boundary mode {self.mode!r}")
        if any(c < 0 for c in self.counts):
            raise ValueError("critical counts must be non-negative")

    @property
    def dimension(self) -> int:
        return len(self.counts) - 1

    @classmethod
    def from_points(cls, dimension: int, points: Sequence[tuple[int, int]], mode: str = "bott",
                    boundary: Sequence[BoundaryCount] = ()) -> "CriticalInventory":
        counts = [0] * (dimension + 1)
        located = {}
        for vertex, index in points:
            if not 0 <= index <= dimension:
                raise ValueError(f"Morse index {index} out of range at vertex {vertex}")
            counts[index] += 1
            located[int(vertex)] = int(index)
        return cls(tuple(counts), mode, located, tuple(boundary))


def _key(cx: SimplicialComplex, v: int) -> tuple[float, int]:
    return (cx.f(v), v)


def lower_link(cx: SimplicialComplex, v: int) -> list[tuple[int, ...]]:
    """Maximal faces of the part of the link of v spanned by lower vertices.

    A vertex u is lower than v when (f(u), u) < (f(v), v).
    """
    here = _key(cx, v)
    pieces = set()
    for face in cx.link(v):
        low = tuple(u for u in face if _key(cx, u) < here)
        if low:
            pieces.add(low)
    return sorted(p for p in pieces if not any(p != q and set(p) <= set(q) for q in pieces))


def vertex_index(cx: SimplicialComplex, v: int) -> int | None:
    """Morse index of an interior vertex, None when regular.

    Raises DegenerateVertex when the lower link has neither the homology of a
    point nor that of a sphere.
    """
    n = cx.dimension
    profile = reduced_betti_of(lower_link(cx, v), max_degree=n - 1)
    nonzero = [(deg - 1, b) for deg, b in enumerate(profile) if b]
    if not nonzero:
        return None
    if len(nonzero) == 1 and nonzero[0][1] == 1:
        return nonzero[0][0] + 1
    raise DegenerateVertex(v, profile)


def collar_layer(cx: SimplicialComplex) -> frozenset[int]:
    """Interior vertices joined by an edge to a boundary vertex."""
    bverts = cx.boundary_vertices()
    out = set()
    for a, b in cx.simplices[1] if cx.dimension >= 1 else ():
        if a in bverts and b not in bverts:
            out.add(b)
        elif b in bverts and a not in bverts:
            out.add(a)
    return frozenset(out)


def classify_pl_critical(cx: SimplicialComplex, exclude_collar: bool = True) -> CriticalInventory:
    """Interior PL critical vertices of the sampled function, counted by index.

    Boundary vertices are never classified; with ``exclude_collar`` the
    first interior layer next to the boundary is skipped as well.
    """
    if not cx.has_morse_values:
        raise MissingMorseValues("complex carries no Morse values")
    skip = set(cx.boundary_vertices())
    if exclude_collar:
        skip |= collar_layer(cx)
    points = []
    for v in cx.vertices:
        if v in skip:
            continue
        idx = vertex_index(cx, v)
        if idx is not None:
            points.append((v, idx))
    return CriticalInventory.from_points(cx.dimension, points)


def mu_vector(
    inventory: CriticalInventory,
    gamma: BettiVector | None = None,
    eta: BettiVector | None = None,
    mode: str = "bott",
) -> MuVector:
    """mu_k = c_k + eta_k + gamma_{k-1} (bott) or c_k + c_{k,k}(N_a) + c_{k,k-1}(N_r) (general)."""
    if inventory.mode != mode:
        raise ModeMismatch(f"inventory is in {inventory.mode} mode, {mode} requested")
    n = inventory.dimension
    mu = list(inventory.counts)
    if mode == "bott":
        gamma = tuple(gamma) if gamma is not None else (0,) * n
        eta = tuple(eta) if eta is not None else (0,) * n
        if len(gamma) != n or len(eta) != n:
            raise ModeMismatch(f"boundary Betti vectors must have length {n}")
        for k in range(n + 1):
            mu[k] += (eta[k] if k < n else 0) + (gamma[k - 1] if k >= 1 else 0)
    else:
        for bc in inventory.boundary:
            if not 0 <= bc.k <= n:
                raise ValueError(f"boundary index {bc.k} out of range")
            if bc.side == "a" and bc.k_prime == bc.k:
                mu[bc.k] += bc.count
            elif bc.side == "r" and bc.k_prime == bc.k - 1:
                mu[bc.k] += bc.count
    return tuple(mu)


def general_inventory(
    counts: Sequence[int], records: Sequence[dict], decomposition: BoundaryDecomposition
) -> CriticalInventory:
    """Inventory for general mode from ``{component, k, k_prime, count}`` records."""
    boundary = []
    for rec in records:
        comp = int(rec["component"])
        side = decomposition.label_of(comp)[0]
        boundary.append(BoundaryCount(comp, int(rec["k"]), int(rec["k_prime"]), int(rec["count"]), side))
    return CriticalInventory(tuple(int(c) for c in counts), "general", {}, tuple(boundary))

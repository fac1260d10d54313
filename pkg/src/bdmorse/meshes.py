"""Bundled triangulations with vertex-sampled Morse functions.

Shapes are assembled from paths, cycles and the octahedral sphere by the
staircase triangulation of products and by coning. Near every boundary
component the sampled function is a quadratic in the normal coordinate,
+A u**2 (class "+", minimum set) or -A u**2 (class "-", maximum set).
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from .complex_core import ExampleMesh, SimplicialComplex, Vertex, build_complex, detect_boundary
from .errors import ResolutionTooSmall, UnknownExample

AMPLITUDE = 0.25
WIGGLE = 0.05

_MIN_RESOLUTION = {
    "interval": 4,
    "disk": 3,
    "annulus": 3,
    "moebius": 4,
    "ball3": 3,
    "solid_torus": 3,
    "sphere": 1,
    "torus": 4,
}

_DEFAULT_SIGNS = {
    "interval": ("+", "-"),
    "disk": ("-",),
    "annulus": ("+", "-"),
    "moebius": ("-",),
    "ball3": ("+",),
    "solid_torus": ("+",),
    "sphere": (),
    "torus": (),
}

_DEFAULT_RESOLUTION = {
    "interval": 8,
    "disk": 6,
    "annulus": 6,
    "moebius": 6,
    "ball3": 3,
    "solid_torus": 4,
    "sphere": 1,
    "torus": 6,
}

EXAMPLE_NAMES = tuple(_MIN_RESOLUTION)


def smoothstep(t: float) -> float:
    t = min(max(t, 0.0), 1.0)
    return t * t * (3.0 - 2.0 * t)


def _profile(t: float, signs: tuple[str, str]) -> float:
    """Cross-section profile on [0, 1] with class signs at the two ends.

    Opposite signs give a monotone profile; equal signs a profile with one
    extremum at t = 1/2.
    """
    lo, hi = signs
    if lo == "+" and hi == "-":
        return smoothstep(t)
    if lo == "-" and hi == "+":
        return 1.0 - smoothstep(t)
    bump = smoothstep(1.0 - abs(2.0 * t - 1.0))
    return bump if lo == "+" else 1.0 - bump


def _path(n: int) -> list[tuple[int, ...]]:
    return [(i, i + 1) for i in range(n)]


def _cycle(m: int) -> list[tuple[int, ...]]:
    return [tuple(sorted((i, (i + 1) % m))) for i in range(m)]


_OCTAHEDRON = [
    (0, 2, 4), (0, 2, 5), (0, 3, 4), (0, 3, 5),
    (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 5),
]
_OCTA_COORDS = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]


def product_simplices(
    first: Sequence[Sequence[int]], second: Sequence[Sequence[int]]
) -> list[tuple[tuple[int, int], ...]]:
    """Staircase triangulation of the product of two vertex-ordered complexes.

    Each pair of maximal simplices contributes one simplex per monotone
    lattice path; vertices are returned as (first-id, second-id) pairs.
    """
    out = []
    for a in first:
        a = sorted(a)
        for b in second:
            b = sorted(b)
            p, q = len(a) - 1, len(b) - 1
            for steps in itertools.combinations(range(p + q), p):
                i = j = 0
                verts = [(a[0], b[0])]
                for t in range(p + q):
                    if t in steps:
                        i += 1
                    else:
                        j += 1
                    verts.append((a[i], b[j]))
                out.append(tuple(verts))
    return out


def _finish(name, dim, coords, values, tops, signs, strict=True) -> ExampleMesh:
    verts = [Vertex(v, tuple(coords[v]), float(values[v])) for v in sorted(coords)]
    cx = build_complex(tops, verts, strict=strict)
    comps = detect_boundary(cx)
    if len(comps) != len(signs):
        raise AssertionError(f"{name}: {len(comps)} boundary components for signs {signs}")
    suggestion = {"+": "a+", "-": "r-"}
    return ExampleMesh(name, cx, tuple(signs), tuple(suggestion[s] for s in signs))


def _interval(res, signs):
    coords = {i: (i / res,) for i in range(res + 1)}
    values = {i: AMPLITUDE * _profile(i / res, signs) for i in coords}
    return _finish("interval", 1, coords, values, _path(res), signs)


def _annular_layers(m: int, layers: int) -> tuple[list, dict]:
    """Cycle of length m times a path with ``layers`` edges; id = layer * m + i."""
    prod = product_simplices(_cycle(m), _path(layers))
    tops = [tuple(j * m + i for i, j in s) for s in prod]
    return tops, {(j * m + i): (i, j) for i in range(m) for j in range(layers + 1)}


def _disk_layers(m: int, rings: int) -> tuple[list, dict]:
    """Cone over the inner ring of a layered annulus: vertex 0 is the centre."""
    tops, ij = _annular_layers(m, rings - 1)
    tops = [tuple(v + 1 for v in s) for s in tops]
    tops += [(0, i + 1, (i + 1) % m + 1) for i in range(m)]
    radius = {0: 0.0}
    angle = {0: 0.0}
    for v, (i, j) in ij.items():
        radius[v + 1] = (j + 1) / rings
        angle[v + 1] = 2 * math.pi * i / m
    return tops, {v: (radius[v], angle[v]) for v in radius}


def _disk(res, signs):
    rings = max(3, res // 2)
    tops, polar = _disk_layers(res, rings)
    sign = signs[0]
    coords = {v: (r * math.cos(a), r * math.sin(a)) for v, (r, a) in polar.items()}
    values = {v: AMPLITUDE * _profile(r, ("+" if sign == "-" else "-", sign)) for v, (r, _) in polar.items()}
    return _finish("disk", 2, coords, values, tops, signs)


def _annulus(res, signs):
    layers = max(4, res // 2)
    if signs[0] == signs[1] and layers % 2:
        layers += 1
    tops, ij = _annular_layers(res, layers)
    coords, values = {}, {}
    for v, (i, j) in ij.items():
        t = j / layers
        a = 2 * math.pi * i / res
        r = 1.0 + t
        coords[v] = (r * math.cos(a), r * math.sin(a))
        values[v] = AMPLITUDE * _profile(t, signs)
        if signs[0] == signs[1] and 2 * j == layers:
            values[v] += AMPLITUDE * WIGGLE * math.cos(a + 0.1)
    return _finish("annulus", 2, coords, values, tops, signs)


def _moebius(res, signs):
    width = 4
    m = res
    vid = {(i, j): i * (width + 1) + j for i in range(m) for j in range(width + 1)}

    def at(i, j):
        if i == m:
            return vid[(0, width - j)]
        return vid[(i, j)]

    tops = []
    for i in range(m):
        for j in range(width):
            a, b, c, d = at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)
            tops += [(a, b, d), (a, c, d)]
    coords, values = {}, {}
    sign = signs[0]
    for (i, j), v in vid.items():
        t = j / width
        phi = 2 * math.pi * i / m
        w = t - 0.5
        coords[v] = (
            (1 + w * math.cos(phi / 2)) * math.cos(phi),
            (1 + w * math.cos(phi / 2)) * math.sin(phi),
            w * math.sin(phi / 2),
        )
        values[v] = AMPLITUDE * _profile(t, (sign, sign))
        if 2 * j == width:
            values[v] += AMPLITUDE * WIGGLE * math.cos(phi + 0.1)
    return _finish("moebius", 2, coords, values, tops, signs)


def _ball3(res, signs):
    shells = res
    prod = product_simplices(_OCTAHEDRON, _path(shells - 1))
    tops = [tuple(1 + j * 6 + i for i, j in s) for s in prod]
    tops += [(0,) + tuple(1 + i for i in tri) for tri in _OCTAHEDRON]
    sign = signs[0]
    coords, values = {0: (0.0, 0.0, 0.0)}, {}
    radius = {0: 0.0}
    for j in range(shells):
        r = (j + 1) / shells
        for i in range(6):
            coords[1 + j * 6 + i] = tuple(r * c for c in _OCTA_COORDS[i])
            radius[1 + j * 6 + i] = r
    for v, r in radius.items():
        values[v] = AMPLITUDE * _profile(r, ("+" if sign == "-" else "-", sign))
    return _finish("ball3", 3, coords, values, tops, signs)


def _solid_torus(res, signs):
    rim = 5
    disk_tops, polar = _disk_layers(rim, 3)
    prod = product_simplices(disk_tops, _cycle(res))
    nd = len(polar)
    tops = [tuple(q * nd + p for p, q in s) for s in prod]
    sign = signs[0]
    coords, values = {}, {}
    for q in range(res):
        phi = 2 * math.pi * q / res
        for p, (r, a) in polar.items():
            v = q * nd + p
            big = 2.0 + 0.8 * r * math.cos(a)
            coords[v] = (big * math.cos(phi), big * math.sin(phi), 0.8 * r * math.sin(a))
            val = AMPLITUDE * _profile(r, ("+" if sign == "-" else "-", sign))
            if p == 0:
                val += AMPLITUDE * WIGGLE * math.cos(phi + 0.1)
            values[v] = val
    return _finish("solid_torus", 3, coords, values, tops, signs)


def _sphere(res, signs):
    coords = {i: tuple(float(c) for c in _OCTA_COORDS[i]) for i in range(6)}
    values = {i: AMPLITUDE * (x[2] + 0.3 * x[0] + 0.1 * x[1]) for i, x in coords.items()}
    return _finish("sphere", 2, coords, values, _OCTAHEDRON, signs)


def _torus(res, signs):
    prod = product_simplices(_cycle(res), _cycle(res))
    tops = [tuple(j * res + i for i, j in s) for s in prod]
    coords, values = {}, {}
    for i in range(res):
        for j in range(res):
            a = 2 * math.pi * (i + 0.13) / res
            b = 2 * math.pi * (j + 0.29) / res
            v = j * res + i
            coords[v] = ((2 + math.cos(b)) * math.cos(a), (2 + math.cos(b)) * math.sin(a), math.sin(b))
            values[v] = AMPLITUDE * (math.cos(a) + 0.45 * math.cos(b))
    return _finish("torus", 2, coords, values, tops, signs)


_BUILDERS = {
    "interval": _interval,
    "disk": _disk,
    "annulus": _annulus,
    "moebius": _moebius,
    "ball3": _ball3,
    "solid_torus": _solid_torus,
    "sphere": _sphere,
    "torus": _torus,
}


def generate_example(name: str, resolution: int | None = None, signs: Sequence[str] | None = None) -> ExampleMesh:
    """Generate a bundled triangulation with a collar-flat Morse function.

    ``signs`` gives the class sign ("+" or "-") of each boundary component
    in component order and selects the profile; it defaults to the shape's
    suggestion.
    """
    if name not in _BUILDERS:
        raise UnknownExample(f"unknown example {name!r}; choose from {EXAMPLE_NAMES}")
    res = _DEFAULT_RESOLUTION[name] if resolution is None else int(resolution)
    if res < _MIN_RESOLUTION[name]:
        raise ResolutionTooSmall(f"{name} needs resolution >= {_MIN_RESOLUTION[name]}, got {res}")
    signs = tuple(_DEFAULT_SIGNS[name] if signs is None else (s.strip()[-1] for s in signs))
    if len(signs) != len(_DEFAULT_SIGNS[name]) or any(s not in "+-" for s in signs):
        raise ValueError(f"{name} needs {len(_DEFAULT_SIGNS[name])} boundary signs, got {signs}")
    return _BUILDERS[name](res, signs)

import pytest

import oracles
from bdmorse.cohomology import betti, euler, relative_cochain_complex
from bdmorse.complex_core import detect_boundary
from bdmorse.errors import ResolutionTooSmall, UnknownExample
from bdmorse.meshes import EXAMPLE_NAMES, generate_example, product_simplices

# Frozen from oracles.py (face counts and components at default resolution).
SIZES = {
    "interval": (9,),
    "disk": (19,),
    "annulus": (30,),
    "moebius": (30,),
    "ball3": (19,),
    "solid_torus": (64,),
    "sphere": (6,),
    "torus": (36,),
}
BOUNDARY_FACETS = {
    "interval": [1, 1],
    "disk": [6],
    "annulus": [6, 6],
    "moebius": [12],
    "ball3": [8],
    "solid_torus": [40],
    "sphere": [],
    "torus": [],
}


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_shapes(name):
    mesh = generate_example(name)
    cx = mesh.complex
    assert cx.counts[0] == SIZES[name][0]
    assert [len(c.simplices) for c in detect_boundary(cx)] == BOUNDARY_FACETS[name]
    assert cx.has_morse_values
    assert len(mesh.suggested_labels) == len(BOUNDARY_FACETS[name])


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_euler_modes_agree(name):
    cx = generate_example(name).complex
    assert euler(cx, "simplex-count") == euler(cx, "betti-sum") == oracles.euler_from_counts(cx.top_simplices)


@pytest.mark.parametrize("res", [6, 8, 10])
def test_disk_rim_edges_match_resolution(res):
    comps = detect_boundary(generate_example("disk", res).complex)
    assert len(comps[0].simplices) == res


def test_suggestions():
    assert generate_example("disk").suggested_labels == ("r-",)
    assert generate_example("ball3").suggested_labels == ("a+",)
    assert generate_example("interval").signs == ("+", "-")


def test_disk_profile_is_radial_min():
    cx = generate_example("disk", 6).complex
    f = {v: cx.f(v) for v in cx.vertices}
    assert min(f, key=f.get) == 0
    rim = {v for c in detect_boundary(cx) for v in c.vertices}
    assert len({f[v] for v in rim}) == 1


def test_collar_is_flat():
    # First difference toward the boundary vanishes on the boundary layer.
    cx = generate_example("interval", 8).complex
    assert cx.f(0) == pytest.approx(cx.f(1), abs=0.02)
    assert cx.f(8) == pytest.approx(cx.f(7), abs=0.02)


def test_errors():
    with pytest.raises(UnknownExample):
        generate_example("klein_bottle")
    with pytest.raises(ResolutionTooSmall):
        generate_example("interval", 2)
    with pytest.raises(ValueError):
        generate_example("disk", signs=["+", "-"])


def test_product_of_edges_is_two_triangles():
    prod = product_simplices([(0, 1)], [(0, 1)])
    assert sorted(prod) == [((0, 0), (0, 1), (1, 1)), ((0, 0), (1, 0), (1, 1))]


@pytest.mark.parametrize("name", ["annulus", "torus"])
def test_refinement_keeps_topology(name):
    for res in (6, 8):
        cx = generate_example(name, res).complex
        assert betti(relative_cochain_complex(cx)) == oracles.relative_betti(cx.top_simplices)

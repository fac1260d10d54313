import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bdmorse.complex_core import (
    BoundaryDecomposition,
    assign_labels,
    build_complex,
    detect_boundary,
    orientation,
)
from bdmorse.errors import (
    DanglingVertex,
    DuplicateTopSimplex,
    LabelCountMismatch,
    NonManifold,
)
from bdmorse.meshes import EXAMPLE_NAMES, generate_example


def fan(m):
    return [(0, i, (i % m) + 1) for i in range(1, m + 1)]


def test_fan_disk_counts():
    cx = build_complex(fan(6))
    assert cx.counts == (7, 12, 6)


def test_single_edge():
    cx = build_complex([[0, 1]])
    assert cx.counts == (2, 1)
    comps = detect_boundary(cx)
    assert [c.simplices for c in comps] == [((0,),), ((1,),)]


def test_threefold_edge_is_non_manifold():
    with pytest.raises(NonManifold):
        build_complex([(0, 1, 2), (0, 1, 3), (0, 1, 4)])


def test_dangling_and_duplicate():
    with pytest.raises(DanglingVertex):
        build_complex([(0, 1, 2)], [{"id": 0}, {"id": 1}])
    with pytest.raises(DanglingVertex):
        build_complex([(0, 1, 2)], [{"id": i} for i in range(4)])
    with pytest.raises(DuplicateTopSimplex):
        build_complex([(0, 1, 2), (2, 1, 0)])


def test_partial_morse_values_rejected():
    with pytest.raises(ValueError):
        build_complex([(0, 1)], [{"id": 0, "f": 0.0}, {"id": 1}])


def test_fan_boundary_single_component():
    comps = detect_boundary(build_complex(fan(6)))
    assert len(comps) == 1
    assert len(comps[0].simplices) == 6


def test_sphere_has_no_boundary():
    assert detect_boundary(generate_example("sphere").complex) == []


def test_annulus_two_components_match_oracle():
    cx = generate_example("annulus").complex
    comps = detect_boundary(cx)
    ref = oracles.boundary_components(cx.top_simplices)
    assert [list(c.simplices) for c in comps] == ref
    assert len(comps) == 2


def test_assign_labels():
    comps = detect_boundary(generate_example("annulus").complex)
    dec = assign_labels(comps, ["a+", "r−"])
    assert dec.labels == ("a+", "r-")
    assert [c.id for c in dec.of_class("a+")] == [0]
    assert [c.id for c in dec.of_class("r-")] == [1]
    assert dec.of_class("a-") == []
    with pytest.raises(LabelCountMismatch):
        assign_labels(comps, ["a+"])
    with pytest.raises(ValueError):
        assign_labels(comps, ["a+", "x+"])


def test_disk_r_minus_decomposition():
    comps = detect_boundary(build_complex(fan(6)))
    dec = assign_labels(comps, ["r-"])
    assert isinstance(dec, BoundaryDecomposition)
    assert len(dec.subcomplex("r-")) == 12
    assert dec.subcomplex("a+") == set()


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_serialization_round_trip(name):
    cx = generate_example(name).complex
    data = cx.to_dict()
    again = build_complex(data["top_simplices"], data["vertices"])
    assert again.to_dict() == data
    assert again.simplices == cx.simplices


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_boundary_components_match_oracle(name):
    cx = generate_example(name).complex
    ref = oracles.boundary_components(cx.top_simplices)
    assert [list(c.simplices) for c in detect_boundary(cx)] == ref


def test_orientation():
    assert orientation(generate_example("annulus").complex) is not None
    assert orientation(generate_example("moebius").complex) is None
    assert orientation(generate_example("solid_torus").complex) is not None


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12))
def test_fan_boundary_size(m):
    cx = build_complex(fan(m))
    comps = detect_boundary(cx)
    assert len(comps) == 1 and len(comps[0].simplices) == m
    assert cx.euler_characteristic() == 1


@settings(max_examples=25, deadline=None)
@given(st.permutations(list(range(7))))
def test_relabelling_preserves_counts(perm):
    tops = [tuple(perm[v] for v in t) for t in fan(6)]
    cx = build_complex(tops)
    assert cx.counts == (7, 12, 6)
    assert len(detect_boundary(cx)) == 1

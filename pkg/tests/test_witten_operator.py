import math

import numpy as np
import pytest

from conftest import instance
from bdmorse.cohomology import betti, relative_cochain_complex
from bdmorse.complex_core import Vertex, assign_labels, build_complex, detect_boundary
from bdmorse.errors import GapAmbiguity, MissingMorseValues, NonpositiveWeight, ScaleOverflow
from bdmorse.meshes import generate_example
from bdmorse.witten_operator import (
    assemble_laplacian,
    deformed_coboundary,
    deformed_laplacians,
    kernel_count,
    simplex_potential,
)


def edge(f0, f1):
    return build_complex([(0, 1)], [Vertex(0, f=f0), Vertex(1, f=f1)])


def test_potential_is_vertex_mean():
    pot = simplex_potential(relative_cochain_complex(edge(0.0, 1.0)))
    assert list(pot[0]) == [0.0, 1.0]
    assert list(pot[1]) == [0.5]


def test_constant_potential():
    cx = generate_example("disk").complex
    cx = cx.with_morse_values({v: 0.3 for v in cx.vertices})
    pot = simplex_potential(relative_cochain_complex(cx))
    assert all(np.all(level == 0.3) for level in pot.values)


def test_rim_edges_carry_rim_value():
    cx = generate_example("disk").complex
    rel = relative_cochain_complex(cx)
    pot = simplex_potential(rel)
    rim = {s for c in detect_boundary(cx) for s in c.simplices}
    rim_value = cx.f(next(iter(next(iter(rim)))))
    vals = [pot[1][i] for i, s in enumerate(rel.basis[1]) if s in rim]
    assert len(vals) == len(rim) and all(v == rim_value for v in vals)


def test_missing_values():
    with pytest.raises(MissingMorseValues):
        simplex_potential(relative_cochain_complex(build_complex([(0, 1)])))


def test_interval_hand_conjugation():
    rel = relative_cochain_complex(edge(0.0, 1.0))
    (d1,) = deformed_coboundary(rel, simplex_potential(rel), 1.0)
    assert d1 == pytest.approx(np.array([[-math.exp(-0.5), math.exp(0.5)]]), rel=1e-15)


def test_s_zero_and_constant_f():
    cx = generate_example("annulus").complex
    rel = relative_cochain_complex(cx)
    plain = [d.toarray() for d in rel.d]
    for got, want in zip(deformed_coboundary(rel, simplex_potential(rel), 0.0), plain):
        assert np.array_equal(got, want)
    flat = cx.with_morse_values({v: 1.5 for v in cx.vertices})
    rel_flat = relative_cochain_complex(flat)
    for s in (1.0, 7.0):
        for got, want in zip(deformed_coboundary(rel_flat, simplex_potential(rel_flat), s), plain):
            assert np.allclose(got, want, rtol=0, atol=1e-14)
        for a, b in zip(deformed_laplacians(rel_flat, s), deformed_laplacians(rel_flat, 0.0)):
            assert np.allclose(a.matrix, b.matrix, atol=1e-13)


@pytest.mark.parametrize("name", ["disk", "annulus", "ball3", "moebius"])
@pytest.mark.parametrize("s", [1.0, 5.0, 25.0])
def test_deformed_dd_zero(name, s):
    rel = relative_cochain_complex(generate_example(name).complex)
    ds = deformed_coboundary(rel, simplex_potential(rel), s)
    for a, b in zip(ds, ds[1:]):
        scale = np.abs(b).max() * np.abs(a).max()
        assert np.abs(b @ a).max() <= 1e-12 * scale


def test_cycle_graph_laplacian():
    m = 7
    cx = build_complex([tuple(sorted((i, (i + 1) % m))) for i in range(m)])
    lap = deformed_laplacians(relative_cochain_complex(cx), 0.0)[0].matrix
    expected = 2 * np.eye(m) - np.roll(np.eye(m), 1, axis=1) - np.roll(np.eye(m), -1, axis=1)
    assert np.array_equal(lap, expected)


def test_disk_top_kernel():
    inst = instance("disk", ("r-",))
    rel = relative_cochain_complex(inst.complex, inst.decomposition)
    lap = deformed_laplacians(rel, 0.0)[2]
    assert kernel_count(np.linalg.eigvalsh(lap.matrix))[0] == 1


@pytest.mark.parametrize("name,labels", [("moebius", ("r-",)), ("moebius", ("a+",)), ("sphere", ()), ("torus", ())])
@pytest.mark.parametrize("s", [0.0, 1.0, 5.0, 25.0])
def test_kernel_matches_betti_extra_shapes(name, labels, s):
    inst = instance(name, labels)
    rel = relative_cochain_complex(inst.complex, inst.decomposition)
    beta = betti(rel)
    for lap in deformed_laplacians(rel, s):
        ev = np.linalg.eigvalsh(lap.matrix)
        count, ambiguous = kernel_count(ev)
        assert count == beta[lap.k] and not ambiguous
        assert ev[0] >= -1e-10 * max(1.0, ev[-1])


@pytest.mark.parametrize("s", [0.0, 5.0, 25.0])
def test_kernel_vectors_are_harmonic(s):
    inst = instance("annulus", ("a+", "a-"))
    rel = relative_cochain_complex(inst.complex, inst.decomposition)
    for lap, b in zip(deformed_laplacians(rel, s), betti(rel)):
        vecs = lap.kernel_basis()
        assert vecs.shape[1] == b
        r_up, r_down = lap.residuals(vecs)
        assert r_up <= 1e-8 and r_down <= 1e-8


def test_volume_weights_keep_kernels():
    inst = instance("ball3", ("a+",))
    rel = relative_cochain_complex(inst.complex, inst.decomposition)
    for lap, b in zip(deformed_laplacians(rel, 5.0, "volume"), betti(rel)):
        assert np.allclose(lap.matrix, lap.matrix.T)
        assert kernel_count(np.linalg.eigvalsh(lap.matrix))[0] == b


def test_errors():
    rel = relative_cochain_complex(edge(0.0, 100.0))
    with pytest.raises(ScaleOverflow):
        deformed_coboundary(rel, simplex_potential(rel), 10.0)
    with pytest.raises(NonpositiveWeight):
        assemble_laplacian([np.array([[-1.0, 1.0]])], [np.array([1.0, 0.0]), np.array([1.0])], 0)
    with pytest.raises(GapAmbiguity):
        kernel_count(np.array([0.0, 1e-9, 5e-7, 1.0]), strict=True)
    assert kernel_count(np.array([0.0, 0.0, 3.0])) == (2, False)

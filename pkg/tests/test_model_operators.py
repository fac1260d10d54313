import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bdmorse.errors import EnergyCapTooSmall, GridTooCoarse, ScheduleTooShort, TruncationTooSmall
from bdmorse.model_operators import (
    CutoffProfile,
    CylinderModelSpec,
    FlatModelSpec,
    OscillatorSpec,
    base_spectra,
    circle_spectrum,
    cylinder_schedule,
    cylinder_trace,
    exact_half_line,
    flat_model_spectrum,
    flat_model_trace,
    ground_overlap,
    oscillator_eigen,
    schedule_verdict,
    side_shift,
)
from bdmorse.spectral import gaussian, heat


@pytest.mark.parametrize("bc,expected", [("neumann", [10, 50, 90]), ("dirichlet", [30, 70, 110])])
def test_oscillator_law(bc, expected):
    vals = oscillator_eigen(OscillatorSpec(10, 3, 4000, bc), 3)
    assert vals == pytest.approx(expected, rel=0.01)


def test_half_line_spectra_interleave_full_line():
    s, length, n = 10.0, 3.0, 300
    full = oracles.fd_full_line(s, length, 2 * n)[:6]
    neu = oscillator_eigen(OscillatorSpec(s, length, n, "neumann"), 3)
    dir_ = oscillator_eigen(OscillatorSpec(s, length, n, "dirichlet"), 3)
    merged = np.sort(np.concatenate([neu, dir_]))
    assert merged == pytest.approx(full, rel=1e-10)
    assert list(np.argsort(np.concatenate([neu, dir_]))) == [0, 3, 1, 4, 2, 5]


@pytest.mark.parametrize("bc", ["neumann", "dirichlet"])
def test_second_order_convergence(bc):
    s = 10.0
    exact = exact_half_line(s, bc, 5)
    coarse = oscillator_eigen(OscillatorSpec(s, 3, 1000, bc), 5)
    fine = oscillator_eigen(OscillatorSpec(s, 3, 2000, bc), 5)
    ratio = np.abs(coarse - exact) / np.abs(fine - exact)
    assert np.all(ratio >= 3.5)


def test_shift_is_additive():
    base = OscillatorSpec(10, 3, 2000, "dirichlet")
    shifted = OscillatorSpec(10, 3, 2000, "dirichlet", eps=1, side="-")
    assert shifted.shift == -10
    assert oscillator_eigen(shifted, 4) == pytest.approx(oscillator_eigen(base, 4) - 10, abs=1e-9)
    assert oscillator_eigen(shifted, 1)[0] == pytest.approx(20, rel=1e-3)


def test_side_conventions():
    s = 3.0
    assert side_shift(s, "+", 0) == -s and side_shift(s, "+", 1) == s
    assert side_shift(s, "-", 0) == s and side_shift(s, "-", 1) == -s


def test_oscillator_errors():
    with pytest.raises(TruncationTooSmall):
        oscillator_eigen(OscillatorSpec(100, 0.5, 4000), 3)
    with pytest.raises(GridTooCoarse):
        oscillator_eigen(OscillatorSpec(10, 3, 50), 3)
    with pytest.raises(ValueError):
        oscillator_eigen(OscillatorSpec(10, 3, 400), 200)


def test_cutoff_profile():
    beta = CutoffProfile(0.5)
    assert beta(0.0) == 1.0 and beta(1.0) == 1.0
    assert beta(1.5) == 0.0 and beta(4.0) == 0.0
    u = np.linspace(0, 2, 401)
    assert np.all(np.diff(beta(u)) <= 0)


def test_overlap_constant_cutoff():
    for s in (0.5, 10.0, 1000.0):
        assert ground_overlap(s, CutoffProfile(kind="constant")) == pytest.approx(1.0, abs=1e-10)


def test_overlap_limit():
    vals = [ground_overlap(s, CutoffProfile(0.5)) for s in (10, 100, 1000)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert abs(vals[-1] - 1) <= 0.02
    for s, v in zip((10, 100, 1000), vals):
        assert v == pytest.approx(oracles.half_line_ground_overlap(s, 0.5), abs=1e-8)


def test_overlap_small_scale_below_one():
    assert ground_overlap(0.5, CutoffProfile(0.5)) < 0.9


def test_flat_spectrum_examples():
    one = FlatModelSpec((-1,), 1, 3.0)
    assert flat_model_spectrum(one, 10)[0].eigenvalue == 0
    zero = FlatModelSpec((-1,), 0, 3.0)
    assert flat_model_spectrum(zero, 10)[0].eigenvalue == 6.0
    two = FlatModelSpec((-1, 1), 1, 1.0)
    modes = flat_model_spectrum(two, 4 * 2 + 4)
    zeros = [m for m in modes if m.eigenvalue == 0]
    assert len(zeros) == 1 and zeros[0].monomial == (0,) and zeros[0].levels == (0, 0)
    with pytest.raises(EnergyCapTooSmall):
        flat_model_spectrum(two, 1.5)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_zero_mode_law(n):
    for signs in itertools.product((-1, 1), repeat=n):
        r = signs.count(-1)
        for k in range(n + 1):
            zeros = [m for m in flat_model_spectrum(FlatModelSpec(signs, k, 1.0), 2.0) if m.eigenvalue == 0]
            assert len(zeros) == (1 if k == r else 0)


@pytest.mark.parametrize("r,k", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_flat_trace_n1(r, k):
    spec = FlatModelSpec.from_index(1, r, k, 200.0)
    trace = flat_model_trace(spec, gaussian(1), path="numeric")
    assert abs(trace - (1 if k == r else 0)) <= 0.05


@pytest.mark.parametrize("k", [0, 1, 2])
def test_flat_trace_n2_analytic(k):
    spec = FlatModelSpec.from_index(2, 1, k, 200.0)
    assert abs(flat_model_trace(spec, gaussian(1)) - (1 if k == 1 else 0)) <= 0.05


@pytest.mark.parametrize("n,r,k", [(1, 0, 0), (1, 1, 1), (2, 1, 1), (2, 0, 1), (2, 2, 2)])
def test_flat_paths_agree(n, r, k):
    spec = FlatModelSpec.from_index(n, r, k, 4.0)
    a = flat_model_trace(spec, heat(0.2), path="analytic")
    b = flat_model_trace(spec, heat(0.2), path="numeric")
    assert a == pytest.approx(b, rel=1e-3, abs=1e-6)


def test_circle_spectrum():
    vals = circle_spectrum(2 * np.pi, 10)
    assert list(vals) == [0, 1, 1, 4, 4, 9, 9]
    spectra = base_spectra("circle", 10)
    assert np.sum(spectra[0] == 0) == 1 and np.sum(spectra[1] == 0) == 1


@pytest.mark.parametrize("cls,limit", [("r+", 0), ("a+", 1), ("r-", 1), ("a-", 0)])
def test_cylinder_limits(cls, limit):
    rows = cylinder_schedule(cls, "circle", 1)
    assert [r.s for r in rows] == [10, 100, 1000]
    assert rows[-1].limit == limit
    assert rows[-1].abs_error <= 0.05
    assert schedule_verdict(rows)
    if limit == 0:
        traces = [r.trace for r in rows]
        assert all(b <= a + 1e-3 for a, b in zip(traces[1:], traces[2:]))


def test_cylinder_over_point():
    # Base a point: only degree 0; a+ at k = 0 keeps the Neumann ground state.
    spec = CylinderModelSpec("a+", base_spectra("point", 1), 0, 1000.0, gaussian(16))
    assert spec.limit == 1
    assert cylinder_trace(spec) == pytest.approx(1, abs=0.05)
    spec = CylinderModelSpec("r-", base_spectra("point", 1), 1, 1000.0, gaussian(16))
    assert cylinder_trace(spec) == pytest.approx(1, abs=0.05)


def test_schedule_errors():
    with pytest.raises(ScheduleTooShort):
        cylinder_schedule("a+", schedule=[(10, 1)])
    with pytest.raises(ValueError):
        CylinderModelSpec("x+", {}, 1, 1.0, gaussian(1))


@settings(max_examples=20, deadline=None)
@given(st.floats(5.0, 60.0), st.sampled_from(["neumann", "dirichlet"]))
def test_oscillator_near_exact(s, bc):
    spec = OscillatorSpec.auto(s, bc)
    assert oscillator_eigen(spec, 3) == pytest.approx(exact_half_line(s, bc, 3), rel=1e-3)

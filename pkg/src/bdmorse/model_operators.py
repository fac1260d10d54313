"""Harmonic-oscillator model operators and their cutoff traces.

Half-line operators -d^2/du^2 + s^2 u^2 (+ shift) are discretized by central
differences on [0, L] with a Dirichlet cap at u = L; the Neumann condition at
u = 0 uses a ghost point, symmetrized so that the discrete inner product is
the trapezoid rule. All traces are computed from actual discrete spectra.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.linalg import eigh_tridiagonal

from .errors import (
    EnergyCapTooSmall,
    GridTooCoarse,
    QuadratureFailure,
    ScheduleTooShort,
    TruncationTooSmall,
)
from .spectral import CountingFunction, gaussian

GRID_RULE = 0.1
DEFAULT_GRID = 0.01
DEFAULT_SCHEDULE = ((10.0, 1.0), (100.0, 4.0), (1000.0, 16.0))


@dataclass(frozen=True)
class CutoffProfile:
    """Cutoff equal to 1 on [0, 2 rho], tapering to 0 on [2 rho, 3 rho].

    ``kind="constant"`` is the function 1 everywhere (no support bound).
    """

    rho: float = 0.5
    kind: str = "smoothstep"

    def __post_init__(self):
        if self.kind not in ("smoothstep", "constant"):
            raise ValueError(f"unknown cutoff kind {self.kind!r}")
        if self.rho <= 0:
            raise ValueError("rho must be positive")

    @property
    def support(self) -> float:
        return math.inf if self.kind == "constant" else 3 * self.rho

    def __call__(self, u):
        u = np.abs(np.asarray(u, dtype=float))
        if self.kind == "constant":
            return np.ones_like(u)
        t = np.clip((u - 2 * self.rho) / self.rho, 0.0, 1.0)
        return 1.0 - t * t * (3.0 - 2.0 * t)


def side_shift(s: float, side: str, eps: int) -> float:
    """Diagonal shift of A_s^eps: (-1)^(eps+1) s on the + side, (-1)^eps s on the - side."""
    if eps not in (0, 1):
        raise ValueError("eps must be 0 or 1")
    if side == "+":
        return (-1) ** (eps + 1) * s
    if side == "-":
        return (-1) ** eps * s
    raise ValueError(f"side must be '+' or '-', got {side!r}")


def truncation_length(s: float, cutoff: CutoffProfile | None = None) -> float:
    length = 8.0 / math.sqrt(s)
    if cutoff is not None and cutoff.kind != "constant":
        length = max(length, 3 * cutoff.rho + 1.0)
    return length


@dataclass(frozen=True)
class OscillatorSpec:
    """Half-line oscillator; ``eps=None`` means no shift."""

    s: float
    L: float
    N: int
    bc: str = "neumann"
    eps: int | None = None
    side: str = "+"

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def shift(self) -> float:
        return 0.0 if self.eps is None else side_shift(self.s, self.side, self.eps)

    def validate(self) -> None:
        if self.s <= 0:
            raise ValueError("oscillator scale must be positive")
        if self.bc not in ("dirichlet", "neumann"):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if self.L < 8.0 / math.sqrt(self.s):
            raise TruncationTooSmall(f"L={self.L} below 8/sqrt(s)={8 / math.sqrt(self.s):.4g}")
        if (self.h * self.s) ** 2 >= GRID_RULE:
            raise GridTooCoarse(f"h^2 s^2 = {(self.h * self.s) ** 2:.3g} >= {GRID_RULE}")

    @classmethod
    def auto(cls, s: float, bc: str, eps: int | None = None, side: str = "+",
             cutoff: CutoffProfile | None = None, grid: float = DEFAULT_GRID) -> "OscillatorSpec":
        """Spec with the default truncation and h^2 s^2 = ``grid``."""
        length = truncation_length(s, cutoff)
        n = int(math.ceil(length * s / math.sqrt(grid)))
        return cls(s, length, n, bc, eps, side)


def _tridiagonal(spec: OscillatorSpec):
    h = spec.h
    if spec.bc == "dirichlet":
        u = h * np.arange(1, spec.N)
    else:
        u = h * np.arange(0, spec.N)
    diag = 2.0 / h**2 + spec.s**2 * u**2 + spec.shift
    off = np.full(u.size - 1, -1.0 / h**2)
    if spec.bc == "neumann":
        off[0] = -math.sqrt(2.0) / h**2
    return u, diag, off


def oscillator_modes(spec: OscillatorSpec, count: int | None = None, upper: float | None = None):
    """Lowest eigenpairs (values, vectors, grid) of the discretized operator.

    Either the ``count`` smallest or all with eigenvalue <= ``upper``.
    """
    spec.validate()
    u, diag, off = _tridiagonal(spec)
    if count is not None:
        if count > spec.N / 4:
            raise ValueError(f"count {count} exceeds N/4 = {spec.N / 4:g}")
        vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    else:
        vals, vecs = eigh_tridiagonal(diag, off, select="v", select_range=(-np.inf, upper))
    return vals, vecs, u


def oscillator_eigen(spec: OscillatorSpec, count: int) -> np.ndarray:
    """The ``count`` lowest eigenvalues, shift included."""
    vals, _, _ = oscillator_modes(spec, count=count)
    return vals


def exact_half_line(s: float, bc: str, count: int, shift: float = 0.0) -> np.ndarray:
    """(2p+1)s over even p (Neumann) or odd p (Dirichlet), plus ``shift``."""
    start = 0 if bc == "neumann" else 1
    return np.array([(2 * p + 1) * s + shift for p in range(start, start + 2 * count, 2)])


def ground_overlap(s: float, cutoff: CutoffProfile) -> float:
    """Integral over u >= 0 of cutoff(u) times the squared half-line ground state.

    The ground state (4s/pi)^(1/4) exp(-s u^2 / 2) has unit norm on the half line.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    root = math.sqrt(s)

    def integrand(x):
        return float(cutoff(x / root)) * 2.0 / math.sqrt(math.pi) * math.exp(-x * x)

    # The integrand is below 1e-300 past x = 27, so the range is capped at 40.
    upper = min(cutoff.support * root, 40.0)
    knee = 2 * cutoff.rho * root
    points = [knee] if knee < upper else None
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(integrand, 0.0, upper, points=points, epsabs=1e-14, epsrel=1e-12, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(str(exc)) from exc
    if err > 1e-8:
        raise QuadratureFailure(f"quadrature error estimate {err:.2e}")
    return val


def hermite_functions(x: np.ndarray, pmax: int) -> np.ndarray:
    """Orthonormal Hermite functions psi_0..psi_pmax at x (unit scale), by recurrence."""
    out = np.zeros((pmax + 1, x.size))
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if pmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for p in range(1, pmax):
        out[p + 1] = math.sqrt(2.0 / (p + 1)) * x * out[p] - math.sqrt(p / (p + 1)) * out[p - 1]
    return out


def full_line_overlaps(s: float, cutoff: CutoffProfile, pmax: int, nodes: int = 4001) -> np.ndarray:
    """<cutoff theta_p, theta_p> over the real line for p = 0..pmax (Simpson rule).

    theta_p(s, u) = s^(1/4) psi_p(sqrt(s) u), so the integral is taken in x = sqrt(s) u.
    """
    root = math.sqrt(s)
    reach = math.sqrt(2 * pmax + 1) + 12.0
    if math.isfinite(cutoff.support):
        reach = min(reach, cutoff.support * root)
    x = np.linspace(-reach, reach, nodes)
    psi = hermite_functions(x, pmax)
    weight = cutoff(x / root)
    return integrate.simpson(psi**2 * weight, x=x, axis=1)


@dataclass(frozen=True)
class FlatModelSpec:
    """Flat model L_s^k = sum_j -d^2/dx_j^2 + s^2 x_j^2 + s eps_j Z_j on k-forms of R^n."""

    signs: tuple[int, ...]
    k: int
    s: float

    def __post_init__(self):
        if any(e not in (-1, 1) for e in self.signs):
            raise ValueError("signs must be +1 or -1")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"form degree {self.k} out of range for n={self.n}")

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def index(self) -> int:
        return sum(1 for e in self.signs if e == -1)

    @classmethod
    def from_index(cls, n: int, r: int, k: int, s: float) -> "FlatModelSpec":
        if not 0 <= r <= n:
            raise ValueError(f"Morse index {r} out of range for n={n}")
        return cls(tuple([-1] * r + [1] * (n - r)), k, s)


@dataclass(frozen=True)
class FlatMode:
    eigenvalue: float
    levels: tuple[int, ...]
    monomial: tuple[int, ...]


def flat_model_spectrum(spec: FlatModelSpec, cap: float) -> list[FlatMode]:
    """Analytic eigenvalues sum_j (2 p_j + 1) s + s eps_j zeta_j up to ``cap``.

    zeta_j is +1 when dx_j occurs in the monomial and -1 otherwise.
    """
    if spec.n > 8:
        raise ValueError("flat model enumeration supports n <= 8")
    s = spec.s
    if cap < 2 * s:
        raise EnergyCapTooSmall(f"cap {cap} below the first excitation 2s = {2 * s}")
    out = []
    pmax = int(cap // (2 * s)) + 1
    for mono in itertools.combinations(range(spec.n), spec.k):
        inside = set(mono)
        base = [s + s * e * (1 if j in inside else -1) for j, e in enumerate(spec.signs)]
        for levels in itertools.product(range(pmax + 1), repeat=spec.n):
            lam = sum(b + 2 * p * s for b, p in zip(base, levels))
            if lam <= cap:
                out.append(FlatMode(lam, levels, mono))
    out.sort(key=lambda m: (m.eigenvalue, m.monomial, m.levels))
    return out


def _full_line_fd(s: float, cutoff: CutoffProfile, upper: float, grid: float = DEFAULT_GRID):
    """FD eigenpairs of -d^2/dx^2 + s^2 x^2 on [-L, L], eigenvalues <= upper, with overlaps."""
    length = truncation_length(s, cutoff)
    n = int(math.ceil(2 * length * s / math.sqrt(grid)))
    h = 2 * length / n
    x = -length + h * np.arange(1, n)
    diag = 2.0 / h**2 + s**2 * x**2
    off = np.full(x.size - 1, -1.0 / h**2)
    vals, vecs = eigh_tridiagonal(diag, off, select="v", select_range=(-np.inf, upper))
    weights = (vecs**2 * cutoff(x)[:, None]).sum(axis=0)
    return vals, weights


def flat_model_trace(
    spec: FlatModelSpec,
    phi: CountingFunction,
    cutoff: CutoffProfile | None = None,
    path: str = "analytic",
) -> float:
    """Tr(cutoff * phi(L_s^k)) for the flat model.

    ``path="numeric"`` (n <= 2) tensorizes 1D finite-difference eigenpairs;
    ``path="analytic"`` uses the enumerated spectrum with Hermite overlaps.
    """
    cutoff = cutoff or CutoffProfile()
    s = spec.s
    reach = phi.negligible_beyond()
    if path == "analytic":
        modes = flat_model_spectrum(spec, max(reach, 2 * s))
        modes = [m for m in modes if m.eigenvalue <= reach]
        if not modes:
            return 0.0
        pmax = max(max(m.levels) for m in modes)
        ov = full_line_overlaps(s, cutoff, pmax)
        return float(sum(phi(m.eigenvalue) * np.prod([ov[p] for p in m.levels]) for m in modes))
    if path != "numeric":
        raise ValueError(f"unknown path {path!r}")
    if spec.n > 2:
        raise ValueError("numeric grid path supports n <= 2")
    vals, weights = _full_line_fd(s, cutoff, reach + spec.n * s)
    total = 0.0
    for mono in itertools.combinations(range(spec.n), spec.k):
        inside = set(mono)
        shifts = [s * e * (1 if j in inside else -1) for j, e in enumerate(spec.signs)]
        for combo in itertools.product(range(vals.size), repeat=spec.n):
            lam = sum(vals[i] + sh for i, sh in zip(combo, shifts))
            total += float(phi(lam)) * float(np.prod([weights[i] for i in combo]))
    return total


def circle_spectrum(length: float = 2 * math.pi, upper: float = 1e3) -> np.ndarray:
    """Laplacian eigenvalues (2 pi j / length)^2, j in Z, up to ``upper``."""
    jmax = int(math.floor(math.sqrt(upper) * length / (2 * math.pi)))
    vals = [0.0] + [(2 * math.pi * j / length) ** 2 for j in range(1, jmax + 1) for _ in range(2)]
    return np.array(vals)


def base_spectra(base: str, upper: float, length: float = 2 * math.pi) -> dict[int, np.ndarray]:
    """Base-manifold spectra by degree for the bundled bases "circle" and "point"."""
    if base == "circle":
        vals = circle_spectrum(length, upper)
        return {0: vals, 1: vals.copy()}
    if base == "point":
        return {0: np.array([0.0])}
    raise ValueError(f"unknown base {base!r}")


@dataclass
class CylinderModelSpec:
    cls: str
    base: dict[int, np.ndarray]
    k: int
    s: float
    phi: CountingFunction
    cutoff: CutoffProfile = field(default_factory=CutoffProfile)

    def __post_init__(self):
        if self.cls not in ("r+", "a+", "r-", "a-"):
            raise ValueError(f"unknown boundary class {self.cls!r}")
        for vals in self.base.values():
            if np.any(np.asarray(vals) < 0):
                raise ValueError("base spectra must be non-negative")

    def base_degree(self, j: int) -> np.ndarray:
        return np.sort(np.asarray(self.base.get(j, np.zeros(0)), dtype=float))

    @property
    def limit(self) -> int:
        """0 for r+ and a-, eta_k for a+, gamma_{k-1} for r-."""
        zero = lambda v: int(np.sum(v <= 1e-12))
        if self.cls == "a+":
            return zero(self.base_degree(self.k))
        if self.cls == "r-":
            return zero(self.base_degree(self.k - 1))
        return 0


def cylinder_components(cls: str) -> list[tuple[int, str]]:
    """(eps, boundary condition) for the tangential (eps=0) and normal (eps=1) parts."""
    rel = cls[0] == "r"
    return [(0, "dirichlet" if rel else "neumann"), (1, "neumann" if rel else "dirichlet")]


def cylinder_trace(spec: CylinderModelSpec, grid: float = DEFAULT_GRID) -> float:
    """Tr(cutoff * phi(L_s^k)) on the half cylinder over the base.

    Sums phi(a_i + lambda_j) <cutoff v_i, v_i> over the FD modes v_i of the
    shifted half-line operator and the base eigenvalues lambda_j.
    """
    side = spec.cls[1]
    reach = spec.phi.negligible_beyond()
    total = 0.0
    for eps, bc in cylinder_components(spec.cls):
        lam_base = spec.base_degree(spec.k - eps)
        if lam_base.size == 0:
            continue
        osc = OscillatorSpec.auto(spec.s, bc, eps, side, spec.cutoff, grid)
        vals, vecs, u = oscillator_modes(osc, upper=reach + abs(osc.shift))
        if vals.size == 0:
            continue
        weights = (vecs**2 * spec.cutoff(u)[:, None]).sum(axis=0)
        args = vals[:, None] + lam_base[None, :]
        total += float(np.sum(spec.phi(args) * weights[:, None]))
    return total


@dataclass
class ScheduleRow:
    cls: str
    k: int
    s: float
    m: float
    trace: float
    limit: int

    @property
    def abs_error(self) -> float:
        return abs(self.trace - self.limit)


def cylinder_schedule(
    cls: str,
    base: str = "circle",
    k: int = 1,
    schedule: Sequence[tuple[float, float]] = DEFAULT_SCHEDULE,
    cutoff: CutoffProfile | None = None,
    circle_length: float = 2 * math.pi,
) -> list[ScheduleRow]:
    """cylinder_trace along an (s, m) schedule with gaussian(m) counting functions."""
    if len(schedule) < 2:
        raise ScheduleTooShort("a limit verdict needs at least two schedule points")
    cutoff = cutoff or CutoffProfile()
    rows = []
    for s, m in schedule:
        phi = gaussian(m)
        spectra = base_spectra(base, phi.negligible_beyond(), circle_length)
        spec = CylinderModelSpec(cls, spectra, k, s, phi, cutoff)
        rows.append(ScheduleRow(cls, k, s, m, cylinder_trace(spec), spec.limit))
    return rows


def schedule_verdict(rows: Sequence[ScheduleRow], tol: float = 0.05) -> bool:
    return rows[-1].abs_error <= tol

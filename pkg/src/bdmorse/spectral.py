"""Eigenvalue computation, kernel extraction and spectral counting functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import ClusterAmbiguity, ConvergenceFailure, RequiresFullSpectrum
from .witten_operator import KERNEL_RTOL, kernel_count

DENSE_CAP = 3000
CLUSTER_RTOL = 1e-6


@dataclass
class SpectrumReport:
    degree: int | None
    s: float | None
    eigenvalues: np.ndarray
    mode: str
    kernel_tol: float
    kernel_dim: int
    gap_ambiguous: bool = False
    size: int = 0

    @property
    def full(self) -> bool:
        return self.mode == "dense"


def eigensolve(
    matrix: np.ndarray,
    mode: str = "dense",
    p: int | None = None,
    tol: float = 1e-10,
    degree: int | None = None,
    s: float | None = None,
    maxiter: int | None = None,
) -> SpectrumReport:
    """Spectrum of a symmetric matrix.

    ``mode="dense"`` returns every eigenvalue; ``mode="lowest"`` returns the
    ``p`` smallest through implicitly restarted Lanczos (ARPACK) and checks
    that each residual is at most ``tol * max(1, ||A||)``.
    """
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if mode == "dense":
        if n > DENSE_CAP:
            raise ValueError(f"dense mode is capped at {DENSE_CAP}, matrix has size {n}")
        ev = scipy.linalg.eigvalsh(a) if n else np.zeros(0)
    elif mode == "lowest":
        if p is None or p < 1:
            raise ValueError("lowest mode needs p >= 1")
        p = min(p, n)
        if n == 0:
            ev = np.zeros(0)
        elif p >= n - 1:
            # ARPACK needs p < n - 1; the Krylov space is then the whole space.
            ev = scipy.linalg.eigvalsh(a)[:p]
        else:
            scale = max(1.0, float(np.linalg.norm(a, 2)))
            try:
                vals, vecs = eigsh(a, k=p, which="SA", tol=tol / 10, maxiter=maxiter)
            except ArpackNoConvergence as exc:
                res = np.inf
                if exc.eigenvalues is not None and len(exc.eigenvalues):
                    r = a @ exc.eigenvectors - exc.eigenvectors * exc.eigenvalues
                    res = float(np.max(np.linalg.norm(r, axis=0)) / scale)
                raise ConvergenceFailure("Lanczos iteration cap exceeded", res) from exc
            order = np.argsort(vals)
            vals, vecs = vals[order], vecs[:, order]
            res = float(np.max(np.linalg.norm(a @ vecs - vecs * vals, axis=0)) / scale)
            if res > tol:
                raise ConvergenceFailure("Lanczos residual above tolerance", res)
            ev = vals
    else:
        raise ValueError(f"unknown solver mode {mode!r}")
    ev = np.sort(ev)
    if mode == "dense":
        kdim, amb = kernel_count(ev)
        lam_max = max(1.0, float(ev[-1])) if ev.size else 1.0
    else:
        lam_max = max(1.0, float(np.linalg.norm(a, 2))) if n else 1.0
        kdim = int(np.sum(ev <= KERNEL_RTOL * lam_max))
        amb = False
    return SpectrumReport(degree, s, ev, mode, KERNEL_RTOL * lam_max, kdim, bool(amb), n)


@dataclass(frozen=True)
class CountingFunction:
    """phi(lambda) = exp(-t lambda) ("heat") or exp(-m lambda**2) ("gaussian")."""

    family: str
    parameter: float

    def __post_init__(self):
        if self.family not in ("heat", "gaussian"):
            raise ValueError(f"unknown counting family {self.family!r}")
        if not self.parameter > 0:
            raise ValueError("counting-function parameter must be positive")

    def __call__(self, lam):
        lam = np.maximum(np.asarray(lam, dtype=float), 0.0)
        if self.family == "heat":
            return np.exp(-self.parameter * lam)
        return np.exp(-self.parameter * lam * lam)

    def negligible_beyond(self, eps: float = 1e-17) -> float:
        """A lambda past which phi < eps."""
        cut = -math.log(eps)
        if self.family == "heat":
            return cut / self.parameter
        return math.sqrt(cut / self.parameter)

    @classmethod
    def parse(cls, text: str) -> "CountingFunction":
        family, _, value = text.partition(":")
        if not value:
            raise ValueError(f"counting function {text!r} must look like heat:<t> or gaussian:<m>")
        return cls(family.strip(), float(value))

    def __str__(self) -> str:
        return f"{self.family}:{self.parameter:g}"


def heat(t: float) -> CountingFunction:
    return CountingFunction("heat", t)


def gaussian(m: float) -> CountingFunction:
    return CountingFunction("gaussian", m)


def nu(spectrum: SpectrumReport, phi: CountingFunction) -> float:
    """Tr phi(Delta) = sum of phi over the full spectrum."""
    if not spectrum.full:
        raise RequiresFullSpectrum("counting function needs the dense spectrum")
    return float(np.sum(phi(spectrum.eigenvalues)))


@dataclass
class EigenCluster:
    value: float
    multiplicities: dict[int, int] = field(default_factory=dict)

    @property
    def alternating_sum(self) -> int:
        return sum((-1) ** k * m for k, m in self.multiplicities.items())


def multiplicity_alternation(
    spectra: Sequence[SpectrumReport], tol: float = CLUSTER_RTOL
) -> list[EigenCluster]:
    """Cluster nonzero eigenvalues across degrees and tally multiplicities.

    Single-linkage clustering: consecutive sorted values join when their gap
    is at most ``tol`` times the larger one. A chain whose total spread
    reaches 100 * tol cannot be separated and raises ClusterAmbiguity.
    """
    tagged = []
    for rep in spectra:
        if not rep.full:
            raise RequiresFullSpectrum("multiplicity alternation needs dense spectra")
        for lam in rep.eigenvalues[rep.kernel_dim:]:
            tagged.append((float(lam), rep.degree))
    tagged.sort()
    clusters: list[list[tuple[float, int]]] = []
    for lam, k in tagged:
        if clusters and lam - clusters[-1][-1][0] <= tol * abs(lam):
            clusters[-1].append((lam, k))
        else:
            clusters.append([(lam, k)])
    out = []
    for group in clusters:
        lo, hi = group[0][0], group[-1][0]
        if hi - lo > 100 * tol * abs(hi):
            raise ClusterAmbiguity(f"eigenvalue chain [{lo:.6g}, {hi:.6g}] exceeds separation tolerance")
        mult: dict[int, int] = {}
        for _, k in group:
            mult[k] = mult.get(k, 0) + 1
        out.append(EigenCluster(float(np.mean([x for x, _ in group])), dict(sorted(mult.items()))))
    return out


def spectrum_rows(report: SpectrumReport) -> list[tuple]:
    """CSV rows (degree, s, index, eigenvalue)."""
    return [(report.degree, report.s, i, float(lam)) for i, lam in enumerate(report.eigenvalues)]

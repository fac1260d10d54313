"""Witten-deformed coboundaries and Hodge Laplacians on relative cochains.

The deformation d_s = exp(-s f) d exp(s f) is realized per degree as
E_{-s}^{(k+1)} d^k E_s^{(k)} with E_s diagonal in exp(s f_hat(sigma)),
where f_hat is the vertex mean of f over a simplex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cohomology import RelativeCochainComplex
from .errors import GapAmbiguity, MissingMorseValues, NonpositiveWeight, ScaleOverflow

MAX_EXPONENT = 300.0
KERNEL_RTOL = 1e-8
KERNEL_GAP = 1e3


@dataclass(frozen=True)
class SimplexPotential:
    values: list[np.ndarray]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.values[k]


def simplex_potential(rel: RelativeCochainComplex) -> SimplexPotential:
    cx = rel.complex
    if not cx.has_morse_values:
        raise MissingMorseValues("simplex potential needs vertex Morse values")
    fv = {v: cx.f(v) for v in cx.vertices}
    return SimplexPotential(
        [np.array([np.mean([fv[v] for v in s]) for s in level], dtype=float) for level in rel.basis]
    )


def deformed_coboundary(rel: RelativeCochainComplex, potential: SimplexPotential, s: float) -> list[np.ndarray]:
    """Dense d_s^k for k = 0..n-1; entry (tau, sigma) is d[tau, sigma] exp(s (f(sigma) - f(tau)))."""
    if s < 0:
        raise ValueError("deformation scale must be non-negative")
    for vals in potential.values:
        if vals.size and s * np.max(np.abs(vals)) > MAX_EXPONENT:
            raise ScaleOverflow(f"|s f| exceeds {MAX_EXPONENT} at s={s}")
    out = []
    for k, d in enumerate(rel.d):
        dense = d.toarray().astype(float)
        if s != 0 and dense.size:
            dense *= np.exp(s * (potential[k][None, :] - potential[k + 1][:, None]))
        out.append(dense)
    return out


def volume_weights(rel: RelativeCochainComplex) -> list[np.ndarray]:
    """Per-simplex weight = number of top simplices containing it."""
    out = []
    tops = [frozenset(t) for t in rel.complex.top_simplices]
    for level in rel.basis:
        out.append(np.array([sum(1 for t in tops if t.issuperset(s)) for s in level], dtype=float))
    return out


@dataclass
class DeformedLaplacian:
    """Symmetric realization W^{1/2} Delta_s^k W^{-1/2} of the deformed Laplacian.

    ``down`` is the weighted d_s^{k-1} (into degree k) and ``up`` the weighted
    d_s^k (out of degree k), so that matrix = down down^T + up^T up.
    """

    k: int
    s: float
    matrix: np.ndarray
    down: np.ndarray
    up: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def kernel_basis(self, tol: float | None = None) -> np.ndarray:
        """Orthonormal basis of ker(up) intersected with ker(down^T), by SVD."""
        stacked = np.vstack([self.up, self.down.T])
        n = self.size
        if n == 0:
            return np.zeros((0, 0))
        if stacked.shape[0] == 0:
            return np.eye(n)
        _, sv, vt = np.linalg.svd(stacked, full_matrices=True)
        scale = sv[0] if sv.size else 0.0
        cut = (tol if tol is not None else np.sqrt(KERNEL_RTOL)) * max(1.0, scale)
        rank = int(np.sum(sv > cut))
        return vt[rank:].T.copy()

    def residuals(self, vectors: np.ndarray) -> tuple[float, float]:
        """Largest relative ||d_s v|| and ||delta_s v|| over the given columns."""
        if vectors.size == 0:
            return 0.0, 0.0
        norms = np.linalg.norm(vectors, axis=0)
        r_up = np.linalg.norm(self.up @ vectors, axis=0) / norms if self.up.size else np.zeros_like(norms)
        r_dn = np.linalg.norm(self.down.T @ vectors, axis=0) / norms if self.down.size else np.zeros_like(norms)
        return float(np.max(r_up, initial=0.0)), float(np.max(r_dn, initial=0.0))


def assemble_laplacian(
    d_s: list[np.ndarray],
    weights: list[np.ndarray] | None,
    k: int,
    sizes: list[int] | None = None,
) -> DeformedLaplacian:
    """Assemble Delta_s^k = d_s delta_s + delta_s d_s, delta_s the W-adjoint of d_s.

    ``sizes`` gives the number of basis simplices per degree; it is inferred
    from ``d_s`` when every block is non-empty.
    """
    if sizes is None:
        sizes = [m.shape[1] for m in d_s] + ([d_s[-1].shape[0]] if d_s else [])
    n = len(sizes) - 1
    if weights is None:
        weights = [np.ones(m) for m in sizes]
    for w in weights:
        if w.size and np.any(w <= 0):
            raise NonpositiveWeight("weights must be strictly positive")
    root = [np.sqrt(w) for w in weights]
    if k > 0:
        down = root[k][:, None] * d_s[k - 1] / root[k - 1][None, :]
    else:
        down = np.zeros((sizes[k], 0))
    if k < n:
        up = root[k + 1][:, None] * d_s[k] / root[k][None, :]
    else:
        up = np.zeros((0, sizes[k]))
    mat = down @ down.T + up.T @ up
    mat = 0.5 * (mat + mat.T)
    return DeformedLaplacian(k, 0.0, mat, down, up)


def deformed_laplacians(
    rel: RelativeCochainComplex, s: float, weight_mode: str = "unit"
) -> list[DeformedLaplacian]:
    """Delta_s^k for every degree of ``rel``."""
    pot = simplex_potential(rel) if s != 0 else None
    if pot is None:
        d_s = [d.toarray().astype(float) for d in rel.d]
    else:
        d_s = deformed_coboundary(rel, pot, s)
    sizes = [len(b) for b in rel.basis]
    if weight_mode == "unit":
        weights = None
    elif weight_mode == "volume":
        weights = volume_weights(rel)
    else:
        raise ValueError(f"unknown weight mode {weight_mode!r}")
    out = []
    for k in range(rel.dimension + 1):
        lap = assemble_laplacian(d_s, weights, k, sizes)
        lap.s = s
        out.append(lap)
    return out


def kernel_count(eigenvalues: np.ndarray, strict: bool = False) -> tuple[int, bool]:
    """Count of eigenvalues under the kernel rule, plus a gap-ambiguity flag.

    An eigenvalue is zero when it is at most 1e-8 max(1, lambda_max); the first
    retained eigenvalue must exceed the largest zero one by a factor 1e3.
    """
    ev = np.sort(np.asarray(eigenvalues, dtype=float))
    if ev.size == 0:
        return 0, False
    lam_max = max(1.0, float(ev[-1]))
    zero = ev <= KERNEL_RTOL * lam_max
    count = int(np.sum(zero))
    ambiguous = False
    if 0 < count < ev.size:
        floor = np.finfo(float).eps * lam_max
        last_zero = max(abs(float(ev[count - 1])), floor)
        ambiguous = float(ev[count]) < KERNEL_GAP * last_zero
    if ambiguous and strict:
        raise GapAmbiguity(f"spectral gap below {KERNEL_GAP:g} at kernel edge")
    return count, ambiguous

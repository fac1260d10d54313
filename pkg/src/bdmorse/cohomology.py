"""Exact rational cohomology of relative cochain complexes and boundary pieces.

Ranks are computed by sparse fraction-free integer elimination and checked
against elimination over a random prime field p >= 2**31.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
import sympy

from .complex_core import BoundaryDecomposition, SimplicialComplex, Simplex
from .errors import RankDisagreement

log = logging.getLogger(__name__)

BettiVector = tuple[int, ...]

_rng = random.Random(0)


def seed_prime_choice(seed: int) -> None:
    """Reseed the generator used to draw verification primes."""
    global _rng
    _rng = random.Random(seed)
    log.info("prime-field rank check seeded with %d", seed)


def _draw_prime() -> int:
    p = int(sympy.nextprime(_rng.randrange(2**31, 2**32)))
    log.debug("rank cross-check prime %d", p)
    return p


@dataclass
class RelativeCochainComplex:
    """Cochains vanishing on the relative boundary part N_r.

    ``basis[k]`` are the k-simplices outside the closure of N_r; ``d[k]`` is
    the integer coboundary from degree k to k+1 restricted to those bases.
    """

    complex: SimplicialComplex
    basis: list[list[Simplex]]
    d: list[sp.csr_matrix]
    deleted: frozenset[Simplex]

    @property
    def dimension(self) -> int:
        return self.complex.dimension

    def dim(self, k: int) -> int:
        if 0 <= k <= self.dimension:
            return len(self.basis[k])
        return 0

    def check_dd_zero(self) -> bool:
        for k in range(len(self.d) - 1):
            prod = (self.d[k + 1] @ self.d[k]).tocoo()
            if prod.nnz and np.any(prod.data != 0):
                return False
        return True


def _coboundary(rows: Sequence[Simplex], cols: Sequence[Simplex]) -> sp.csr_matrix:
    col_index = {s: i for i, s in enumerate(cols)}
    r, c, v = [], [], []
    for i, tau in enumerate(rows):
        for j in range(len(tau)):
            face = tau[:j] + tau[j + 1:]
            idx = col_index.get(face)
            if idx is not None:
                r.append(i)
                c.append(idx)
                v.append(-1 if j % 2 else 1)
    return sp.csr_matrix((np.array(v, dtype=np.int64), (r, c)), shape=(len(rows), len(cols)))


def relative_cochain_complex(
    cx: SimplicialComplex, decomposition: BoundaryDecomposition | None = None
) -> RelativeCochainComplex:
    deleted = frozenset(decomposition.relative_part) if decomposition is not None else frozenset()
    basis = [[s for s in level if s not in deleted] for level in cx.simplices]
    d = [_coboundary(basis[k + 1], basis[k]) for k in range(cx.dimension)]
    return RelativeCochainComplex(cx, basis, d, deleted)


def _rows_from_matrix(matrix) -> list[dict[int, int]]:
    """Integer rows of ``matrix``; rational rows are cleared of denominators."""
    if sp.issparse(matrix):
        m = matrix.tocsr()
        rows = []
        for i in range(m.shape[0]):
            start, stop = m.indptr[i], m.indptr[i + 1]
            rows.append({int(j): m.data[t] for j, t in zip(m.indices[start:stop], range(start, stop))})
    else:
        arr = matrix if isinstance(matrix, np.ndarray) else np.array(matrix, dtype=object)
        if arr.ndim != 2:
            arr = arr.reshape(len(arr), -1) if arr.size else np.zeros((0, 0), dtype=object)
        rows = [{j: x for j, x in enumerate(row) if x != 0} for row in arr]
    out = []
    for row in rows:
        fr = {j: Fraction(x) if not isinstance(x, (int, np.integer)) else Fraction(int(x)) for j, x in row.items()}
        fr = {j: x for j, x in fr.items() if x != 0}
        if not fr:
            out.append({})
            continue
        den = lcm(*(x.denominator for x in fr.values()))
        out.append({j: int(x * den) for j, x in fr.items()})
    return out


def _eliminate(rows: list[dict[int, int]], combine) -> int:
    """Sparse Gaussian elimination with Markowitz-style pivoting; returns the rank.

    ``combine(pivot_row, pivot_value, row, row_value)`` returns ``row`` with
    its entry in the pivot column eliminated.
    """
    live = {i: r for i, r in enumerate(rows) if r}
    by_col: dict[int, set[int]] = {}
    for i, r in live.items():
        for j in r:
            by_col.setdefault(j, set()).add(i)
    rank = 0
    while live:
        pi = min(live, key=lambda i: (len(live[i]), i))
        prow = live.pop(pi)
        pc = min(prow, key=lambda j: (abs(prow[j]) != 1, len(by_col[j]), j))
        pval = prow[pc]
        for j in prow:
            by_col[j].discard(pi)
        for i in sorted(by_col.get(pc, ())):
            row = live[i]
            for j in row:
                by_col[j].discard(i)
            new = combine(prow, pval, row, row[pc])
            if new:
                live[i] = new
                for j in new:
                    by_col.setdefault(j, set()).add(i)
            else:
                del live[i]
        rank += 1
    return rank


def _combine_integer(prow, pval, row, rval):
    g = gcd(pval, rval)
    a, b = pval // g, rval // g
    out = {j: a * x for j, x in row.items()}
    for j, x in prow.items():
        y = out.get(j, 0) - b * x
        if y:
            out[j] = y
        else:
            out.pop(j, None)
    if out:
        c = gcd(*out.values())
        if c > 1:
            out = {j: x // c for j, x in out.items()}
    return out


def _rank_mod(rows: list[dict[int, int]], p: int) -> int:
    reduced = []
    for r in rows:
        rr = {j: x % p for j, x in r.items() if x % p}
        reduced.append(rr)

    def combine(prow, pval, row, rval):
        factor = rval * pow(pval, -1, p) % p
        out = dict(row)
        for j, x in prow.items():
            y = (out.get(j, 0) - factor * x) % p
            if y:
                out[j] = y
            else:
                out.pop(j, None)
        return out

    return _eliminate(reduced, combine)


def rank_exact(matrix, check: bool = True) -> int:
    """Exact rank of an integer or rational matrix.

    The result is confirmed over a random prime field; a mismatch draws a
    second prime, and a second mismatch raises RankDisagreement.
    """
    rows = _rows_from_matrix(matrix)
    r = _eliminate([dict(x) for x in rows], _combine_integer)
    if not check or r == 0:
        return r
    for attempt in range(2):
        p = _draw_prime()
        rp = _rank_mod(rows, p)
        if rp == r:
            return r
        log.warning("rank mismatch over GF(%d): exact %d, modular %d", p, r, rp)
    raise RankDisagreement(f"exact rank {r} disagrees with two prime-field ranks")


def betti(rel: RelativeCochainComplex) -> BettiVector:
    n = rel.dimension
    ranks = [rank_exact(m) for m in rel.d]
    out = []
    for k in range(n + 1):
        r_out = ranks[k] if k < n else 0
        r_in = ranks[k - 1] if k > 0 else 0
        out.append(rel.dim(k) - r_out - r_in)
    return tuple(out)


def _closure(maximal: Iterable[Sequence[int]]) -> list[list[Simplex]]:
    faces: dict[int, set[Simplex]] = {}
    for s in maximal:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            faces.setdefault(k - 1, set()).update(itertools.combinations(s, k))
    top = max(faces, default=-1)
    return [sorted(faces.get(k, ())) for k in range(top + 1)]


def betti_of(maximal: Iterable[Sequence[int]], dimension: int) -> BettiVector:
    """Unreduced Betti numbers (degrees 0..dimension) of the closure of ``maximal``."""
    levels = _closure(maximal)
    levels += [[] for _ in range(dimension + 1 - len(levels))]
    ranks = [rank_exact(_coboundary(levels[k + 1], levels[k])) for k in range(dimension)]
    out = []
    for k in range(dimension + 1):
        r_out = ranks[k] if k < dimension else 0
        r_in = ranks[k - 1] if k > 0 else 0
        out.append(len(levels[k]) - r_out - r_in)
    return tuple(out)


def reduced_betti_of(maximal: Iterable[Sequence[int]], max_degree: int) -> list[int]:
    """Reduced Betti numbers in degrees -1..max_degree.

    The empty complex has reduced homology of rank 1 in degree -1.
    """
    maximal = [tuple(s) for s in maximal if len(s)]
    if not maximal:
        return [1] + [0] * (max_degree + 1)
    b = list(betti_of(maximal, max_degree))
    b[0] -= 1
    return [0] + b


def boundary_betti(cx: SimplicialComplex, decomposition: BoundaryDecomposition) -> tuple[BettiVector, BettiVector]:
    """(gamma, eta): Betti numbers of N_{r-} and of N_{a+}, each of length n."""
    m = cx.dimension - 1

    def piece(cls: str) -> BettiVector:
        facets = [s for comp in decomposition.of_class(cls) for s in comp.simplices]
        if not facets:
            return (0,) * (m + 1)
        return betti_of(facets, m)

    return piece("r-"), piece("a+")


def euler(obj, mode: str = "betti-sum") -> int:
    """Euler characteristic of a Betti vector, complex or relative complex.

    ``mode`` is "betti-sum" or "simplex-count"; a relative complex counts only
    its retained simplices in simplex-count mode.
    """
    if mode not in ("betti-sum", "simplex-count"):
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(obj, SimplicialComplex):
        obj = relative_cochain_complex(obj)
    if isinstance(obj, RelativeCochainComplex):
        if mode == "simplex-count":
            return sum((-1) ** k * len(b) for k, b in enumerate(obj.basis))
        obj = betti(obj)
    elif mode == "simplex-count":
        raise ValueError("simplex-count mode needs a complex")
    return sum((-1) ** k * int(b) for k, b in enumerate(obj))

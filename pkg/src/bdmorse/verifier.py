"""Morse inequalities, Euler and parity relations, duality and spectral checks.

Integer checks are exact. Floating checks use ``ANALYTIC_RTOL`` relative to
max(1, |lhs|, |rhs|). Every boolean in a report can be recomputed from the
numbers stored beside it, which ``VerificationReport.recheck`` does.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .cohomology import betti, betti_of, boundary_betti, euler, relative_cochain_complex
from .complex_core import (
    BoundaryDecomposition,
    SimplicialComplex,
    assign_labels,
    detect_boundary,
    orientation,
)
from .errors import ClusterAmbiguity, LengthMismatch, NotOddDimensional
from .instances import Instance
from .morse_data import mu_vector
from .spectral import CountingFunction, eigensolve, multiplicity_alternation, nu
from .witten_operator import deformed_laplacians

ANALYTIC_RTOL = 1e-8
CLUSTER_TOL = 1e-6


def alternating_sums(seq: Sequence) -> list:
    """x_k - x_{k-1} + ... +- x_0 for every k."""
    out, acc = [], 0
    for x in seq:
        acc = x - acc
        out.append(acc)
    return out


def _float_scale(lhs: float, rhs: float) -> float:
    return ANALYTIC_RTOL * max(1.0, abs(lhs), abs(rhs))


def _entry(k, lhs, rhs, top, exact=True) -> dict:
    if exact:
        holds = lhs >= rhs
        eq = lhs == rhs
    else:
        tol = _float_scale(lhs, rhs)
        holds = lhs >= rhs - tol
        eq = abs(lhs - rhs) <= tol
    return {"k": k, "lhs": lhs, "rhs": rhs, "holds": bool(holds),
            "equality_required": top, "equality_holds": bool(eq)}


def _chain_ok(entries: Sequence[dict]) -> bool:
    return all(e["holds"] and (e["equality_holds"] or not e["equality_required"]) for e in entries)


def check_morse_inequalities(mu: Sequence[int], beta: Sequence[int]) -> list[dict]:
    """Alternating sums of mu against those of beta; equality required at k = n."""
    if len(mu) != len(beta):
        raise LengthMismatch(f"mu has length {len(mu)}, beta has length {len(beta)}")
    n = len(mu) - 1
    lhs, rhs = alternating_sums([int(x) for x in mu]), alternating_sums([int(x) for x in beta])
    return [_entry(k, lhs[k], rhs[k], k == n) for k in range(n + 1)]


def check_analytic_inequalities(nus: Sequence[float], beta: Sequence[int]) -> list[dict]:
    """Alternating sums of nu_k(s) against those of beta, to ANALYTIC_RTOL."""
    if len(nus) != len(beta):
        raise LengthMismatch(f"nu has length {len(nus)}, beta has length {len(beta)}")
    n = len(nus) - 1
    lhs, rhs = alternating_sums([float(x) for x in nus]), alternating_sums([int(x) for x in beta])
    return [_entry(k, lhs[k], rhs[k], k == n, exact=False) for k in range(n + 1)]


def check_euler_relation(c: Sequence[int], cx: SimplicialComplex, dec: BoundaryDecomposition) -> dict:
    """Alternating critical count against chi(M, N_r) - chi(N_a+) + chi(N_r-).

    The form with reversed signs, sum (-1)^(n-k) c_k = chi(M, N_r) + chi(N_a+)
    - chi(N_r-), is evaluated alongside and kept for reference only.
    """
    n = cx.dimension
    chi_rel = euler(betti(relative_cochain_complex(cx, dec)))
    gamma, eta = boundary_betti(cx, dec)
    chi_r, chi_a = euler(gamma), euler(eta)
    lhs = sum((-1) ** k * int(x) for k, x in enumerate(c))
    lhs_printed = sum((-1) ** (n - k) * int(x) for k, x in enumerate(c))
    rhs = chi_rel - chi_a + chi_r
    rhs_printed = chi_rel + chi_a - chi_r
    return {
        "lhs": lhs,
        "rhs_corrected": rhs,
        "lhs_reversed_sign": lhs_printed,
        "rhs_paper_printed": rhs_printed,
        "chi_relative": chi_rel,
        "chi_a_plus": chi_a,
        "chi_r_minus": chi_r,
        "corrected_holds": lhs == rhs,
        "printed_holds": lhs_printed == rhs_printed,
    }


def relative_betti(cx: SimplicialComplex, components, relative_ids) -> tuple[int, ...]:
    """Betti numbers of M relative to the union of the listed boundary components."""
    labels = ["r+" if c.id in relative_ids else "a+" for c in components]
    return betti(relative_cochain_complex(cx, assign_labels(components, labels)))


def check_duality(cx: SimplicialComplex, dec: BoundaryDecomposition, relative_ids=None) -> dict:
    """beta_k(M, A) = beta_{n-k}(M, B) for the partition A | B of the boundary.

    A defaults to the relative components of ``dec``.
    """
    comps = list(dec.components)
    if relative_ids is None:
        relative_ids = [c.id for c, lab in zip(comps, dec.labels) if lab[0] == "r"]
    a_ids = sorted(relative_ids)
    b_ids = sorted(c.id for c in comps if c.id not in a_ids)
    rec = {"A": a_ids, "B": b_ids, "orientable": True, "skipped": None}
    if orientation(cx) is None:
        rec.update(orientable=False, skipped="non-orientable", holds=None)
        return rec
    ba = relative_betti(cx, comps, a_ids)
    bb = relative_betti(cx, comps, b_ids)
    rec.update(betti_A=list(ba), betti_B=list(bb), holds=list(ba) == list(bb)[::-1])
    return rec


def check_duality_all_partitions(cx: SimplicialComplex) -> list[dict]:
    comps = detect_boundary(cx)
    dec = assign_labels(comps, ["a+"] * len(comps))
    ids = [c.id for c in comps]
    out = []
    for size in range(len(ids) + 1):
        for a in itertools.combinations(ids, size):
            out.append(check_duality(cx, dec, list(a)))
    return out


def check_parity_corollary(cx: SimplicialComplex, dec: BoundaryDecomposition | None = None) -> dict:
    """chi(boundary) = 2 chi(M) for odd n, with the sign-flipped form -2 chi(M) kept for reference."""
    n = cx.dimension
    if n % 2 == 0:
        raise NotOddDimensional(f"parity record needs odd dimension, got {n}")
    comps = list(dec.components) if dec is not None else detect_boundary(cx)
    facets = [s for c in comps for s in c.simplices]
    chi_boundary = euler(betti_of(facets, n - 1)) if facets else 0
    chi_m = euler(cx)
    single = dec is None or len(set(dec.labels)) <= 1
    return {
        "chi_boundary": chi_boundary,
        "chi_manifold": chi_m,
        "single_class": single,
        "derived_holds": chi_boundary == 2 * chi_m,
        "printed_holds": chi_boundary == -2 * chi_m,
        "parity_holds": (chi_boundary - 2 * chi_m) % 2 == 0,
    }


def spectral_record(rel, beta: Sequence[int], s: float, phis: Sequence[CountingFunction],
                    weight_mode: str = "unit", alternation: bool = True) -> list[dict]:
    """Dense spectra of every Delta_s^k, then one record per counting function."""
    laps = deformed_laplacians(rel, s, weight_mode)
    reports = [eigensolve(lap.matrix, "dense", degree=lap.k, s=s) for lap in laps]
    kernel = [rep.kernel_dim for rep in reports]
    gaps = [rep.gap_ambiguous for rep in reports]
    alt = None
    if alternation:
        try:
            clusters = multiplicity_alternation(reports, CLUSTER_TOL)
            worst = max((abs(c.alternating_sum) for c in clusters), default=0)
            alt = {"clusters": len(clusters), "max_abs_alternating_sum": worst, "holds": worst == 0}
        except ClusterAmbiguity as exc:
            alt = {"clusters": None, "max_abs_alternating_sum": None, "holds": None, "skipped": str(exc)}
    out = []
    for phi in phis:
        nus = [nu(rep, phi) for rep in reports]
        out.append({
            "s": float(s),
            "phi": str(phi),
            "nu": nus,
            "inequalities": check_analytic_inequalities(nus, beta),
            "kernel_dims": kernel,
            "betti": list(beta),
            "kernel_matches": kernel == list(beta),
            "gap_ambiguous": gaps,
            "alternation": alt,
        })
    return out


@dataclass
class VerificationReport:
    instance: str
    betti: list[int]
    gamma: list[int]
    eta: list[int]
    c: list[int]
    mu: list[int]
    inequalities: list[dict]
    euler: dict | None
    spectral: list[dict] = field(default_factory=list)
    duality: dict | None = None
    parity: dict | None = None
    mode: str = "bott"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    @property
    def inequalities_hold(self) -> bool:
        return _chain_ok(self.inequalities)

    def normative_failures(self) -> list[str]:
        """Names of failing normative checks; reference-only forms never appear."""
        bad = []
        if not self.inequalities_hold:
            bad.append("morse_inequalities")
        if self.euler is not None and not self.euler["corrected_holds"]:
            bad.append("euler_relation")
        if self.duality is not None and self.duality.get("holds") is False:
            bad.append("duality")
        if self.parity is not None and not self.parity["derived_holds"]:
            bad.append("parity")
        for rec in self.spectral:
            tag = f"s={rec['s']:g},{rec['phi']}"
            if not _chain_ok(rec["inequalities"]):
                bad.append(f"analytic_inequalities[{tag}]")
            if not rec["kernel_matches"]:
                bad.append(f"kernel_dims[{tag}]")
            alt = rec.get("alternation")
            if alt is not None and alt.get("holds") is False:
                bad.append(f"alternation[{tag}]")
        return bad

    @property
    def ok(self) -> bool:
        return not self.normative_failures()

    def recheck(self) -> list[str]:
        """Recompute every stored boolean from the stored numbers; returns mismatches."""
        issues = []
        fresh = check_morse_inequalities(self.mu, self.betti)
        if fresh != self.inequalities:
            issues.append("inequalities")
        e = self.euler
        if e is not None:
            if (e["lhs"] == e["rhs_corrected"]) != e["corrected_holds"]:
                issues.append("euler.corrected_holds")
            if (e["lhs_reversed_sign"] == e["rhs_paper_printed"]) != e["printed_holds"]:
                issues.append("euler.printed_holds")
            if e["rhs_corrected"] != e["chi_relative"] - e["chi_a_plus"] + e["chi_r_minus"]:
                issues.append("euler.rhs_corrected")
        d = self.duality
        if d is not None and d.get("holds") is not None:
            if (d["betti_A"] == d["betti_B"][::-1]) != d["holds"]:
                issues.append("duality.holds")
        p = self.parity
        if p is not None:
            if (p["chi_boundary"] == 2 * p["chi_manifold"]) != p["derived_holds"]:
                issues.append("parity.derived_holds")
            if (p["chi_boundary"] == -2 * p["chi_manifold"]) != p["printed_holds"]:
                issues.append("parity.printed_holds")
        for rec in self.spectral:
            if check_analytic_inequalities(rec["nu"], rec["betti"]) != rec["inequalities"]:
                issues.append(f"spectral[{rec['s']:g},{rec['phi']}].inequalities")
            if (rec["kernel_dims"] == rec["betti"]) != rec["kernel_matches"]:
                issues.append(f"spectral[{rec['s']:g},{rec['phi']}].kernel_matches")
        return issues


def verify_instance(
    inst: Instance,
    s_values: Sequence[float] = (),
    phis: Sequence[CountingFunction] = (),
    spectral_map=map,
) -> VerificationReport:
    """Integer track, plus the spectral track when ``s_values`` and ``phis`` are given.

    ``spectral_map`` lets a caller distribute the per-s spectral work; it must
    preserve order.
    """
    cx, dec = inst.complex, inst.decomposition
    rel = relative_cochain_complex(cx, dec)
    beta = betti(rel)
    gamma, eta = boundary_betti(cx, dec)
    inv = inst.inventory()
    mu = mu_vector(inv, gamma, eta, inv.mode)
    ineq = check_morse_inequalities(mu, beta)
    euler_rec = check_euler_relation(inv.counts, cx, dec) if inv.mode == "bott" else None
    duality = check_duality(cx, dec)
    parity = check_parity_corollary(cx, dec) if cx.dimension % 2 == 1 else None
    spectral = []
    if s_values and phis:
        jobs = [(rel, beta, float(s), tuple(phis)) for s in s_values]
        for recs in spectral_map(_spectral_job, jobs):
            spectral.extend(recs)
    return VerificationReport(
        instance=inst.name,
        betti=list(beta),
        gamma=list(gamma),
        eta=list(eta),
        c=list(inv.counts),
        mu=list(mu),
        inequalities=ineq,
        euler=euler_rec,
        spectral=spectral,
        duality=duality,
        parity=parity,
        mode=inv.mode,
    )


def _spectral_job(job) -> list[dict]:
    rel, beta, s, phis = job
    return spectral_record(rel, beta, s, phis)


__all__ = [
    "VerificationReport",
    "alternating_sums",
    "check_analytic_inequalities",
    "check_duality",
    "check_duality_all_partitions",
    "check_euler_relation",
    "check_morse_inequalities",
    "check_parity_corollary",
    "relative_betti",
    "spectral_record",
    "verify_instance",
]

"""Named numerical invariants and theorem-level checks built on the homology pipeline."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable

from .complexes import GradedComplex, build_theta_complex
from .composition import Composition, enumerate_patterns, format_composition, parse_composition
from .homology import (
    HomologyTable,
    classification_label,
    classify,
    graded_homology,
    reduced_cohomology_of_complement,
    reduced_homology_of_complement,
)
from .poset import (
    ClosedPoset,
    PosetError,
    PosetSpec,
    closure,
    extend_to_degree,
    format_spec,
    from_spec,
    maximal_elements,
)

__all__ = [
    "StabilityReport",
    "AppendixEntry",
    "AppendixRow",
    "euler_number",
    "bouquet_count",
    "eta_psi_xi",
    "stability_check",
    "theta_shift_comparison",
    "kappa",
    "vassiliev_ranks",
    "vassiliev_product_coefficient",
    "load_appendix",
    "verify_appendix",
]


def euler_number(c: GradedComplex) -> int:
    """Signed Euler number ``sum_g (-1)^g rank C_g`` in the internal grading."""
    return c.euler_characteristic()


def bouquet_count(d: int, k: int, q: int = 0) -> int:
    """``A(d, k, q)``: absolute Euler number of the skeleton poset complex.

    The poset holds every pattern with reduced norm ``>= k`` and norm ``>= q``.
    """
    if not 1 <= k < d:
        raise ValueError(f"need 1 <= k < d, got k={k}, d={d}")
    if not 0 <= q <= d:
        raise ValueError(f"need 0 <= q <= d, got q={q}")
    if q > 0 and (q - d) % 2:
        raise ValueError(f"q={q} must have the parity of d={d}")
    theta = from_spec(PosetSpec("reducedNormAtLeast", k=k, q=q), d)
    if not theta.elements:
        return 0
    return abs(euler_number(build_theta_complex(theta)))


@dataclass
class StabilityReport:
    spec: PosetSpec | None
    d: int
    maximal: list
    eta: int
    psi: Fraction
    eta_next: int | None = None
    psi_next: Fraction | None = None
    xi: Fraction | None = None
    verified_range: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        def num(x):
            if x is None:
                return None
            return int(x) if x.denominator == 1 else str(x)

        return {
            "theta": format_spec(self.spec) if self.spec is not None else "",
            "d": self.d,
            "maximal": [format_composition(w) for w in self.maximal],
            "eta": self.eta,
            "psi": num(Fraction(self.psi)),
            "eta_next": self.eta_next,
            "psi_next": num(self.psi_next),
            "xi": num(self.xi),
            "verified_range": list(self.verified_range),
            "failures": [{"degree": j, "at_d": a, "at_d_plus_2": b} for j, a, b in self.failures],
        }


def _eta(maximal: Iterable[Composition]) -> int:
    return max(w.norm - 2 * w.reduced_norm for w in maximal)


def eta_psi_xi(theta: ClosedPoset) -> StabilityReport:
    """Maximal elements, ``eta``, ``psi`` at ``d`` and ``xi`` at ``d + 2``.

    ``eta`` may be negative; ``psi = (d + eta) / 2`` may be a half-integer.
    """
    if not theta.elements:
        raise PosetError("eta/psi are undefined for an empty poset")
    maximal = maximal_elements(theta)
    eta = _eta(maximal)
    psi = Fraction(theta.d + eta, 2)
    nxt = extend_to_degree(theta, theta.d + 2)
    eta_next = _eta(maximal_elements(nxt))
    psi_next = Fraction(nxt.d + eta_next, 2)
    return StabilityReport(theta.spec, theta.d, maximal, eta, psi, eta_next, psi_next, nxt.d - psi_next)


def _materialize_pair(spec: PosetSpec, d: int) -> tuple[ClosedPoset, ClosedPoset]:
    theta = from_spec(spec, d)
    if spec.kind == "generators":
        return theta, extend_to_degree(theta, d + 2)
    return theta, from_spec(spec, d + 2)


def stability_check(spec: PosetSpec, d: int) -> StabilityReport:
    """Compare complement homology at ``d`` and ``d + 2`` in the stable range.

    Degrees ``j <= d + 2 - psi(d + 2)`` must agree in rank and torsion;
    any disagreement there is recorded in ``failures``.
    """
    theta, nxt = _materialize_pair(spec, d)
    if not theta.elements:
        raise PosetError(f"{format_spec(spec)} is empty at d={d}")
    report = eta_psi_xi(theta)
    report.spec = spec
    eta_next = _eta(maximal_elements(nxt))
    psi_next = Fraction(nxt.d + eta_next, 2)
    report.eta_next, report.psi_next, report.xi = eta_next, psi_next, nxt.d - psi_next
    lo = reduced_homology_of_complement(theta)
    hi = reduced_homology_of_complement(nxt)
    bound = report.xi
    j = 0
    while j <= bound:
        a, b = lo[j], hi[j]
        if a == b:
            report.verified_range.append(j)
        else:
            report.failures.append((j, [a[0], list(a[1])], [b[0], list(b[1])]))
        j += 1
    return report


def theta_shift_comparison(spec: PosetSpec, d: int) -> dict:
    """Experimental: subcomplex homology at grading ``g`` (cap ``d``) vs ``g + 2`` (cap ``d + 2``).

    Reads subcomplex grading ``g`` as cellular dimension of the compactified
    strata union.  This dictionary is unverified; the result is reported,
    never asserted.
    """
    theta, nxt = _materialize_pair(spec, d)
    lo = graded_homology(build_theta_complex(theta))
    hi = graded_homology(build_theta_complex(nxt))
    psi_next = Fraction(nxt.d + _eta(maximal_elements(nxt)), 2)
    rows = []
    for g in range(0, d + 1):
        if g < psi_next - 1:
            continue
        a = lo.get(g, (0, ()))
        b = hi.get(g + 2, (0, ()))
        rows.append({"grading": g, "at_d": [a[0], list(a[1])], "at_d_plus_2": [b[0], list(b[1])], "agree": a == b})
    return {"theta": format_spec(spec), "d": d, "psi_next": str(psi_next), "rows": rows, "dictionary": "unverified"}


def kappa(d: int) -> int:
    """Number of free generators for the two-entry poset at degree ``d``."""
    if d < 3:
        raise ValueError(f"kappa needs d >= 3, got {d}")
    return d * (d - 2) // 4 if d % 2 == 0 else (d - 1) ** 2 // 4


def vassiliev_ranks(d: int, k: int) -> dict[int, int]:
    """Additive ranks of the moderate-singularity cohomology ring.

    Rank 1 in each degree ``(k - 2) m`` for ``1 <= m <= d // k``.  The ring
    has one generator ``e_m`` per such degree with
    ``e_l e_m = binom(l + m, l) e_{l+m}``; only the ranks are modelled.
    """
    if k < 3:
        raise ValueError(f"the moderate-singularity pattern needs k >= 3, got {k}")
    if d < k:
        raise ValueError(f"need d >= k, got d={d}, k={k}")
    return {(k - 2) * m: 1 for m in range(1, d // k + 1)}


def vassiliev_product_coefficient(l: int, m: int) -> int:
    """Structure constant of ``e_l * e_m`` in terms of ``e_{l+m}``."""
    from math import comb

    return comb(l + m, l)


@dataclass(frozen=True)
class AppendixEntry:
    d: int
    omega: Composition
    sphere_degree: int
    homotopy_refined: bool = False

    def __post_init__(self):
        if not 4 <= self.d <= 13:
            raise ValueError(f"appendix entries have 4 <= d <= 13, got {self.d}")
        if not 0 <= self.sphere_degree <= self.d - 1:
            raise ValueError(f"sphere degree {self.sphere_degree} out of range for d={self.d}")


def load_appendix(path: str | os.PathLike | None = None) -> list[AppendixEntry]:
    """Golden table of nontrivial single-generator complements (bundled by default)."""
    if path is None:
        text = resources.files("polystrata").joinpath("data/appendix_table.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = json.loads(text)
    entries = [
        AppendixEntry(int(e["d"]), parse_composition(e["omega"]), int(e["sphere"]), bool(e.get("homotopy", False)))
        for e in doc["entries"]
    ]
    return sorted(entries, key=lambda e: (e.d, e.omega.sort_key()))


@dataclass
class AppendixRow:
    d: int
    omega: Composition
    expected: str
    computed: str
    kind: str  # "listed" or "negative"
    table: dict | None = None
    homotopy_refined: bool = False

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "omega": format_composition(self.omega, compact=True),
            "kind": self.kind,
            "expected": self.expected,
            "computed": self.computed,
            "status": "PASS" if self.passed else "FAIL",
            "homotopy_refined": self.homotopy_refined,
        }
        if not self.passed and self.table is not None:
            out["table"] = self.table
        return out


def _job(args):
    d, entries, kind, expected, star = args
    omega = Composition(entries)
    t: HomologyTable = reduced_cohomology_of_complement(closure([omega], d))
    computed = classification_label(classify(t))
    return AppendixRow(d, omega, expected, computed, kind, t.to_dict() if computed != expected else None, star)


def verify_appendix(
    max_d: int = 11,
    negative_max_d: int = 8,
    entries: list[AppendixEntry] | None = None,
    workers: int = 1,
) -> list[AppendixRow]:
    """Recompute every golden row with ``d <= max_d`` plus a negative control.

    The negative control covers every generator at ``d <= negative_max_d``
    absent from the table; each must give a trivial complement.  Rows are
    returned sorted by ``(d, kind, omega)`` whatever the worker count.
    """
    if not 4 <= max_d <= 13:
        raise ValueError(f"max_d must lie in [4, 13], got {max_d}")
    if entries is None:
        entries = load_appendix()
    jobs = []
    listed = set()
    for e in entries:
        listed.add((e.d, e.omega))
        if e.d <= max_d:
            jobs.append((e.d, tuple(e.omega), "listed", f"S^{e.sphere_degree}", e.homotopy_refined))
    for d in range(4, min(max_d, negative_max_d) + 1):
        for w in enumerate_patterns(d, exclude_basepoint=True):
            if (d, w) not in listed:
                jobs.append((d, tuple(w), "negative", "trivial", False))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_job, jobs, chunksize=8))
    else:
        rows = [_job(j) for j in jobs]
    rows.sort(key=lambda r: (r.d, r.kind != "listed", r.omega.sort_key()))
    return rows

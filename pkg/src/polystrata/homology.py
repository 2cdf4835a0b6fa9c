"""Integer homology of graded complexes and the complement (co)homology tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .complexes import (
    GradedComplex,
    IntegrityError,
    build_ambient,
    build_dual,
    build_quotient_complex,
    build_theta_complex,
)
from .composition import enumerate_patterns
from .poset import ClosedPoset, PosetError, format_spec
from .snf import SNFResult, elementary_divisors

__all__ = [
    "ambient_is_acyclic",
    "HomologyTable",
    "graded_homology",
    "reduced_cohomology_of_complement",
    "reduced_homology_of_complement",
    "classify",
    "classification_label",
]

INDEXINGS = ("reducedCohomologyOfComplement", "reducedHomologyOfComplement", "rawGraded")
ROUTES = ("auto", "quotient", "subcomplex")


def graded_homology(c: GradedComplex, check: bool = True) -> dict[int, tuple[int, tuple[int, ...]]]:
    """Map grading ``g`` to ``(betti rank, torsion divisors)``.

    Works for both ordinary and dual complexes; in the dual case the
    incoming map at ``g`` is the transposed boundary ``matrix(g)``.
    """
    if check:
        c.check()
    snf: dict[int, SNFResult] = {}

    def divisors(g: int) -> SNFResult:
        if g not in snf:
            m = c.matrix(g)
            snf[g] = elementary_divisors(m) if m.nnz() else SNFResult((), 0)
        return snf[g]

    out = {}
    for g in c.gradings:
        dim = c.rank(g)
        if dim == 0:
            continue
        if c.dual:
            incoming, outgoing = divisors(g), divisors(g + 1)
        else:
            incoming, outgoing = divisors(g + 1), divisors(g)
        rank = dim - outgoing.rank - incoming.rank
        if rank < 0:
            raise IntegrityError(f"negative betti number at g={g}; boundary squared cannot be zero")
        torsion = incoming.torsion
        if rank or torsion:
            out[g] = (rank, torsion)
    return out


@dataclass(frozen=True)
class HomologyTable:
    """Per-degree ``(rank, torsion)``; missing degrees read as zero."""

    d: int
    groups: dict = field(default_factory=dict)
    indexing: str = "reducedCohomologyOfComplement"
    theta: str = ""

    def __post_init__(self):
        if self.indexing not in INDEXINGS:
            raise ValueError(f"unknown indexing {self.indexing!r}")
        clean = {}
        for j, (rank, torsion) in self.groups.items():
            torsion = tuple(int(t) for t in torsion)
            if any(t <= 1 for t in torsion) or any(b % a for a, b in zip(torsion, torsion[1:])):
                raise ValueError(f"torsion {torsion} at degree {j} is not a divisibility chain of entries > 1")
            if rank or torsion:
                clean[int(j)] = (int(rank), torsion)
        object.__setattr__(self, "groups", dict(sorted(clean.items())))

    def __getitem__(self, j: int) -> tuple[int, tuple[int, ...]]:
        return self.groups.get(j, (0, ()))

    def rank(self, j: int) -> int:
        return self[j][0]

    def torsion(self, j: int) -> tuple[int, ...]:
        return self[j][1]

    def ranks(self) -> dict[int, int]:
        return {j: r for j, (r, _) in self.groups.items() if r}

    def torsion_profile(self) -> dict[int, tuple[int, ...]]:
        return {j: t for j, (_, t) in self.groups.items() if t}

    def is_trivial(self) -> bool:
        return not self.groups

    def classification(self) -> str:
        return classification_label(classify(self))

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "theta": self.theta,
            "indexing": self.indexing,
            "groups": [{"degree": j, "rank": r, "torsion": list(t)} for j, (r, t) in self.groups.items()],
            "classification": self.classification(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@lru_cache(maxsize=None)
def ambient_is_acyclic(d: int) -> bool:
    """Whether the full pattern complex at degree ``d`` has zero homology (computed, then cached)."""
    return not graded_homology(build_ambient(d))


def _raw(theta: ClosedPoset, dual: bool, route: str) -> dict:
    """Quotient-complex homology keyed by grading.

    With an acyclic ambient complex the long exact sequence of
    ``0 -> C(theta) -> C(all) -> C(quotient) -> 0`` makes the connecting map
    an isomorphism ``H_g(quotient) = H_{g-1}(theta)``, torsion included, and
    likewise for the duals.  ``auto`` takes that shortcut whenever the poset
    is smaller than its complement and acyclicity has been checked for ``d``.
    """
    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}, got {route!r}")
    d = theta.d
    if route == "auto":
        n_all = len(enumerate_patterns(d, exclude_basepoint=True))
        small = 2 * len(theta.elements) < n_all
        route = "subcomplex" if small and ambient_is_acyclic(d) else "quotient"
    if route == "subcomplex":
        if not ambient_is_acyclic(d):
            raise IntegrityError(f"ambient complex at d={d} is not acyclic; the subcomplex route is invalid")
        c = build_theta_complex(theta)
        shift = 1
    else:
        c = build_quotient_complex(theta)
        shift = 0
    if dual:
        c = build_dual(c)
    return {g + shift: v for g, v in graded_homology(c).items()}


def _table(theta: ClosedPoset, dual: bool, route: str = "auto") -> HomologyTable:
    if not theta.elements:
        raise PosetError("complement homology requires a nonempty poset")
    raw = _raw(theta, dual, route)
    groups = {theta.d - g: v for g, v in raw.items()}
    indexing = "reducedHomologyOfComplement" if dual else "reducedCohomologyOfComplement"
    spec = format_spec(theta.spec) if theta.spec is not None else ""
    return HomologyTable(theta.d, groups, indexing, spec)


def reduced_cohomology_of_complement(theta: ClosedPoset, route: str = "auto") -> HomologyTable:
    """Reduced integral cohomology of the complement, degree ``j = d - g``.

    ``route`` picks the quotient complex, the (shifted) subcomplex, or the
    smaller of the two (``auto``); all three give the same table.
    """
    return _table(theta, dual=False, route=route)


def reduced_homology_of_complement(theta: ClosedPoset, route: str = "auto") -> HomologyTable:
    """Reduced integral homology of the complement, from the dual complexes."""
    return _table(theta, dual=True, route=route)


def classify(t: HomologyTable) -> tuple[str, int | None]:
    """``("trivial", None)``, ``("sphere", k)`` or ``("general", None)``."""
    if t.is_trivial():
        return "trivial", None
    if len(t.groups) == 1:
        (k, (rank, torsion)), = t.groups.items()
        if rank == 1 and not torsion:
            return "sphere", k
    return "general", None


def classification_label(c: tuple[str, int | None]) -> str:
    kind, k = c
    return f"S^{k}" if kind == "sphere" else kind

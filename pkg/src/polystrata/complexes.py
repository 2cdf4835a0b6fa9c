"""Graded differential complexes spanned by patterns.

A pattern ``w`` sits in grading ``g = d - |w|'``.  The differential is the
sum of an alternating merge part and an alternating insert part; inserts
are dropped for patterns already at the top norm ``d``.  Both parts raise
the reduced norm by one, so the differential lowers ``g`` by one.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .composition import Composition, basepoint, enumerate_patterns, format_composition, insert, merge
from .poset import ClosedPoset, complement_basis
from .snf import SparseMatrix

__all__ = [
    "GradedComplex",
    "IntegrityError",
    "merge_boundary",
    "insert_boundary",
    "boundary_of",
    "apply_operator",
    "build_ambient",
    "build_theta_complex",
    "build_quotient_complex",
    "build_dual",
    "dump",
]


class IntegrityError(RuntimeError):
    """A complex whose differential does not square to zero, or a closedness breach."""


def merge_boundary(omega: Composition) -> dict[Composition, int]:
    """``-sum_{k=1}^{s-1} (-1)^k M_k(w)`` with like terms collected."""
    out: dict = defaultdict(int)
    for k in range(1, len(omega)):
        out[merge(omega, k)] -= (-1) ** k
    return {w: c for w, c in out.items() if c}


def insert_boundary(omega: Composition) -> dict[Composition, int]:
    """``sum_{k=0}^{s} (-1)^k I_k(w)`` with like terms collected."""
    out: dict = defaultdict(int)
    for k in range(len(omega) + 1):
        out[insert(omega, k)] += (-1) ** k
    return {w: c for w, c in out.items() if c}


def boundary_of(omega, d: int) -> dict[Composition, int]:
    """The capped differential of a single pattern as ``{pattern: coefficient}``."""
    omega = Composition(omega)
    if omega.norm > d or (omega.norm - d) % 2:
        raise ValueError(f"{format_composition(omega)} does not live in degree {d}")
    if omega == basepoint(d):
        raise ValueError(f"{format_composition(omega)} is the basepoint pattern for d={d}")
    out = dict(merge_boundary(omega))
    if omega.norm < d:
        for w, c in insert_boundary(omega).items():
            out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c}


def apply_operator(op, chain: dict) -> dict:
    """Extend a single-pattern operator linearly to a chain ``{pattern: coeff}``."""
    out: dict = defaultdict(int)
    for w, c in chain.items():
        for v, e in op(w).items():
            out[v] += c * e
    return {w: c for w, c in out.items() if c}


@dataclass(frozen=True)
class GradedComplex:
    """Free graded Z-module with bases per grading and boundary matrices.

    ``matrices[g]`` has rows indexed by ``bases[g - 1]`` and columns by
    ``bases[g]`` (for ``dual`` complexes the arrow is reversed: rows by
    ``bases[g]``, columns by ``bases[g - 1]``).
    """

    d: int
    bases: dict
    matrices: dict
    label: str
    dual: bool = False

    @property
    def gradings(self) -> range:
        return range(1, self.d + 1)

    def basis(self, g: int) -> list:
        return self.bases.get(g, [])

    def rank(self, g: int) -> int:
        return len(self.bases.get(g, []))

    def matrix(self, g: int) -> SparseMatrix:
        """Boundary from grading ``g`` to ``g - 1`` (or its transpose when dual)."""
        m = self.matrices.get(g)
        if m is not None:
            return m
        lo, hi = self.rank(g - 1), self.rank(g)
        return SparseMatrix(hi, lo) if self.dual else SparseMatrix(lo, hi)

    def euler_characteristic(self) -> int:
        return sum((-1) ** g * len(b) for g, b in self.bases.items())

    def check(self) -> None:
        """Raise :class:`IntegrityError` unless every composite boundary vanishes."""
        for g in self.gradings:
            a, b = self.matrix(g), self.matrix(g + 1)
            prod = b @ a if self.dual else a @ b
            if not prod.is_zero():
                raise IntegrityError(f"{self.label} complex at d={self.d}: boundary squared is nonzero at g={g}")


def _bucket(elements, d: int) -> dict:
    bases: dict = defaultdict(list)
    for w in sorted(elements, key=Composition.sort_key):
        bases[d - w.reduced_norm].append(w)
    return dict(bases)


def _assemble(d: int, bases: dict, label: str, keep=None, strict: bool = False) -> GradedComplex:
    index = {g: {w: i for i, w in enumerate(b)} for g, b in bases.items()}
    matrices = {}
    for g, basis in bases.items():
        target = index.get(g - 1, {})
        cols = []
        for w in basis:
            col = {}
            for v, c in boundary_of(w, d).items():
                row = target.get(v)
                if row is None:
                    if strict and (keep is None or keep(v)):
                        raise IntegrityError(
                            f"boundary term {format_composition(v)} of {format_composition(w)} escapes the basis"
                        )
                    continue
                col[row] = c
            cols.append(col)
        matrices[g] = SparseMatrix(len(target), len(basis), cols)
    return GradedComplex(d, bases, matrices, label)


def build_ambient(d: int) -> GradedComplex:
    """Complex on all patterns of ``Omega_<d]`` except the basepoint pattern."""
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    return _assemble(d, _bucket(enumerate_patterns(d, exclude_basepoint=True), d), "ambient", strict=True)


def build_theta_complex(theta: ClosedPoset) -> GradedComplex:
    """Subcomplex spanned by a closed poset; every boundary term must stay inside."""
    return _assemble(theta.d, _bucket(theta.elements, theta.d), "theta", strict=True)


def build_quotient_complex(theta: ClosedPoset) -> GradedComplex:
    """Quotient of the ambient complex by the subcomplex of ``theta``.

    Boundary terms that land in ``theta`` are deleted.
    """
    d = theta.d
    inside = theta.elements
    return _assemble(d, _bucket(complement_basis(theta), d), "quotient", keep=lambda v: v not in inside, strict=True)


def build_dual(c: GradedComplex) -> GradedComplex:
    """Hom(-, Z) of a complex: same bases, transposed matrices, arrows reversed."""
    matrices = {g: m.transpose() for g, m in c.matrices.items()}
    label = "dualQuotient" if c.label == "quotient" else ("quotient" if c.label == "dualQuotient" else c.label)
    return GradedComplex(c.d, c.bases, matrices, label, dual=not c.dual)


def _format_chain(chain: dict) -> str:
    if not chain:
        return "0"
    parts = []
    for w in sorted(chain, key=Composition.sort_key):
        c = chain[w]
        sign = "+" if c > 0 else "-"
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        parts.append(f"{sign}{mag}({format_composition(w)})")
    return " ".join(parts)


def dump(c: GradedComplex) -> str:
    """One line per basis element: ``g=<g> <pattern> -> <signed terms>``.

    For a dual complex the terms are the coboundary into grading ``g + 1``.
    """
    lines = []
    for g in sorted(c.bases, reverse=True):
        step = g + 1 if c.dual else g - 1
        m = c.matrix(g + 1 if c.dual else g)
        target = c.basis(step)
        for j, w in enumerate(c.basis(g)):
            chain = {target[i]: v for i, v in m.cols[j].items()} if j < m.ncols else {}
            lines.append(f"g={g} ({format_composition(w)}) -> {_format_chain(chain)}")
    return "\n".join(lines)

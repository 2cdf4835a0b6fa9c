"""Closed subposets of patterns, materialized up to a degree cap.

A poset is closed when it contains every merge of its members and every
insert that stays within the cap.  All posets are stored as explicit
frozensets and checked for closedness on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .composition import (
    Composition,
    basepoint,
    enumerate_patterns,
    format_composition,
    parse_composition,
    predecessors,
    reachable,
    successors,
)

__all__ = [
    "PosetSpec",
    "ClosedPoset",
    "PosetError",
    "SpecParseError",
    "ClosednessError",
    "closure",
    "from_spec",
    "complement_basis",
    "maximal_elements",
    "extend_to_degree",
    "is_profinite",
    "parse_spec",
    "format_spec",
]

KINDS = ("generators", "maxEntryAtLeast", "reducedNormAtLeast", "freeTwoComplementForbidden", "union")


class PosetError(ValueError):
    """A poset request that violates parity, basepoint or range rules."""


class SpecParseError(ValueError):
    """Malformed ``--theta`` string."""


class ClosednessError(PosetError):
    """An element set that is not closed under merges and capped inserts."""

    def __init__(self, omega, op, result):
        self.witness = (omega, op, result)
        super().__init__(
            f"not closed: {format_composition(omega)} --{op}--> {format_composition(result)} is missing"
        )


@dataclass(frozen=True)
class PosetSpec:
    kind: str
    generators: tuple[Composition, ...] = ()
    k: int | None = None
    q: int = 0
    parts: tuple["PosetSpec", ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PosetError(f"unknown poset kind {self.kind!r}")
        object.__setattr__(self, "generators", tuple(Composition(g) for g in self.generators))
        object.__setattr__(self, "parts", tuple(self.parts))
        if self.kind == "generators" and not self.generators:
            raise PosetError("generator spec needs at least one generator")
        if self.kind in ("maxEntryAtLeast", "reducedNormAtLeast"):
            if self.k is None or self.k < 1:
                raise PosetError(f"threshold k must be >= 1, got {self.k}")
        if self.q < 0:
            raise PosetError(f"q must be >= 0, got {self.q}")
        if self.kind == "union" and not self.parts:
            raise PosetError("union spec needs at least one part")

    @classmethod
    def gen(cls, *generators) -> "PosetSpec":
        return cls("generators", generators=tuple(Composition(g) for g in generators))

    def __str__(self) -> str:
        return format_spec(self)


@dataclass(frozen=True)
class ClosedPoset:
    """Finite closed set of patterns of norm ``<= d`` and parity of ``d``."""

    d: int
    elements: frozenset
    spec: PosetSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(Composition(w) for w in self.elements))
        _validate(self.d, self.elements)

    def __contains__(self, omega) -> bool:
        return omega in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list[Composition]:
        return sorted(self.elements, key=Composition.sort_key)


def _validate(d: int, elements: frozenset) -> None:
    if d < 1:
        raise PosetError(f"degree must be >= 1, got {d}")
    bp = basepoint(d)
    for w in elements:
        if w.norm > d:
            raise PosetError(f"{format_composition(w)} has norm {w.norm} > d={d}")
        if (w.norm - d) % 2:
            raise PosetError(f"{format_composition(w)} has norm parity different from d={d}")
        if w == bp:
            raise PosetError(f"basepoint pattern {format_composition(bp)} may not belong to a poset at d={d}")
    for w in elements:
        for j in range(1, len(w)):
            s = Composition._trusted(w[: j - 1] + (w[j - 1] + w[j],) + w[j + 1:])
            if s not in elements:
                raise ClosednessError(w, f"M{j}", s)
        if w.norm + 2 <= d:
            for k in range(len(w) + 1):
                s = Composition._trusted(w[:k] + (2,) + w[k:])
                if s not in elements:
                    raise ClosednessError(w, f"I{k}", s)


def closure(generators: Iterable, d: int, spec: PosetSpec | None = None) -> ClosedPoset:
    """Smallest closed poset at cap ``d`` containing ``generators``."""
    gens = [Composition(g) for g in generators]
    if not gens:
        raise PosetError("closure needs at least one generator")
    bp = basepoint(d)
    for g in gens:
        if g.norm > d or (g.norm - d) % 2:
            raise PosetError(f"generator {format_composition(g)} (norm {g.norm}) does not fit degree {d}")
        if g == bp:
            raise PosetError(f"generator {format_composition(g)} is the basepoint pattern for d={d}")
    if spec is None:
        spec = PosetSpec("generators", generators=tuple(gens))
    return ClosedPoset(d, frozenset(reachable(gens, d)), spec)


def _predicate(spec: PosetSpec, d: int):
    if spec.kind == "maxEntryAtLeast":
        return lambda w: w.max_entry >= spec.k
    if spec.kind == "reducedNormAtLeast":
        return lambda w: w.reduced_norm >= spec.k and w.norm >= spec.q
    if spec.kind == "freeTwoComplementForbidden":
        return lambda w: not (all(e <= 2 for e in w) and w.count(2) <= 1)
    raise AssertionError(spec.kind)


def from_spec(spec: PosetSpec, d: int) -> ClosedPoset:
    """Materialize ``spec`` at degree cap ``d``."""
    if spec.kind == "generators":
        return closure(spec.generators, d, spec)
    if spec.kind == "union":
        elements: set = set()
        for part in spec.parts:
            elements |= from_spec(part, d).elements
        return ClosedPoset(d, frozenset(elements), spec)
    keep = _predicate(spec, d)
    return ClosedPoset(d, frozenset(w for w in enumerate_patterns(d) if keep(w)), spec)


def complement_basis(theta: ClosedPoset) -> list[Composition]:
    """Patterns of ``Omega_<d]`` outside ``theta`` (basepoint excluded), canonical order."""
    return [w for w in enumerate_patterns(theta.d, exclude_basepoint=True) if w not in theta.elements]


def maximal_elements(theta: ClosedPoset) -> list[Composition]:
    """Elements of ``theta`` not reachable from any other element of ``theta``."""
    if not theta.elements:
        raise PosetError("maximal elements of an empty poset are undefined")
    # in a closed set, w is non-maximal iff some one-step predecessor lies in it
    return [w for w in theta.sorted() if not any(p in theta.elements for p in predecessors(w))]


def extend_to_degree(theta: ClosedPoset, d_new: int) -> ClosedPoset:
    """Smallest closed poset at cap ``d_new`` containing ``theta``."""
    if d_new < theta.d or (d_new - theta.d) % 2:
        raise PosetError(f"cannot extend from d={theta.d} to d={d_new}")
    if d_new == theta.d:
        return theta
    spec = PosetSpec("generators", generators=tuple(maximal_elements(theta)))
    return ClosedPoset(d_new, frozenset(reachable(theta.elements, d_new)), spec)


def is_profinite(spec: PosetSpec) -> tuple[bool | None, str]:
    """Profiniteness verdict with a short note; ``None`` means not decided."""
    if spec.kind == "generators":
        return True, "finitely generated"
    if spec.kind == "union":
        verdicts = [is_profinite(p) for p in spec.parts]
        if all(v is True for v, _ in verdicts):
            return True, "finite union of finitely generated posets"
        return None, "indeterminate: union contains a predicate poset"
    return None, f"indeterminate for predicate kind {spec.kind}"


# spec string grammar:
#   spec := term ('|' term)*
#   term := 'gen:' comp (';' comp)* | 'maxge:' INT | 'redge:' INT [',' INT] | 'free2'

def _int(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise SpecParseError(f"expected integer for {what}, got {text!r}") from None


def _parse_term(term: str) -> PosetSpec:
    term = term.strip()
    head, sep, body = term.partition(":")
    head = head.strip()
    try:
        if head == "free2" and not sep:
            return PosetSpec("freeTwoComplementForbidden")
        if head == "gen" and sep:
            comps = [parse_composition(c) for c in body.split(";") if c.strip()]
            if not comps:
                raise SpecParseError(f"no generators in {term!r}")
            return PosetSpec("generators", generators=tuple(comps))
        if head == "maxge" and sep:
            return PosetSpec("maxEntryAtLeast", k=_int(body, "maxge"))
        if head == "redge" and sep:
            k, _, q = body.partition(",")
            return PosetSpec("reducedNormAtLeast", k=_int(k, "redge k"), q=_int(q, "redge q") if q else 0)
    except SpecParseError:
        raise
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None
    raise SpecParseError(f"unrecognized poset term {term!r}")


def parse_spec(text: str) -> PosetSpec:
    terms = [t for t in text.split("|")]
    if not text.strip() or any(not t.strip() for t in terms):
        raise SpecParseError(f"empty term in poset spec {text!r}")
    parts = [_parse_term(t) for t in terms]
    if len(parts) == 1:
        return parts[0]
    return PosetSpec("union", parts=tuple(parts))


def format_spec(spec: PosetSpec) -> str:
    if spec.kind == "generators":
        return "gen:" + ";".join(format_composition(g) for g in spec.generators)
    if spec.kind == "maxEntryAtLeast":
        return f"maxge:{spec.k}"
    if spec.kind == "reducedNormAtLeast":
        return f"redge:{spec.k},{spec.q}"
    if spec.kind == "freeTwoComplementForbidden":
        return "free2"
    return "|".join(format_spec(p) for p in spec.parts)

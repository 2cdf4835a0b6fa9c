"""Real-root multiplicity patterns and their elementary operations.

A pattern is an ordered tuple of positive integers.  Two operations move
a pattern up the order: a *merge* adds two adjacent entries, an *insert*
places a new entry ``2`` somewhere in the sequence.  Both raise the
reduced norm by exactly one.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from typing import Iterable, Iterator

__all__ = [
    "Composition",
    "merge",
    "insert",
    "norms",
    "succeeds",
    "compositions_of",
    "enumerate_patterns",
    "basepoint",
    "parse_composition",
    "format_composition",
]


class Composition(tuple):
    """Immutable multiplicity pattern ``(w_1, ..., w_l)``.

    Behaves like a tuple of ints; equality and hashing are by entries.
    The empty pattern ``Composition()`` is legal.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(entries)
        for e in entries:
            if not isinstance(e, int) or isinstance(e, bool) or e < 1:
                raise ValueError(f"composition entries must be integers >= 1, got {entries!r}")
        return super().__new__(cls, entries)

    @classmethod
    def _trusted(cls, entries: tuple) -> "Composition":
        # skips validation; callers guarantee positive ints
        return tuple.__new__(cls, entries)

    @property
    def norm(self) -> int:
        return sum(self)

    @property
    def reduced_norm(self) -> int:
        return sum(self) - len(self)

    @property
    def support(self) -> int:
        return len(self)

    @property
    def max_entry(self) -> int:
        return max(self, default=0)

    def __repr__(self) -> str:
        return f"Composition({format_composition(self)})"

    def __str__(self) -> str:
        return format_composition(self)

    def sort_key(self) -> tuple:
        """Key for the canonical order: ascending norm, then colexicographic.

        Colex compares entries from the last one backwards, so
        ``(1,1,1) < (2,1) < (1,2) < (3)``.
        """
        return (sum(self), tuple(reversed(self)))


def merge(omega: Composition, j: int) -> Composition:
    """Add entries ``j`` and ``j+1`` (1-based); identity when ``j >= len(omega)``."""
    if j <= 0:
        raise ValueError(f"merge index must be >= 1, got {j}")
    if j >= len(omega):
        return omega
    i = j - 1
    return Composition._trusted(omega[:i] + (omega[i] + omega[i + 1],) + omega[i + 2:])


def insert(omega: Composition, k: int) -> Composition:
    """Place a new entry 2 after position ``k``; ``k=0`` prepends, ``k=len`` appends."""
    if k < 0 or k > len(omega):
        raise ValueError(f"insert position must lie in [0, {len(omega)}], got {k}")
    return Composition._trusted(omega[:k] + (2,) + omega[k:])


def norms(omega: Composition) -> tuple[int, int, int]:
    """Return ``(norm, reduced_norm, support)``."""
    n = sum(omega)
    return n, n - len(omega), len(omega)


def successors(omega: Composition, cap: int) -> Iterator[Composition]:
    """All results of one merge, or one insert staying within norm ``cap``."""
    for j in range(1, len(omega)):
        yield merge(omega, j)
    if sum(omega) + 2 <= cap:
        for k in range(len(omega) + 1):
            yield insert(omega, k)


def predecessors(omega: Composition) -> Iterator[Composition]:
    """All patterns from which ``omega`` arises by a single operation."""
    for i, e in enumerate(omega):
        # undo a merge: split e into a + b
        for a in range(1, e):
            yield Composition._trusted(omega[:i] + (a, e - a) + omega[i + 1:])
        # undo an insert
        if e == 2:
            yield Composition._trusted(omega[:i] + omega[i + 1:])


def succeeds(omega: Composition, target: Composition, norm_cap: int) -> bool:
    """True iff ``target`` is reachable from ``omega`` by merges and inserts.

    Every intermediate pattern must have norm at most ``norm_cap``.  Each
    operation raises the reduced norm by one and never lowers the norm, so
    the search is confined to ``|target|' - |omega|'`` layers and to norms
    not above ``|target|``.
    """
    if norm_cap < sum(target) or norm_cap < sum(omega):
        raise ValueError(f"norm cap {norm_cap} is below the norms of the compared patterns")
    omega, target = Composition(omega), Composition(target)
    depth = target.reduced_norm - omega.reduced_norm
    top = target.norm
    if depth < 0 or omega.norm > top or (top - omega.norm) % 2:
        return False
    layer = {omega}
    for _ in range(depth):
        layer = {s for w in layer for s in successors(w, top)}
        if not layer:
            return False
    return target in layer


def reachable(sources: Iterable[Composition], cap: int) -> set[Composition]:
    """Everything reachable from ``sources`` (inclusive) within norm ``cap``."""
    seen = set(sources)
    queue = deque(seen)
    while queue:
        w = queue.popleft()
        for s in successors(w, cap):
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return seen


def compositions_of(m: int) -> Iterator[Composition]:
    """All compositions of ``m`` in lexicographic order (``()`` for ``m=0``)."""
    if m == 0:
        yield Composition()
        return
    # cut points in {1..m-1}; lexicographic order is produced by recursion
    def rec(rest: int) -> Iterator[tuple]:
        if rest == 0:
            yield ()
            return
        for first in range(1, rest + 1):
            for tail in rec(rest - first):
                yield (first,) + tail

    for entries in rec(m):
        yield Composition._trusted(entries)


def basepoint(d: int) -> Composition:
    """The chamber containing the base point: ``()`` for even d, ``(1)`` for odd d."""
    return Composition() if d % 2 == 0 else Composition._trusted((1,))


def enumerate_patterns(d: int, parity: str | None = None, exclude_basepoint: bool = False) -> list[Composition]:
    """Patterns of norm ``<= d`` with the given norm parity.

    ``parity`` is ``"even"`` or ``"odd"`` and defaults to the parity of ``d``.
    Ordered by ascending norm, then colexicographically (see ``sort_key``).
    """
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if parity is None:
        parity = "even" if d % 2 == 0 else "odd"
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    r = 0 if parity == "even" else 1
    skip = basepoint(d) if exclude_basepoint else None
    out = []
    for m in range(r, d + 1, 2):
        block = [w for w in compositions_of(m) if w != skip]
        block.sort(key=Composition.sort_key)
        out.extend(block)
    return out


_TERM = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_composition(text: str) -> Composition:
    """Parse ``"1,2,1"``, ``"1^3,2"`` or ``"()"``; parentheses are optional."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if s in ("", "∅"):
        return Composition()
    entries: list[int] = []
    for part in s.split(","):
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"cannot parse composition term {part!r} in {text!r}")
        value = int(m.group(1))
        power = int(m.group(2)) if m.group(2) is not None else 1
        if value < 1 or power < 1:
            raise ValueError(f"composition terms must be positive: {text!r}")
        entries.extend([value] * power)
    return Composition(entries)


def format_composition(omega: Iterable[int], compact: bool = False) -> str:
    """Inverse of :func:`parse_composition`; ``compact`` uses ``v^n`` runs."""
    omega = tuple(omega)
    if not omega:
        return "()"
    if not compact:
        return ",".join(map(str, omega))
    parts = []
    for value, run in itertools.groupby(omega):
        n = len(list(run))
        parts.append(f"{value}^{n}" if n > 1 else str(value))
    return ",".join(parts)

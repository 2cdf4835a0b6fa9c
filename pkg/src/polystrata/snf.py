"""Sparse integer matrices and Smith normal form over Z.

All arithmetic uses Python ints, so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = ["SparseMatrix", "SNFResult", "smith_normal_form", "elementary_divisors", "matmul"]


class SparseMatrix:
    """Column-major sparse integer matrix: ``cols[j]`` maps row -> nonzero coefficient."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Sequence[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ValueError("column count mismatch")
        self.cols = [{r: c for r, c in col.items() if c} for col in cols]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "SparseMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = int(v)
        return cls(nrows, ncols, cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        cols = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, cols)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = []
        for col in other.cols:
            acc: dict = {}
            for k, b in col.items():
                for i, a in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            cols.append(acc)
        return SparseMatrix(self.nrows, other.ncols, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


@dataclass(frozen=True)
class SNFResult:
    """Nonzero SNF diagonal ``d_1 | d_2 | ...`` and optional unimodular factors.

    When transforms were requested, ``U @ m @ V`` equals the full SNF matrix.
    """

    diagonal: tuple[int, ...]
    rank: int
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(x for x in self.diagonal if x > 1)


def matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    """Dense integer product; used to check SNF factors."""
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(ncols)] for i in range(len(a))]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m, transforms: bool = False) -> SNFResult:
    """Smith normal form of a dense (list of rows) or sparse integer matrix.

    Row/column reduction pivoting on an entry of least absolute value.
    With ``transforms=True`` the unimodular ``U`` (rows x rows) and ``V``
    (cols x cols) with ``U @ m @ V = diag`` are returned as well.
    """
    if isinstance(m, SparseMatrix):
        A = m.to_dense()
        nrows, ncols = m.shape
    else:
        A = [[int(x) for x in row] for row in m]
        nrows = len(A)
        ncols = len(A[0]) if A else 0
    U = _identity(nrows) if transforms else None
    V = _identity(ncols) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        rs, rd = A[src], A[dst]
        for c in range(t, ncols):
            if rs[c]:
                rd[c] += f * rs[c]
        if U is not None:
            us, ud = U[src], U[dst]
            for c in range(nrows):
                if us[c]:
                    ud[c] += f * us[c]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for r in range(t, nrows):
            row = A[r]
            if row[src]:
                row[dst] += f * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]

    t = 0
    while t < min(nrows, ncols):
        # least nonzero |entry| in the trailing block
        best = None
        for i in range(t, nrows):
            row = A[i]
            for j in range(t, ncols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # remainder smaller than the pivot: move it into pivot position
                best = None
                for i in range(t, nrows):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, "r")
                for j in range(t, ncols):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # pivot must divide the whole trailing block
            bad = None
            for i in range(t + 1, nrows):
                row = A[i]
                for j in range(t + 1, ncols):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    diagonal = tuple(A[i][i] for i in range(t))
    return SNFResult(diagonal, len(diagonal), U, V)


def elementary_divisors(m: SparseMatrix) -> SNFResult:
    """Nonzero SNF diagonal of a sparse matrix, without transforms.

    Unit pivots are eliminated sparsely first (each contributes a ``1``);
    the remaining block, usually tiny, goes through :func:`smith_normal_form`.
    """
    rows: dict[int, dict[int, int]] = {}
    colrows: dict[int, set] = {}
    for j, col in enumerate(m.cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
            colrows.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for pj in sorted(colrows, key=lambda c: len(colrows[c])):
            if pj not in colrows:
                continue
            cands = [i for i in colrows[pj] if abs(rows[i][pj]) == 1]
            if not cands:
                continue
            pi = min(cands, key=lambda i: (len(rows[i]), i))
            _eliminate(rows, colrows, pi, pj)
            units += 1
            progress = True
    if not rows:
        return SNFResult((1,) * units, units)
    rlist = sorted(rows)
    clist = sorted(colrows)
    cidx = {c: n for n, c in enumerate(clist)}
    dense = [[0] * len(clist) for _ in rlist]
    for n, i in enumerate(rlist):
        for j, v in rows[i].items():
            dense[n][cidx[j]] = v
    rest = smith_normal_form(dense)
    diagonal = (1,) * units + rest.diagonal
    return SNFResult(diagonal, len(diagonal))


def _eliminate(rows: dict, colrows: dict, pi: int, pj: int) -> None:
    """Clear column ``pj`` with the unit pivot at ``(pi, pj)``, then drop row and column."""
    prow = rows.pop(pi)
    pv = prow[pj]
    for i in list(colrows[pj]):
        if i == pi:
            continue
        row = rows[i]
        f = row[pj] * pv  # pv = +-1, so this is row[pj] / pv
        for j, v in prow.items():
            nv = row.get(j, 0) - f * v
            if nv:
                if j not in row:
                    colrows[j].add(i)
                row[j] = nv
            elif j in row:
                del row[j]
                colrows[j].discard(i)
        if not row:
            del rows[i]
    for j in prow:
        if j in colrows:
            colrows[j].discard(pi)
            if not colrows[j]:
                del colrows[j]
    colrows.pop(pj, None)

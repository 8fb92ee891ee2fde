"""Exact rational linear algebra via fraction-free (Bareiss) elimination.

Matrices are stored sparsely but expose a dense row-major view.  Rows are
scaled to integers before elimination; the elimination itself never leaves
the integers, and back substitution is done in ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

__all__ = [
    "ExactMatrix",
    "SolveOutcome",
    "bareiss_echelon",
    "solve",
    "rank",
    "nullspace_basis",
]


class ExactMatrix:
    """A rows x cols matrix of ``Fraction`` entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        self._data = {}
        for (i, j), v in (data or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                self._data[(i, j)] = v

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        data = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(len(rows), ncols, data)

    @classmethod
    def identity(cls, k):
        return cls(k, k, {(i, i): 1 for i in range(k)})

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    def __getitem__(self, ij):
        return self._data.get(ij, Fraction(0))

    @property
    def entries(self):
        """Dense row-major list of length rows*cols."""
        return [self[i, j] for i in range(self.rows) for j in range(self.cols)]

    def to_rows(self):
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def nonzeros(self):
        return dict(self._data)

    def column_nonzeros(self):
        cols = [dict() for _ in range(self.cols)]
        for (i, j), v in self._data.items():
            cols[j][i] = v
        return cols

    def matvec(self, x):
        if len(x) != self.cols:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self._data.items():
            if x[j]:
                out[i] += v * x[j]
        return out

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._data) == (other.rows, other.cols, other._data)

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={len(self._data)})"


@dataclass(frozen=True)
class SolveOutcome:
    solved: bool
    solution: list | None = None
    pivot_columns: list = field(default_factory=list)
    witness_row: int | None = None

    @property
    def status(self):
        return "Solved" if self.solved else "Inconsistent"


def _integer_rows(A, b=None):
    """Sparse integer rows (dict col -> int), each row scaled by its lcm of denominators."""
    rows = [dict() for _ in range(A.rows)]
    for (i, j), v in A.nonzeros().items():
        rows[i][j] = v
    if b is not None:
        for i, v in enumerate(b):
            v = Fraction(v)
            if v:
                rows[i][A.cols] = v
    out = []
    for r in rows:
        m = 1
        for v in r.values():
            m = lcm(m, v.denominator)
        out.append({j: int(v * m) for j, v in r.items()})
    return out


def bareiss_echelon(rows, ncols, on_pivot=None):
    """Fraction-free row echelon form of sparse integer rows.

    Columns are scanned left to right; a column becomes a pivot column iff it
    is independent of the columns before it.  Every remaining row is updated
    at each step with ``(p*a_ij - a_ik*a_kj) // prev``, which is exact.

    Returns ``(pivots, remaining)`` where ``pivots`` is a list of
    ``(column, row_index, row)`` in elimination order and ``remaining`` maps
    unused row indices to their fully reduced rows.  ``on_pivot`` is called
    with each pivot value (used by the tests to watch integrality).
    """
    active = {i: dict(r) for i, r in enumerate(rows) if r}
    zero_rows = {i: {} for i, r in enumerate(rows) if not r}
    # column -> set of active rows holding a nonzero there
    occ = {}
    for i, r in active.items():
        for j in r:
            occ.setdefault(j, set()).add(i)
    pivots = []
    prev = 1
    for k in range(ncols):
        cand = occ.get(k)
        if not cand:
            continue
        piv_i = min(cand, key=lambda i: (len(active[i]), i))
        prow = active.pop(piv_i)
        for j in prow:
            occ[j].discard(piv_i)
        p = prow[k]
        if on_pivot is not None:
            on_pivot(p)
        pivots.append((k, piv_i, prow))
        hit = set(occ.get(k, ()))
        for i, r in active.items():
            if i in hit:
                a = r[k]
                new = {}
                for j, v in r.items():
                    if j != k:
                        new[j] = p * v
                for j, v in prow.items():
                    if j != k:
                        new[j] = new.get(j, 0) - a * v
                for j in list(new):
                    q, rem = divmod(new[j], prev)
                    if rem:
                        raise ArithmeticError("Bareiss division not exact")
                    if q:
                        new[j] = q
                    else:
                        del new[j]
                for j in r:
                    if j not in new:
                        occ[j].discard(i)
                for j in new:
                    if j not in r:
                        occ.setdefault(j, set()).add(i)
                active[i] = new
            elif p != prev:
                for j in r:
                    q, rem = divmod(r[j] * p, prev)
                    if rem:
                        raise ArithmeticError("Bareiss division not exact")
                    r[j] = q
        prev = p
    remaining = dict(zero_rows)
    remaining.update(active)
    return pivots, remaining


def _back_substitute(pivots, ncols, rhs_col):
    x = [Fraction(0)] * ncols
    for k, _, row in reversed(pivots):
        acc = Fraction(row.get(rhs_col, 0))
        for j, v in row.items():
            if j != k and j != rhs_col and x[j]:
                acc -= v * x[j]
        x[k] = acc / row[k]
    return x


def solve(A, b):
    """Solve ``A x = b`` exactly, free variables pinned to zero.

    Returns a ``SolveOutcome``; when inconsistent, ``witness_row`` is the
    smallest row index whose reduced form reads ``0 = nonzero``.
    """
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    rows = _integer_rows(A, b)
    pivots, remaining = bareiss_echelon(rows, A.cols)
    bad = sorted(i for i, r in remaining.items() if r.get(A.cols))
    piv_cols = sorted(k for k, _, _ in pivots)
    if bad:
        return SolveOutcome(False, None, piv_cols, bad[0])
    x = _back_substitute(pivots, A.cols, A.cols)
    return SolveOutcome(True, x, piv_cols)


def rank(A):
    pivots, _ = bareiss_echelon(_integer_rows(A), A.cols)
    return len(pivots)


def nullspace_basis(A):
    """Basis of ``{x : A x = 0}``; vector for free column c has x[c] = 1."""
    pivots, _ = bareiss_echelon(_integer_rows(A), A.cols)
    piv = {k for k, _, _ in pivots}
    basis = []
    for c in range(A.cols):
        if c in piv:
            continue
        x = [Fraction(0)] * A.cols
        x[c] = Fraction(1)
        for k, _, row in reversed(pivots):
            acc = Fraction(0)
            for j, v in row.items():
                if j != k and x[j]:
                    acc -= v * x[j]
            x[k] = acc / row[k]
        basis.append(x)
    return basis

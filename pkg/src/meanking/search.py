"""Backtracking search for sets of pairwise orthogonal striations.

A striation of the ``d*d`` lattice points is stored as a tuple of group
labels indexed by ``I = j*d + i``.  Two striations are orthogonal when every
pair of groups meets in exactly one point, i.e. the ``d*d`` label pairs are
all distinct.

Columns produced by the search are in canonical labelling: labels appear in
increasing order of first occurrence, so every relabelling class has one
representative.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .designs import StriationTable
from .errors import SearchBoundExceeded, ShapeError

DEFAULT_BUDGET = 10**8
MAX_SEARCH_DIM = 6


def row_striation(d: int) -> tuple[int, ...]:
    return tuple(I // d for I in range(d * d))


def column_striation(d: int) -> tuple[int, ...]:
    return tuple(I % d for I in range(d * d))


def canonical_labels(column) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(x, len(relabel)) for x in column)


def orthogonal(c1, c2, d: int) -> bool:
    return len({(a, b) for a, b in zip(c1, c2)}) == d * d


def is_striation(column, d: int) -> bool:
    return len(column) == d * d and all(column.count(a) == d for a in range(d))


@dataclass
class PartialDesign:
    d: int
    columns: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        self.columns = [tuple(int(x) for x in c) for c in self.columns]
        for k, c in enumerate(self.columns):
            if not is_striation(c, self.d):
                raise ShapeError(f"column {k} is not a striation of {self.d * self.d} points")
        for k1 in range(len(self.columns)):
            for k2 in range(k1 + 1, len(self.columns)):
                if not orthogonal(self.columns[k1], self.columns[k2], self.d):
                    raise ShapeError(f"columns {k1} and {k2} are not orthogonal")

    def __len__(self):
        return len(self.columns)

    def to_table(self) -> StriationTable:
        """Pad to ``d + 1`` columns with copies of column 0 (zeros when empty).

        Only a complete design yields a table that passes the Latin-square check.
        """
        d = self.d
        cols = list(self.columns)
        filler = cols[0] if cols else (0,) * (d * d)
        cols += [filler] * (d + 1 - len(cols))
        return StriationTable(d, np.array(cols).T)


class Status(enum.Enum):
    EXTENDED = "extended"
    EXHAUSTED = "exhausted"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class ExtendResult:
    status: Status
    column: tuple[int, ...] | None
    nodes: int


class BudgetExceeded(Exception):
    pass


class NodeBudget:
    """Shared node counter; raises :class:`BudgetExceeded` once the limit is passed."""

    def __init__(self, limit: int = DEFAULT_BUDGET):
        if limit < 1:
            raise ValueError("budget must be at least 1")
        self.limit = limit
        self.used = 0

    @property
    def remaining(self) -> int:
        return max(self.limit - self.used, 0)


def iter_extensions(
    d: int,
    columns,
    budget: NodeBudget,
    lower: tuple[int, ...] | None = None,
    fixed: dict[int, int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield every canonical column orthogonal to all of ``columns``.

    Cells are filled in increasing ``I``; columns come out in lexicographic
    order.  ``lower`` restricts output to columns strictly greater than it and
    ``fixed`` pins the labels of chosen cells.
    """
    N = d * d
    cols = [tuple(c) for c in columns]
    full_mask = (1 << d) - 1
    used = [[0] * d for _ in cols]  # used[c][group] = labels already paired with that group
    count = [0] * d
    saturated = 0
    lab = [-1] * N
    maxlab = [-1] * (N + 1)
    tight = [lower is not None] * (N + 1)
    pin = [None] * N
    for cell, value in (fixed or {}).items():
        pin[cell] = value
    cells_of = [[c[I] for c in cols] for I in range(N)]

    I = 0
    while I >= 0:
        if I == N:
            if not tight[N]:
                yield tuple(lab)
            I -= 1
            continue
        prev = lab[I]
        groups = cells_of[I]
        if prev >= 0:
            bit = 1 << prev
            for k, g in enumerate(groups):
                used[k][g] &= ~bit
            if count[prev] == d:
                saturated &= ~bit
            count[prev] -= 1
        allowed = full_mask & ~saturated & ((1 << (maxlab[I] + 2)) - 1)
        for k, g in enumerate(groups):
            allowed &= ~used[k][g]
        if pin[I] is not None:
            allowed &= 1 << pin[I]
        if tight[I]:
            allowed &= ~((1 << lower[I]) - 1)
        allowed &= ~((1 << (prev + 1)) - 1)
        if not allowed:
            lab[I] = -1
            I -= 1
            continue
        g = (allowed & -allowed).bit_length() - 1
        budget.used += 1
        if budget.used > budget.limit:
            raise BudgetExceeded
        bit = 1 << g
        for k, grp in enumerate(groups):
            used[k][grp] |= bit
        count[g] += 1
        if count[g] == d:
            saturated |= bit
        lab[I] = g
        maxlab[I + 1] = max(maxlab[I], g)
        tight[I + 1] = tight[I] and g == lower[I]
        I += 1


def extend(pd: PartialDesign, budget: int = DEFAULT_BUDGET) -> ExtendResult:
    """Find one more striation orthogonal to every column of ``pd``.

    From an empty design the row striation comes first, then the column
    striation.  ``EXHAUSTED`` is a complete proof that no extension exists.
    """
    d = pd.d
    if not pd.columns:
        return ExtendResult(Status.EXTENDED, row_striation(d), 1)
    if len(pd.columns) == 1 and pd.columns[0] == row_striation(d):
        return ExtendResult(Status.EXTENDED, column_striation(d), 1)
    counter = NodeBudget(budget)
    try:
        for col in iter_extensions(d, pd.columns, counter):
            return ExtendResult(Status.EXTENDED, col, counter.used)
    except BudgetExceeded:
        return ExtendResult(Status.BUDGET_EXCEEDED, None, counter.used)
    return ExtendResult(Status.EXHAUSTED, None, counter.used)


def bruck_ryser_excludes(d: int) -> bool:
    """True when d = 1 or 2 (mod 4) and d is not a sum of two squares, which rules out d+1 striations."""
    if d % 4 not in (1, 2):
        return False
    a = 0
    while a * a <= d:
        b = int(round((d - a * a) ** 0.5))
        if b * b == d - a * a:
            return False
        a += 1
    return True


@dataclass
class SearchResult:
    d: int
    count: int
    design: PartialDesign
    proven: bool
    nodes: int
    budget: int
    all_squares: bool = False
    squares_examined: int = 0

    @property
    def bruck_ryser_excludes(self) -> bool:
        return bruck_ryser_excludes(self.d)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "count": self.count,
            "proven": self.proven,
            "nodes": self.nodes,
            "budget": self.budget,
            "all_squares": self.all_squares,
            "squares_examined": self.squares_examined,
            "upper_bound": self.d + 1,
            "bruck_ryser_excludes": self.bruck_ryser_excludes,
            "columns": [list(c) for c in self.design.columns],
        }


class _Complete(Exception):
    pass


def transversals(column, d: int, budget: NodeBudget | None = None) -> list[tuple[int, ...]]:
    """All transversals of the Latin square held in ``column``.

    A transversal picks one cell per row, one per column and one per symbol;
    it is returned as the tuple of chosen column indices, row by row.
    """
    found = []
    pick = [0] * d

    def walk(j, cols_used, syms_used):
        if j == d:
            found.append(tuple(pick))
            return
        for i in range(d):
            sym = column[j * d + i]
            if not (cols_used >> i) & 1 and not (syms_used >> sym) & 1:
                if budget is not None:
                    budget.used += 1
                    if budget.used > budget.limit:
                        raise BudgetExceeded
                pick[j] = i
                walk(j + 1, cols_used | (1 << i), syms_used | (1 << sym))

    walk(0, 0, 0)
    return found


def orthogonal_mate(column, d: int, budget: NodeBudget | None = None) -> tuple[int, ...] | None:
    """A striation orthogonal to rows, columns and ``column``, found via disjoint transversals.

    Independent of :func:`iter_extensions`: a mate exists iff the cells split
    into ``d`` disjoint transversals.  Returns the mate in canonical labels.
    """
    trans = transversals(column, d, budget)
    masks = [sum(1 << (j * d + i) for j, i in enumerate(t)) for t in trans]
    # every transversal has exactly one cell in row 0; cover row-0 cells in order
    by_first = [[k for k, t in enumerate(trans) if t[0] == i] for i in range(d)]
    chosen: list[int] = []

    def cover(i, covered):
        if i == d:
            return True
        for k in by_first[i]:
            if not masks[k] & covered:
                if budget is not None:
                    budget.used += 1
                    if budget.used > budget.limit:
                        raise BudgetExceeded
                chosen.append(k)
                if cover(i + 1, covered | masks[k]):
                    return True
                chosen.pop()
        return False

    if not cover(0, 0):
        return None
    mate = [0] * (d * d)
    for label, k in enumerate(chosen):
        for j, i in enumerate(trans[k]):
            mate[j * d + i] = label
    return canonical_labels(mate)


def max_striations(
    d: int,
    budget: int = DEFAULT_BUDGET,
    all_squares: bool = False,
    max_dim: int = MAX_SEARCH_DIM,
    progress: Callable[[str], None] | None = None,
) -> SearchResult:
    """Largest set of pairwise orthogonal striations, by exhaustive backtracking.

    The rows and columns striations are fixed first.  With ``all_squares`` the
    third striation is additionally restricted to reduced Latin squares (first
    column in natural order), which is what makes the d=6 search complete in
    reasonable time.  ``proven`` is True when the search finished within budget.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if d > max_dim:
        raise SearchBoundExceeded(f"d={d} exceeds the search bound {max_dim}")
    counter = NodeBudget(budget)
    base = [row_striation(d), column_striation(d)]
    best = list(base)
    squares = 0
    reduced = {j * d: j for j in range(d)} if all_squares else None

    def dfs(cols, lower, depth):
        nonlocal best, squares
        fixed = reduced if depth == 2 else None
        for col in iter_extensions(d, cols, counter, lower=lower, fixed=fixed):
            if depth == 2:
                squares += 1
                if progress and squares % 1000 == 0:
                    progress(f"d={d}: {squares} squares examined, {counter.used} nodes, best {len(best)}")
            new = cols + [col]
            if depth == 2 and all_squares and len(best) >= 3 and orthogonal_mate(col, d, counter) is None:
                continue
            if len(new) > len(best):
                best = new
                if progress:
                    progress(f"d={d}: found {len(best)} orthogonal striations")
            if len(best) == d + 1:
                raise _Complete
            # later columns are kept in increasing order; the reduced third one is exempt
            nxt_lower = None if (depth == 2 and all_squares) else col
            dfs(new, nxt_lower, depth + 1)

    proven = True
    try:
        dfs(base, None, 2)
    except _Complete:
        pass
    except BudgetExceeded:
        proven = False
    if len(best) > d + 1:
        raise AssertionError("found more than d+1 orthogonal striations")
    return SearchResult(d, len(best), PartialDesign(d, best), proven, counter.used, budget,
                        all_squares, squares)


def latin_square_column(square) -> tuple[int, ...]:
    """Flatten a ``d x d`` Latin square ``L[j][i]`` into a striation column."""
    d = len(square)
    return tuple(int(square[I // d][I % d]) for I in range(d * d))

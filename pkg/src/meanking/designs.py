"""Striation tables: mutually unbiased strings, orthogonal Latin squares, and
the Fourier matrix that links the two conditions.

A table ``s`` has shape ``(d*d, d+1)``.  Row ``I = j*d + i`` is lattice point
``(i, j)``; column ``A`` is a striation (Latin square) whose group labels are
``0 .. d-1``.  Read row-wise, the same table is a set of ``d*d`` strings of
length ``d + 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ShapeError
from .gf import field_of_order
from .linalg import DEFAULT_TOL, unitarity_deviations
from .report import ProtocolReport


@dataclass
class StriationTable:
    d: int
    s: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=np.int64)
        if s.shape != (self.d * self.d, self.d + 1):
            raise ShapeError(f"expected table of shape {(self.d * self.d, self.d + 1)}, got {s.shape}")
        if s.size and (s.min() < 0 or s.max() >= self.d):
            raise ShapeError(f"entries must lie in 0..{self.d - 1}")
        s.setflags(write=False)
        self.s = s

    def __eq__(self, other):
        return isinstance(other, StriationTable) and self.d == other.d and np.array_equal(self.s, other.s)

    def strings(self) -> list[str]:
        sep = "" if self.d <= 10 else ","
        return [sep.join(str(int(c)) for c in row) for row in self.s]

    def square(self, A: int) -> np.ndarray:
        """Column ``A`` as a ``d x d`` grid indexed ``[j, i]``."""
        return self.s[:, A].reshape(self.d, self.d)

    def with_entry(self, I: int, A: int, value: int) -> StriationTable:
        s = self.s.copy()
        s[I, A] = value
        return StriationTable(self.d, s)


def build_striations(d: int) -> StriationTable:
    """``s((i,j), A) = j - A*i`` in GF(d) for ``A < d`` and ``i`` for ``A = d``."""
    F = field_of_order(d)
    add, mul, neg = F.add_table, F.mul_table, F.neg_table
    s = np.empty((d * d, d + 1), dtype=np.int64)
    for j in range(d):
        for i in range(d):
            I = j * d + i
            for A in range(d):
                s[I, A] = add[j, neg[mul[A, i]]]
            s[I, d] = i
    return StriationTable(d, s)


def string_overlaps(t: StriationTable) -> np.ndarray:
    """``N[I, I'] = sum_A delta(s[I,A], s[I',A])``."""
    s = t.s
    return (s[:, None, :] == s[None, :, :]).sum(axis=2)


def verify_strings(t: StriationTable) -> ProtocolReport:
    d = t.d
    n = string_overlaps(t)
    expected = np.ones_like(n)
    np.fill_diagonal(expected, d + 1)
    bad = np.argwhere(n != expected)
    witness = None
    if bad.size:
        I, I2 = (int(x) for x in bad[0])
        witness = {"I": I, "I2": I2, "overlap": int(n[I, I2]), "expected": int(expected[I, I2])}
    return ProtocolReport(
        check="strings",
        passed=not bad.size,
        max_deviation=float(np.abs(n - expected).max()),
        witness=witness,
        metadata={"d": d},
    )


def incidence_counts(t: StriationTable) -> np.ndarray:
    """``C[A, a, A', a'] = #{I : s[I,A] = a and s[I,A'] = a'}``."""
    d = t.d
    onehot = (t.s[:, :, None] == np.arange(d)).astype(np.int64)  # (I, A, a)
    return np.einsum("IAa,IBb->AaBb", onehot, onehot)


def verify_mols(t: StriationTable) -> ProtocolReport:
    d = t.d
    c = incidence_counts(t)
    eyeA = np.eye(d + 1, dtype=np.int64)[:, None, :, None]
    eyea = np.eye(d, dtype=np.int64)[None, :, None, :]
    expected = d * eyeA * eyea + (1 - eyeA)
    bad = np.argwhere(c != expected)
    witness = None
    if bad.size:
        A, a, A2, a2 = (int(x) for x in bad[0])
        witness = {"A": A, "a": a, "A2": A2, "a2": a2, "count": int(c[A, a, A2, a2]),
                   "expected": int(expected[A, a, A2, a2])}
    return ProtocolReport(
        check="mols",
        passed=not bad.size,
        max_deviation=float(np.abs(c - expected).max()),
        witness=witness,
        metadata={"d": d},
    )


def fourier_rows(d: int) -> list[tuple[int, int]]:
    """Row labels of the Fourier matrix: ``(0, 0)`` then ``(A, alpha >= 1)`` lexicographically."""
    return [(0, 0)] + [(A, alpha) for A in range(d + 1) for alpha in range(1, d)]


def fourier_table(t: StriationTable) -> np.ndarray:
    """``u[A, alpha, I] = omega^(alpha * s[I,A]) / d`` with ``omega = exp(2 pi i / d)``."""
    d = t.d
    alpha = np.arange(d)[None, :, None]
    phase = (alpha * t.s.T[:, None, :]) % d
    return np.exp(2j * np.pi * phase / d) / d


def fourier_matrix(t: StriationTable) -> np.ndarray:
    u = fourier_table(t)
    return np.array([u[A, alpha] for A, alpha in fourier_rows(t.d)])


def verify_equivalence(t: StriationTable, tol: float = DEFAULT_TOL) -> ProtocolReport:
    """Run the strings, Latin-square and Fourier-unitarity tests side by side.

    The report passes when the three verdicts agree; the verdicts themselves
    are in ``details``.
    """
    strings = verify_strings(t)
    mols = verify_mols(t)
    dag_uu, uu_dag = unitarity_deviations(fourier_matrix(t))
    unitary = max(dag_uu, uu_dag) <= tol
    verdicts = {"strings_pass": strings.passed, "mols_pass": mols.passed, "unitary_pass": unitary}
    consistent = len(set(verdicts.values())) == 1
    return ProtocolReport(
        check="equivalence",
        passed=consistent,
        max_deviation=max(dag_uu, uu_dag),
        witness=None if consistent else {"verdicts": verdicts},
        details={
            **verdicts,
            "all_pass": all(verdicts.values()),
            "uu_dag_deviation": uu_dag,
            "dag_uu_deviation": dag_uu,
            "strings_witness": strings.witness,
            "mols_witness": mols.witness,
        },
        metadata={"d": t.d, "tolerance": tol},
    )


# -- document format and rendering --

def table_to_dict(t: StriationTable) -> dict:
    return {"dimension": t.d, "table": t.s.tolist()}


def table_from_dict(doc) -> StriationTable:
    if not isinstance(doc, dict) or "dimension" not in doc or "table" not in doc:
        raise ParseError("striation document needs 'dimension' and 'table'")
    d = doc["dimension"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError(f"bad dimension {d!r}")
    rows = doc["table"]
    if not isinstance(rows, list) or len(rows) != d * d or any(
        not isinstance(r, list) or len(r) != d + 1 for r in rows
    ):
        raise ShapeError(f"table must be {d * d} rows of {d + 1} entries")
    if any(not isinstance(x, int) or isinstance(x, bool) for r in rows for x in r):
        raise ParseError("table entries must be integers")
    return StriationTable(d, rows)


def save_table(t: StriationTable, sink) -> None:
    text = json.dumps(table_to_dict(t))
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w") as fh:
            fh.write(text)


def load_table(source) -> StriationTable:
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed striation document: {exc}") from exc
    return table_from_dict(doc)


def render(t: StriationTable) -> str:
    """Two views of one table: the strings, then each column as a square of labels."""
    d = t.d
    width = len(str(d * d - 1))
    lines = [f"strings s(I,A), I = {d}j + i:"]
    for I, text in enumerate(t.strings()):
        lines.append(f"  I={I:>{width}}  {text}")
    lines.append("")
    lines.append("striations (row j, column i):")
    cell = len(str(d - 1))
    blocks = [[f"A={A}".ljust(d * (cell + 1) - 1)] for A in range(d + 1)]
    for A in range(d + 1):
        sq = t.square(A)
        for j in range(d):
            blocks[A].append(" ".join(f"{int(x):>{cell}}" for x in sq[j]))
    for r in range(d + 1):
        lines.append(("  " + "   ".join(b[r] for b in blocks)).rstrip())
    return "\n".join(lines)

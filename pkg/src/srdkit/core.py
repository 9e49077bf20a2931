"""Rank transformation and sum-of-ranking-differences (SRD) scoring.

The input is a table whose columns are the solutions to compare and whose
rows are the ranked objects.  One column acts as the reference.  Every
column is converted to fractional ranks (ties share the mean of the integer
ranks they occupy) and each solution is scored by the L1 distance between
its rank column and the reference rank column, optionally normalized by the
largest distance two rankings of that size can have.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import rankdata


class SrdError(ValueError):
    """Raised for invalid tables, parameters, or file contents."""


def _check_labels(labels: tuple[str, ...], what: str) -> None:
    if len(set(labels)) != len(labels):
        dupes = sorted({x for x in labels if labels.count(x) > 1})
        raise SrdError(f"duplicate {what} labels: {', '.join(dupes)}")


@dataclass(frozen=True)
class DataTable:
    """Named real-valued matrix; rows are objects, columns are solutions.

    ``reference`` designates the reference column by label.  ``None`` means
    no column has been designated explicitly; operations that need one fall
    back to the last column, which is the conventional position for the
    reference.
    """

    values: np.ndarray
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    reference: str | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise SrdError("table values must form a non-empty 2-D matrix")
        if not np.all(np.isfinite(values)):
            raise SrdError("table values must all be finite")
        object.__setattr__(self, "values", values)
        values.flags.writeable = False
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        if len(self.row_labels) != values.shape[0]:
            raise SrdError(
                f"expected {values.shape[0]} row labels, got {len(self.row_labels)}"
            )
        if len(self.col_labels) != values.shape[1]:
            raise SrdError(
                f"expected {values.shape[1]} column labels, got {len(self.col_labels)}"
            )
        _check_labels(self.row_labels, "row")
        _check_labels(self.col_labels, "column")
        if self.reference is not None and self.reference not in self.col_labels:
            raise SrdError(f"reference column {self.reference!r} is not in the table")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def reference_label(self) -> str:
        """Designated reference column, defaulting to the last column."""
        return self.reference if self.reference is not None else self.col_labels[-1]

    def column(self, label: str) -> np.ndarray:
        try:
            j = self.col_labels.index(label)
        except ValueError:
            raise SrdError(f"no column named {label!r}") from None
        return self.values[:, j]

    def with_reference(self, label: str) -> "DataTable":
        """Return a copy with ``label`` designated as the reference column."""
        return replace(self, reference=label)

    def select_rows(self, indices) -> "DataTable":
        """Return the sub-table with the given rows, in the given order."""
        idx = list(indices)
        if len(idx) == 0:
            raise SrdError("cannot select an empty set of rows")
        return replace(
            self,
            values=self.values[idx, :],
            row_labels=tuple(self.row_labels[i] for i in idx),
        )


def from_columns(columns: dict[str, list[float]],
                 row_labels=None,
                 reference: str | None = None) -> DataTable:
    """Build a DataTable from a column-name to values mapping.

    Row labels default to "1", "2", ... which matches how unlabeled data
    frames are usually displayed.
    """
    if not columns:
        raise SrdError("at least one column is required")
    labels = tuple(columns)
    values = np.column_stack([np.asarray(columns[c], dtype=float) for c in labels])
    if row_labels is None:
        row_labels = tuple(str(i + 1) for i in range(values.shape[0]))
    return DataTable(values, tuple(row_labels), labels, reference)


def transpose(table: DataTable) -> DataTable:
    """Swap rows and columns.  Any reference designation is dropped."""
    return DataTable(table.values.T.copy(), table.col_labels, table.row_labels)


@dataclass(frozen=True)
class RankMatrix:
    """Column-wise fractional ranks of the solution columns of a table."""

    ranks: np.ndarray
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    @property
    def n_rows(self) -> int:
        return self.ranks.shape[0]

    @property
    def n_cols(self) -> int:
        return self.ranks.shape[1]


@dataclass(frozen=True)
class SrdResult:
    """Per-solution SRD scores against the reference column.

    ``raw_srd[j]`` is the L1 distance of solution j's rank column from the
    reference rank column; ``normalized_srd[j]`` divides it by
    ``max_srd(n_objects)``.  ``scores`` holds whichever of the two the
    caller asked for and is what reports display.
    """

    col_labels: tuple[str, ...]
    raw_srd: np.ndarray
    normalized_srd: np.ndarray
    n_objects: int
    reference_label: str
    normalized: bool = True

    @property
    def scores(self) -> np.ndarray:
        return self.normalized_srd if self.normalized else self.raw_srd


@dataclass(frozen=True)
class SrdDetail:
    """Step-by-step SRD computation: values, ranks, and per-row distances.

    ``distances[i, j]`` is ``|rank(solution j)[i] - rank(reference)[i]|``;
    summing a column gives that solution's raw SRD, stored in ``raw_srd``.
    """

    row_labels: tuple[str, ...]
    solution_labels: tuple[str, ...]
    reference_label: str
    solution_values: np.ndarray
    solution_ranks: np.ndarray
    distances: np.ndarray
    reference_values: np.ndarray
    reference_ranks: np.ndarray
    raw_srd: np.ndarray


def fractional_ranks(column) -> np.ndarray:
    """Rank values ascending from 1; tied values share the mean of their ranks.

    Ties are detected by exact equality of the parsed numbers.  The output
    always sums to n(n+1)/2 and every rank is a multiple of 0.5.
    """
    arr = np.asarray(column, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise SrdError("ranking requires a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise SrdError("ranking requires finite values")
    return rankdata(arr, method="average")


def max_srd(n: int) -> int:
    """Largest possible L1 distance between two rankings of n objects.

    Equals floor(n^2 / 2): n^2/2 for even n and (n^2 - 1)/2 for odd n.
    """
    if n < 1:
        raise SrdError("n must be at least 1")
    return n * n // 2


def _solution_indices(table: DataTable, ref_label: str) -> list[int]:
    return [j for j, c in enumerate(table.col_labels) if c != ref_label]


def rank_matrix(table: DataTable) -> RankMatrix:
    """Fractional ranks of every solution column.

    An explicitly designated reference column is left out of the output so
    the matrix can feed ranking tools that expect solutions only; with no
    designation every column is ranked.
    """
    if table.reference is not None:
        cols = _solution_indices(table, table.reference)
    else:
        cols = list(range(table.n_cols))
    ranks = np.column_stack([fractional_ranks(table.values[:, j]) for j in cols])
    return RankMatrix(ranks, table.row_labels, tuple(table.col_labels[j] for j in cols))


def srd_values(table: DataTable, normalize: bool = True) -> SrdResult:
    """Score every solution column by its rank distance from the reference.

    Output order follows the input column order.  ``normalize`` selects
    whether ``scores`` reports the normalized or the raw distances; both
    are always computed.
    """
    if table.n_cols < 2:
        raise SrdError("SRD needs at least two columns: solutions plus a reference")
    ref_label = table.reference_label
    ref_ranks = fractional_ranks(table.column(ref_label))
    sol = _solution_indices(table, ref_label)
    raw = np.array(
        [np.abs(fractional_ranks(table.values[:, j]) - ref_ranks).sum() for j in sol]
    )
    f = max_srd(table.n_rows)
    # n = 1 gives f = 0, but then both rankings coincide and raw is 0.
    normalized = raw / f if f else np.zeros_like(raw)
    return SrdResult(
        col_labels=tuple(table.col_labels[j] for j in sol),
        raw_srd=raw,
        normalized_srd=normalized,
        n_objects=table.n_rows,
        reference_label=ref_label,
        normalized=normalize,
    )


def detailed_srd(table: DataTable) -> SrdDetail:
    """Expanded SRD computation for inspection and teaching.

    For every solution column the result carries the original values, their
    fractional ranks, and the per-row absolute rank differences from the
    reference, together with the per-solution raw SRD totals.
    """
    if table.n_cols < 2:
        raise SrdError("SRD needs at least two columns: solutions plus a reference")
    ref_label = table.reference_label
    ref_values = table.column(ref_label)
    ref_ranks = fractional_ranks(ref_values)
    sol = _solution_indices(table, ref_label)
    values = table.values[:, sol]
    ranks = np.column_stack([fractional_ranks(values[:, k]) for k in range(len(sol))])
    distances = np.abs(ranks - ref_ranks[:, None])
    return SrdDetail(
        row_labels=table.row_labels,
        solution_labels=tuple(table.col_labels[j] for j in sol),
        reference_label=ref_label,
        solution_values=values,
        solution_ranks=ranks,
        distances=distances,
        reference_values=ref_values,
        reference_ranks=ref_ranks,
        raw_srd=distances.sum(axis=0),
    )


def tie_probability(column) -> float:
    """Fraction of adjacent positions in sorted order occupied by equal values.

    An n-long vector has n-1 adjacent positions, so the result is the
    number of tied neighbor pairs divided by n-1.
    """
    arr = np.asarray(column, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise SrdError("tie probability needs at least two values")
    if not np.all(np.isfinite(arr)):
        raise SrdError("tie probability requires finite values")
    s = np.sort(arr)
    return float(np.sum(s[1:] == s[:-1]) / (arr.size - 1))

"""Dataset loading, column standardization, and per-node regression views."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RawDataset:
    """Numeric observation matrix with named columns.

    ``values`` is n x p with one observation per row; ``column_names`` has one
    unique name per column. Values must be finite (missing data is rejected,
    not imputed).
    """

    values: np.ndarray
    column_names: tuple[str, ...]

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-dimensional, got shape {values.shape}")
        n, p = values.shape
        if n < 1:
            raise ValueError(f"need at least 1 row, got {n}")
        if p < 2:
            raise ValueError(f"need at least 2 columns, got {p}")
        names = tuple(str(c) for c in self.column_names)
        if len(names) != p:
            raise ValueError(f"{len(names)} column names for {p} columns")
        if len(set(names)) != len(names):
            dupes = sorted({c for c in names if names.count(c) > 1})
            raise ValueError(f"duplicate column names: {', '.join(dupes)}")
        if not np.isfinite(values).all():
            bad = np.argwhere(~np.isfinite(values))[0]
            raise ValueError(
                f"non-finite value at row {bad[0] + 1}, column '{names[bad[1]]}'"
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class StandardizedDataset:
    """Column-standardized matrix plus the original moments.

    Columns have mean 0 and sample standard deviation 1 (divisor n - 1).
    """

    values: np.ndarray
    column_names: tuple[str, ...]
    original_means: np.ndarray
    original_sds: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        means = np.asarray(self.original_means, dtype=float)
        sds = np.asarray(self.original_sds, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-dimensional, got shape {values.shape}")
        n, p = values.shape
        names = tuple(str(c) for c in self.column_names)
        if len(names) != p or means.shape != (p,) or sds.shape != (p,):
            raise ValueError("column names and moments must match the column count")
        if not (sds > 0).all():
            raise ValueError("original standard deviations must all be positive")
        col_means = values.mean(axis=0)
        col_sds = values.std(axis=0, ddof=1)
        if np.abs(col_means).max() > 1e-10:
            raise ValueError("standardized columns must have mean 0 within 1e-10")
        if np.abs(col_sds - 1.0).max() > 1e-10:
            raise ValueError("standardized columns must have sd 1 within 1e-10")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "original_means", means)
        object.__setattr__(self, "original_sds", sds)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class NodeView:
    """Regression view for one node: its column as response, the rest plus an
    intercept column as design.

    ``node_index`` is 1-based (a in 1..p). Design column 0 is all ones; design
    column j >= 1 holds the standardized column whose 1-based original index
    is ``predictor_indices[j - 1]``, in ascending original order.
    """

    node_index: int
    y: np.ndarray
    design: np.ndarray
    predictor_indices: tuple[int, ...]

    def __post_init__(self) -> None:
        y = np.asarray(self.y, dtype=float)
        design = np.asarray(self.design, dtype=float)
        if y.ndim != 1 or design.ndim != 2 or design.shape[0] != y.shape[0]:
            raise ValueError("response and design row counts must match")
        if design.shape[1] != len(self.predictor_indices) + 1:
            raise ValueError("design must have one column per predictor plus intercept")
        if not np.all(design[:, 0] == 1.0):
            raise ValueError("design column 0 must be the intercept (all ones)")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "design", design)
        object.__setattr__(
            self, "predictor_indices", tuple(int(b) for b in self.predictor_indices)
        )

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def n_coef(self) -> int:
        """Coefficient count: intercept plus one slot per predictor."""
        return self.design.shape[1]


def load_csv(path: str) -> RawDataset:
    """Load a rectangular numeric CSV with a header row.

    Malformed input is rejected with the offending location: ragged rows by
    1-based data row number, non-numeric cells by row and column name.
    """
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        names = [c.strip() for c in header]
        if len(set(names)) != len(names):
            dupes = sorted({c for c in names if names.count(c) > 1})
            raise ValueError(f"{path}: duplicate header names: {', '.join(dupes)}")
        rows: list[list[float]] = []
        for i, row in enumerate(reader, start=1):
            if len(row) != len(names):
                raise ValueError(
                    f"{path}: ragged row at row {i}: "
                    f"{len(row)} cells, expected {len(names)}"
                )
            parsed = []
            for j, cell in enumerate(row):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"{path}: non-numeric cell at row {i}, "
                        f"column '{names[j]}': {cell!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return RawDataset(np.array(rows, dtype=float), tuple(names))


def write_csv(path: str, values: np.ndarray, column_names: tuple[str, ...]) -> None:
    """Write a matrix as CSV with a header row, round-trip exact."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[1] != len(column_names):
        raise ValueError("matrix width must match the column name count")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(column_names)
        for row in values:
            writer.writerow([repr(float(v)) for v in row])


def standardize(raw: RawDataset) -> StandardizedDataset:
    """Center and scale every column to mean 0, sample sd 1 (divisor n - 1)."""
    if raw.n < 2:
        raise ValueError(f"standardization needs at least 2 rows, got {raw.n}")
    means = raw.values.mean(axis=0)
    sds = raw.values.std(axis=0, ddof=1)
    flat = np.flatnonzero(sds == 0.0)
    if flat.size:
        raise ValueError(f"constant column: '{raw.column_names[flat[0]]}'")
    return StandardizedDataset(
        values=(raw.values - means) / sds,
        column_names=raw.column_names,
        original_means=means,
        original_sds=sds,
    )


def node_view(data: StandardizedDataset, a: int) -> NodeView:
    """Build the regression view for node a (1-based, 1 <= a <= p)."""
    if not 1 <= a <= data.p:
        raise ValueError(f"node index {a} out of range 1..{data.p}")
    others = [b for b in range(1, data.p + 1) if b != a]
    design = np.empty((data.n, data.p))
    design[:, 0] = 1.0
    design[:, 1:] = data.values[:, [b - 1 for b in others]]
    return NodeView(
        node_index=a,
        y=data.values[:, a - 1],
        design=design,
        predictor_indices=tuple(others),
    )

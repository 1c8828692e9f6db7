"""CSV loading and description of binary-classification tabular datasets."""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FileUnreadable,
    MissingTargetColumn,
    NonBinaryTarget,
    SingleClassTarget,
)

MISSING_TOKENS = ("", "NA")


@dataclass(frozen=True)
class ColumnKinds:
    numeric: tuple
    categorical: tuple


@dataclass(frozen=True)
class Dataset:
    """Immutable tabular dataset with a binary target.

    Numeric columns are float64 with NaN marking missing cells;
    categorical columns are object arrays with None marking missing.
    """

    feature_names: tuple
    numeric: dict
    categorical: dict
    target: np.ndarray
    target_name: str
    name: str = field(default="")

    def __post_init__(self):
        self.target.setflags(write=False)
        for col in self.numeric.values():
            col.setflags(write=False)
        for col in self.categorical.values():
            col.setflags(write=False)

    @property
    def row_count(self):
        return int(self.target.shape[0])

    def column_kinds(self):
        return ColumnKinds(
            numeric=tuple(c for c in self.feature_names if c in self.numeric),
            categorical=tuple(c for c in self.feature_names if c in self.categorical),
        )


def _parse_target(token, path):
    t = token.strip()
    try:
        v = float(t)
    except ValueError:
        raise NonBinaryTarget(f"{path}: target value {token!r} is not 0/1")
    if v == 0.0:
        return 0
    if v == 1.0:
        return 1
    raise NonBinaryTarget(f"{path}: target value {token!r} is not 0/1")


def load_csv(path, target, name=""):
    """Load a UTF-8, RFC-4180 CSV with a header row into a Dataset.

    A feature column is numeric iff every non-missing cell parses as a
    real number; empty cells and the literal "NA" are missing.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise FileUnreadable(f"{path}: empty file")
            rows = [row for row in reader if row]
    except OSError as exc:
        raise FileUnreadable(f"{path}: {exc}") from exc

    if target not in header:
        raise MissingTargetColumn(f"{path}: no column named {target!r}")
    tgt_pos = header.index(target)
    feature_names = tuple(c for c in header if c != target)
    if len(set(header)) != len(header):
        raise FileUnreadable(f"{path}: duplicate column names")

    y = np.array([_parse_target(r[tgt_pos], path) for r in rows], dtype=np.int8)
    if y.size == 0:
        raise FileUnreadable(f"{path}: no data rows")
    if len(np.unique(y)) < 2:
        raise SingleClassTarget(f"{path}: target has a single class")

    numeric = {}
    categorical = {}
    feat_pos = [i for i in range(len(header)) if i != tgt_pos]
    for pos, cname in zip(feat_pos, feature_names):
        cells = [r[pos].strip() for r in rows]
        parsed = np.full(len(cells), np.nan)
        is_numeric = True
        for i, cell in enumerate(cells):
            if cell in MISSING_TOKENS:
                continue
            try:
                parsed[i] = float(cell)
            except ValueError:
                is_numeric = False
                break
        if is_numeric:
            numeric[cname] = parsed
        else:
            col = np.array(
                [None if c in MISSING_TOKENS else c for c in cells], dtype=object
            )
            categorical[cname] = col

    return Dataset(
        feature_names=feature_names,
        numeric=numeric,
        categorical=categorical,
        target=y,
        target_name=target,
        name=name or str(path),
    )


def save_csv(ds, path):
    """Write a Dataset back to CSV; reloading yields identical content."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(ds.feature_names) + [ds.target_name])
        for i in range(ds.row_count):
            row = []
            for cname in ds.feature_names:
                if cname in ds.numeric:
                    v = ds.numeric[cname][i]
                    row.append("" if np.isnan(v) else repr(float(v)))
                else:
                    v = ds.categorical[cname][i]
                    row.append("" if v is None else v)
            row.append(str(int(ds.target[i])))
            writer.writerow(row)


def prevalence(ds):
    """Fraction of rows with target == 1."""
    return float(np.count_nonzero(ds.target == 1)) / ds.row_count


def class_counts(ds):
    """(count of class 0, count of class 1)."""
    ones = int(np.count_nonzero(ds.target == 1))
    return ds.row_count - ones, ones

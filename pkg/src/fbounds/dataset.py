"""Unit-level records from observational and randomized-factorial regimes."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Tuple, Union

import numpy as np

from .model import CanonicalModel, forward_factorial, forward_observational

OBS = 0
EXP = 1
REGIME_NAMES = {OBS: "obs", EXP: "exp"}
CSV_HEADER = ("regime", "a", "b", "y")


class DatasetFormatError(ValueError):
    pass


def _column(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int8).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Columns of equal length; ``regime`` is 0 for observational rows, 1 for experimental."""

    regime: np.ndarray
    a: np.ndarray
    b: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        cols = [_column(c) for c in (self.regime, self.a, self.b, self.y)]
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise DatasetFormatError("dataset columns must have equal length")
        for name, c in zip(CSV_HEADER, cols):
            if c.size and (c.min() < 0 or c.max() > 1):
                raise DatasetFormatError(f"column {name!r} must contain only 0/1 values")
        for name, c in zip(("regime", "a", "b", "y"), cols):
            object.__setattr__(self, name, c)

    @classmethod
    def empty(cls) -> "Dataset":
        return cls([], [], [], [])

    @classmethod
    def from_rows(cls, rows) -> "Dataset":
        rows = list(rows)
        if not rows:
            return cls.empty()
        reg, a, b, y = zip(*rows)
        reg = [r if isinstance(r, (int, np.integer)) else {"obs": OBS, "exp": EXP}[r] for r in reg]
        return cls(reg, a, b, y)

    def __len__(self) -> int:
        return len(self.regime)

    def rows(self) -> Iterator[Tuple[str, int, int, int]]:
        for r, a, b, y in zip(self.regime, self.a, self.b, self.y):
            yield REGIME_NAMES[int(r)], int(a), int(b), int(y)

    def subset(self, index) -> "Dataset":
        return Dataset(self.regime[index], self.a[index], self.b[index], self.y[index])

    @property
    def n_obs(self) -> int:
        return int(np.sum(self.regime == OBS))

    def arm_sizes(self) -> np.ndarray:
        """Experimental row counts per arm as a 2x2 array."""
        exp = self.regime == EXP
        sizes = np.zeros((2, 2), dtype=int)
        np.add.at(sizes, (self.a[exp], self.b[exp]), 1)
        return sizes

    @staticmethod
    def concat(*parts: "Dataset") -> "Dataset":
        return Dataset(*(np.concatenate([getattr(p, c) for p in parts]) for c in ("regime", "a", "b", "y")))


def sample_dataset(model: CanonicalModel, n_obs: int, n_per_arm: int, seed) -> Dataset:
    """Draw ``n_obs`` observational rows and ``n_per_arm`` rows in each of the four arms."""
    if n_obs < 0 or n_per_arm < 0:
        raise ValueError("sample sizes must be nonnegative")
    rng = np.random.default_rng(seed)
    p = forward_observational(model).p.reshape(-1)
    cells = rng.choice(8, size=n_obs, p=p / p.sum())
    obs = Dataset(np.full(n_obs, OBS), cells // 4, (cells // 2) % 2, cells % 2)
    r = forward_factorial(model).r
    arms = []
    for a in (0, 1):
        for b in (0, 1):
            y = (rng.random(n_per_arm) < r[a, b, 1]).astype(np.int8)
            arms.append(Dataset(np.full(n_per_arm, EXP), np.full(n_per_arm, a), np.full(n_per_arm, b), y))
    return Dataset.concat(obs, *arms)


def read_csv(source: Union[str, Path, io.TextIOBase]) -> Dataset:
    """Parse a ``regime,a,b,y`` CSV; errors name the offending line."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_csv(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None:
        raise DatasetFormatError("line 1: empty file, expected header 'regime,a,b,y'")
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise DatasetFormatError(f"line 1: expected header 'regime,a,b,y', got {','.join(header)!r}")
    cols = ([], [], [], [])
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise DatasetFormatError(f"line {lineno}: expected 4 fields, got {len(row)}")
        regime = row[0].strip()
        if regime not in ("obs", "exp"):
            raise DatasetFormatError(f"line {lineno}: regime must be 'obs' or 'exp', got {regime!r}")
        cols[0].append(OBS if regime == "obs" else EXP)
        for name, field, col in zip(CSV_HEADER[1:], row[1:], cols[1:]):
            field = field.strip()
            if field not in ("0", "1"):
                raise DatasetFormatError(f"line {lineno}: {name} must be 0 or 1, got {field!r}")
            col.append(int(field))
    return Dataset(*cols)


def write_csv(data: Dataset, target: Union[str, Path, io.TextIOBase]) -> None:
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as fh:
            write_csv(data, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(data.rows())

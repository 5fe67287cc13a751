"""Count-data container, the two embedded reference datasets, and CSV I/O."""

from __future__ import annotations

import csv
import io
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

import numpy as np

__all__ = [
    "CountData",
    "NamedDataset",
    "DataError",
    "dataset_I",
    "dataset_II",
    "builtin",
    "load_counts",
    "dump_counts",
]


class DataError(ValueError):
    """Malformed or invalid count data."""


@dataclass(frozen=True, eq=False)
class CountData:
    """A multiset of non-negative integers stored as ``(value, frequency)`` pairs.

    ``values`` is strictly increasing and every frequency is positive.
    """

    values: np.ndarray
    freqs: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.int64).ravel()
        f = np.asarray(self.freqs, dtype=np.int64).ravel()
        if v.shape != f.shape:
            raise DataError("values and freqs must have the same length")
        if v.size == 0 or f.sum() < 1:
            raise DataError("count data must contain at least one observation")
        if np.any(v < 0):
            raise DataError("count values must be non-negative")
        if np.any(f < 0):
            raise DataError("frequencies must be non-negative")
        keep = f > 0
        v, f = v[keep], f[keep]
        order = np.argsort(v, kind="stable")
        v, f = v[order], f[order]
        if np.any(np.diff(v) == 0):
            uniq, inv = np.unique(v, return_inverse=True)
            f = np.bincount(inv, weights=f).astype(np.int64)
            v = uniq
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "freqs", f)

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "CountData":
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
        if arr.size == 0:
            raise DataError("count data must contain at least one observation")
        if not np.issubdtype(arr.dtype, np.integer):
            if np.any(arr != np.floor(arr)):
                raise DataError("count values must be integers")
        uniq, counts = np.unique(arr.astype(np.int64), return_counts=True)
        return cls(uniq, counts)

    @classmethod
    def from_pairs(cls, pairs: Mapping[int, int] | Iterable[tuple[int, int]]) -> "CountData":
        items = list(pairs.items()) if isinstance(pairs, Mapping) else list(pairs)
        if not items:
            raise DataError("count data must contain at least one observation")
        v, f = zip(*items)
        return cls(np.array(v), np.array(f))

    @property
    def n(self) -> int:
        return int(self.freqs.sum())

    @property
    def mean(self) -> float:
        return float(np.dot(self.values, self.freqs) / self.n)

    @property
    def max(self) -> int:
        return int(self.values[-1])

    def as_dict(self) -> dict[int, int]:
        return {int(v): int(f) for v, f in zip(self.values, self.freqs)}

    def to_values(self) -> np.ndarray:
        return np.repeat(self.values, self.freqs)

    def frequency(self, value: int) -> int:
        return self.as_dict().get(int(value), 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountData):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(tuple(self.as_dict().items()))

    def __repr__(self) -> str:
        return f"CountData(n={self.n}, {self.as_dict()})"


@dataclass(frozen=True)
class NamedDataset:
    name: str
    data: CountData
    provenance: str
    top_coded: int | None = None
    description: str = field(default="", compare=False)


def dataset_I() -> NamedDataset:
    """Numbers of women working on shells over five weeks (n = 647).

    The last cell is top-coded ("5 or more") and is stored as the value 5.
    """
    return NamedDataset(
        name="I",
        data=CountData.from_pairs({0: 447, 1: 132, 2: 42, 3: 21, 4: 3, 5: 2}),
        provenance="Consul and Jain (1973)",
        top_coded=5,
        description="number of women working on shells for 5 weeks",
    )


def dataset_II() -> NamedDataset:
    """Counts of kidney cysts in patients treated with steroids (n = 110)."""
    return NamedDataset(
        name="II",
        data=CountData.from_pairs(
            {0: 65, 1: 14, 2: 10, 3: 6, 4: 4, 5: 2, 6: 2, 7: 2, 8: 1, 9: 1, 10: 1, 11: 2}
        ),
        provenance="Chan et al. (2009)",
        top_coded=None,
        description="counts of cysts of kidneys using steroids",
    )


_BUILTINS = {"I": dataset_I, "II": dataset_II}


def builtin(name: str) -> NamedDataset:
    key = name.removeprefix("builtin:")
    try:
        return _BUILTINS[key]()
    except KeyError:
        raise DataError(f"unknown builtin dataset {name!r}; choose from {sorted(_BUILTINS)}") from None


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _is_int_token(tok: str) -> bool:
    try:
        int(tok.strip())
    except ValueError:
        return False
    return True


def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        val = int(tok.strip())
    except ValueError:
        raise DataError(f"line {lineno}: {what} {tok.strip()!r} is not an integer") from None
    if val < 0:
        raise DataError(f"line {lineno}: negative {what} {val}")
    return val


def load_counts(source: str | os.PathLike | TextIO, format: str | None = None) -> CountData:
    """Parse count data from CSV.

    Two layouts are accepted: one integer per line (``"raw"``), or two columns
    ``value,frequency`` (``"pairs"``).  A header row is recognized by a
    non-numeric first token.  When ``format`` is omitted it is inferred from
    the column count of the first data row.
    """
    if isinstance(source, (str, os.PathLike)) and not isinstance(source, io.IOBase):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_counts(fh, format)
    if format not in (None, "raw", "pairs"):
        raise ValueError(f"unknown format {format!r}")

    counts: Counter[int] = Counter()
    seen_data = False
    for lineno, row in enumerate(csv.reader(source), start=1):
        row = [c for c in row if c.strip() != ""] if row else row
        if not row:
            continue
        if not seen_data and not _is_int_token(row[0]):
            seen_data = True  # header
            if format is None:
                format = "pairs" if len(row) >= 2 else "raw"
            continue
        seen_data = True
        if format is None:
            format = "pairs" if len(row) >= 2 else "raw"
        if format == "raw":
            if len(row) != 1:
                raise DataError(f"line {lineno}: expected one value, got {len(row)} fields")
            counts[_parse_int(row[0], lineno, "value")] += 1
        else:
            if len(row) != 2:
                raise DataError(f"line {lineno}: expected value,frequency, got {len(row)} fields")
            counts[_parse_int(row[0], lineno, "value")] += _parse_int(row[1], lineno, "frequency")
    if sum(counts.values()) < 1:
        raise DataError("no observations found")
    return CountData.from_pairs(sorted(counts.items()))


def dump_counts(data: CountData, sink: str | os.PathLike | TextIO, format: str = "pairs") -> None:
    """Write count data in either CSV layout accepted by :func:`load_counts`."""
    if isinstance(sink, (str, os.PathLike)) and not isinstance(sink, io.IOBase):
        with open(sink, "w", newline="", encoding="utf-8") as fh:
            dump_counts(data, fh, format)
            return
    w = csv.writer(sink, lineterminator="\n")
    if format == "pairs":
        w.writerow(["value", "frequency"])
        for v, f in zip(data.values, data.freqs):
            w.writerow([int(v), int(f)])
    elif format == "raw":
        w.writerow(["value"])
        for v in data.to_values():
            w.writerow([int(v)])
    else:
        raise ValueError(f"unknown format {format!r}")

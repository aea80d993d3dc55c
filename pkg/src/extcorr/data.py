"""Dataset container, CSV I/O, synthetic FC/FU generators and noise injection.

CSV dialect: UTF-8, comma separated, ``.`` as decimal point, one mandatory
header row of unique column names, every other cell a finite real number.
"""

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np
from sklearn.utils.validation import check_array

from ._random import make_rng, uniform
from .exceptions import CSVParseError, DataError, ParameterError, UnknownColumnError

__all__ = [
    "DataMatrix",
    "Label",
    "SignPattern",
    "add_noise",
    "check_data_matrix",
    "default_column_names",
    "gen_fc",
    "gen_fu",
    "median_label",
    "read_csv",
    "write_csv",
]


def default_column_names(n):
    """Spreadsheet-style names: A, B, ..., Z, AA, AB, ..."""
    names = []
    for i in range(n):
        name = ""
        i += 1
        while i:
            i, rem = divmod(i - 1, 26)
            name = chr(ord("A") + rem) + name
        names.append(name)
    return names


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """An ``m x n`` table of finite reals with named columns.

    Rows are samples, columns are variables.  ``values`` is stored as a
    read-only float64 array so a DataMatrix can be shared freely.
    """

    column_names: tuple
    values: np.ndarray

    def __post_init__(self):
        names = tuple(str(c) for c in self.column_names)
        values = check_data_matrix(self.values)
        if len(names) != values.shape[1]:
            raise DataError(
                f"{len(names)} column names for {values.shape[1]} columns"
            )
        if len(set(names)) != len(names):
            dup = sorted({c for c in names if names.count(c) > 1})
            raise DataError(f"duplicate column names: {', '.join(dup)}")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, values, column_names=None):
        values = np.asarray(values, dtype=float)
        if column_names is None:
            column_names = default_column_names(values.shape[1] if values.ndim == 2 else 0)
        return cls(tuple(column_names), values)

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape

    def column_index(self, name):
        try:
            return self.column_names.index(name)
        except ValueError:
            raise UnknownColumnError(name) from None

    def column(self, name):
        return self.values[:, self.column_index(name)]

    def select(self, names):
        """Return a new DataMatrix holding only ``names``, in the given order."""
        idx = [self.column_index(c) for c in names]
        return DataMatrix(tuple(names), self.values[:, idx])

    def drop(self, name):
        keep = [c for c in self.column_names if c != name]
        self.column_index(name)
        return self.select(keep)

    def head(self, k):
        return DataMatrix(self.column_names, self.values[:k])

    def __eq__(self, other):
        if not isinstance(other, DataMatrix):
            return NotImplemented
        return self.column_names == other.column_names and np.array_equal(
            self.values, other.values
        )

    def __repr__(self):
        m, n = self.shape
        return f"DataMatrix({m}x{n}, columns={list(self.column_names)})"


def check_data_matrix(values):
    """Validate a 2-D finite array with at least 2 rows and 2 columns."""
    try:
        return check_array(
            values,
            dtype=np.float64,
            ensure_all_finite=True,
            ensure_min_samples=2,
            ensure_min_features=2,
        )
    except ValueError as exc:
        raise DataError(str(exc)) from exc


@dataclass(frozen=True)
class SignPattern:
    """Sign vector ``s`` in {+1, -1}^n with ``s[0] = +1``.

    ``s s^T`` is the correlation matrix of the matching FC-dataset; the
    ``2**(n-1)`` canonical patterns enumerate every FC correlation matrix.
    """

    signs: tuple

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if not signs:
            raise ParameterError("sign pattern must not be empty")
        if any(s not in (1, -1) for s in signs):
            raise ParameterError(f"sign pattern entries must be +1 or -1, got {self.signs}")
        if signs[0] != 1:
            raise ParameterError("sign pattern must start with +1")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def parse(cls, text):
        """Parse a string such as ``"++-"``."""
        mapping = {"+": 1, "-": -1, "−": -1}
        try:
            return cls(tuple(mapping[ch] for ch in text.strip()))
        except KeyError as exc:
            raise ParameterError(f"invalid sign character {exc.args[0]!r} in {text!r}") from None

    @classmethod
    def all_canonical(cls, n):
        """Every canonical pattern of length ``n`` (``2**(n-1)`` of them)."""
        out = []
        for bits in range(2 ** (n - 1)):
            tail = tuple(-1 if bits >> (n - 2 - j) & 1 else 1 for j in range(n - 1))
            out.append(cls((1,) + tail))
        return out

    def __len__(self):
        return len(self.signs)

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in self.signs)

    def as_array(self):
        return np.array(self.signs, dtype=float)


class Label(enum.IntEnum):
    LOWER = 0
    UPPER = 1


def read_csv(path):
    """Read a dataset from ``path``.

    Raises
    ------
    OSError
        If the file cannot be opened.
    CSVParseError
        On a non-numeric or non-finite cell, or a row of the wrong arity.
        The message names the 1-based file line and the column.
    DataError
        On a missing/duplicate header or fewer than 2 rows or columns.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, header row required") from None
        header = [h.strip() for h in header]
        if len(header) < 2:
            raise DataError(f"{path}: need at least 2 columns, found {len(header)}")
        if any(not h for h in header):
            raise DataError(f"{path}: empty column name in header")
        if len(set(header)) != len(header):
            dup = sorted({h for h in header if header.count(h) > 1})
            raise DataError(f"{path}: duplicate column names: {', '.join(dup)}")

        rows = []
        for line_no, raw in enumerate(reader, start=2):
            if not raw or all(not cell.strip() for cell in raw):
                continue
            if len(raw) != len(header):
                raise CSVParseError(
                    f"{path}: row {line_no} has {len(raw)} fields, expected {len(header)}",
                    row=line_no,
                )
            row = []
            for name, cell in zip(header, raw):
                try:
                    value = float(cell)
                except ValueError:
                    value = math.nan
                if not math.isfinite(value):
                    raise CSVParseError(
                        f"{path}: row {line_no}, column {name!r}: "
                        f"{cell!r} is not a finite number",
                        row=line_no,
                        column=name,
                    )
                row.append(value)
            rows.append(row)

    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows, found {len(rows)}")
    return DataMatrix(tuple(header), np.array(rows, dtype=float))


def format_value(x):
    """Shortest repr that round-trips the float exactly."""
    return repr(float(x))


def write_csv(data, fh):
    """Write ``data`` to the text stream ``fh`` in the package's CSV dialect.

    Values are written with the shortest round-trip representation so that
    ``read_csv`` restores them bit for bit.
    """
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(data.column_names)
    for row in data.values:
        writer.writerow([format_value(v) for v in row])


def gen_fc(pattern, rows, seed, column_names=None):
    """Generate a fully-correlated dataset.

    A strictly increasing base series ``t`` (cumulative sum of positive
    uniform steps) is drawn first; column ``j`` is then
    ``signs[j] * (a_j * t + b_j)`` with ``a_j`` in [0.5, 5) and
    ``b_j`` in [-10, 10).  Every prefix of two or more rows therefore has
    pairwise correlation exactly ``signs[i] * signs[j]``.
    """
    if not isinstance(pattern, SignPattern):
        pattern = SignPattern(tuple(pattern))
    rows = int(rows)
    if rows < 3:
        raise ParameterError(f"gen_fc needs rows >= 3, got {rows}")
    n = len(pattern)
    rng = make_rng(seed)
    base = np.cumsum(uniform(rng, 0.1, 1.1, rows))
    scales = uniform(rng, 0.5, 5.0, n)
    offsets = uniform(rng, -10.0, 10.0, n)
    values = pattern.as_array() * (np.outer(base, scales) + offsets)
    if column_names is None:
        column_names = default_column_names(n)
    return DataMatrix(tuple(column_names), values)


def _dot(x, y):
    return math.fsum(x * y)


def _orthogonal_block(rng, rows, n_vars):
    # modified Gram-Schmidt on centred columns, two passes; fsum dot
    # products keep the result independent of the BLAS build
    cols = []
    for j in range(n_vars):
        v = uniform(rng, -1.0, 1.0, rows)
        v = v - math.fsum(v) / rows
        for _ in range(2):
            for q in cols:
                v = v - _dot(q, v) * q
            v = v - math.fsum(v) / rows
        cols.append(v / math.sqrt(_dot(v, v)))
    return np.column_stack(cols)


def gen_fu(n_vars, rows, seed, column_names=None):
    """Generate a fully-uncorrelated dataset.

    The first ``n_vars + 1`` rows are centred random columns orthogonalised
    against each other, then rescaled (std in [1, 10)) and shifted
    (offset in [-10, 10)).  Each later row equals the running column means
    except in one column (cycling through the columns) which receives a
    random deviation.  Because a new row deviates from the prefix mean in a
    single coordinate, every cross co-moment stays exactly zero, so every
    prefix of ``n_vars + 1`` or more rows has an identity correlation
    matrix, not just the full table.
    """
    n_vars = int(n_vars)
    rows = int(rows)
    if n_vars < 2:
        raise ParameterError(f"gen_fu needs n_vars >= 2, got {n_vars}")
    if rows <= n_vars:
        raise ParameterError(f"gen_fu needs rows > n_vars, got rows={rows}, n_vars={n_vars}")
    rng = make_rng(seed)
    k0 = n_vars + 1
    scales = uniform(rng, 1.0, 10.0, n_vars)
    offsets = uniform(rng, -10.0, 10.0, n_vars)
    block = _orthogonal_block(rng, k0, n_vars)
    block = block / block.std(axis=0) * scales + offsets

    values = np.empty((rows, n_vars))
    values[:k0] = block
    extra = rows - k0
    if extra:
        steps = uniform(rng, 0.5, 2.0, extra) * np.where(rng.random_sample(extra) < 0.5, -1.0, 1.0)
        for t in range(k0, rows):
            j = (t - k0) % n_vars
            for c in range(n_vars):
                values[t, c] = math.fsum(values[:t, c]) / t
            values[t, j] += steps[t - k0] * scales[j]
    if column_names is None:
        column_names = default_column_names(n_vars)
    return DataMatrix(tuple(column_names), values)


def add_noise(data, amplitude, seed, columns=None):
    """Perturb every cell by an independent uniform draw on ``[-a, a]``.

    One draw is taken per cell of the whole table in row-major order, even
    when ``columns`` restricts which columns receive it; the stream is thus
    the same regardless of the column subset.  ``data`` is not modified.
    """
    amplitude = float(amplitude)
    if not amplitude >= 0 or not math.isfinite(amplitude):
        raise ParameterError(f"amplitude must be a finite value >= 0, got {amplitude}")
    if amplitude == 0:
        return DataMatrix(data.column_names, data.values)
    rng = make_rng(seed)
    noise = uniform(rng, -amplitude, amplitude, data.shape)
    if columns is not None:
        mask = np.zeros(data.n_cols, dtype=bool)
        mask[[data.column_index(c) for c in columns]] = True
        noise[:, ~mask] = 0.0
    return DataMatrix(data.column_names, data.values + noise)


def median_label(data, target):
    """Balanced binary labels from the rank of ``target``.

    Rows are ranked by value with a stable sort (ties keep row order); the
    first ``ceil(m / 2)`` ranks are LOWER, the rest UPPER.  For odd ``m``
    the median row is therefore LOWER.

    Returns
    -------
    numpy.ndarray of int
        ``Label.LOWER`` (0) or ``Label.UPPER`` (1) per row.
    """
    col = data.column(target)
    m = len(col)
    order = np.argsort(col, kind="stable")
    labels = np.full(m, int(Label.UPPER), dtype=int)
    labels[order[: (m + 1) // 2]] = int(Label.LOWER)
    return labels

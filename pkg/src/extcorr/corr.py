"""Pearson correlation, correlation matrices and prefix/rolling correlation.

Summation rule: means and centred cross-products are accumulated with
:func:`math.fsum` (exactly rounded), after a two-pass centring.  The result
of a sum therefore does not depend on summation order, which keeps full and
prefix computations bit-for-bit reproducible.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, DegenerateColumnError, ParameterError

__all__ = [
    "DEGENERATE",
    "CorrelationMatrix",
    "DegenerateRule",
    "PrefixPolicy",
    "RollingCorrelation",
    "check_correlation_matrix",
    "corr_matrix",
    "fc_from_first_row",
    "pearson",
    "prefix_corr",
]


class _Degenerate:
    """Marker for a prefix whose correlation matrix is undefined."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DEGENERATE"

    def __bool__(self):
        return False


DEGENERATE = _Degenerate()


class DegenerateRule(str, enum.Enum):
    SKIP = "skip"
    FAIL = "fail"


@dataclass(frozen=True)
class PrefixPolicy:
    """Where prefix traces start and what to do with zero-variance prefixes.

    ``min_prefix=None`` means ``n + 1`` for an ``n``-column dataset, the
    smallest prefix whose correlation matrix can have full rank (never below
    3).
    """

    min_prefix: int = None
    degenerate_rule: DegenerateRule = DegenerateRule.SKIP

    def __post_init__(self):
        object.__setattr__(self, "degenerate_rule", DegenerateRule(self.degenerate_rule))
        if self.min_prefix is not None:
            if int(self.min_prefix) < 3:
                raise ParameterError(f"min_prefix must be >= 3, got {self.min_prefix}")
            object.__setattr__(self, "min_prefix", int(self.min_prefix))

    def resolve(self, n_vars):
        if self.min_prefix is not None:
            return self.min_prefix
        return max(3, n_vars + 1)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Symmetric Pearson matrix with unit diagonal, entries in [-1, 1]."""

    entries: np.ndarray
    column_names: tuple = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        if self.column_names is not None:
            object.__setattr__(self, "column_names", tuple(self.column_names))

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries.copy()
        return self.entries.astype(dtype)

    def __eq__(self, other):
        if isinstance(other, CorrelationMatrix):
            other = other.entries
        return np.array_equal(self.entries, np.asarray(other))

    def __repr__(self):
        return f"CorrelationMatrix(n={self.n})"


def check_correlation_matrix(a, tol=1e-9):
    """Return a list of violated invariants (empty when ``a`` is valid)."""
    a = np.asarray(a, dtype=float)
    problems = []
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return ["not square"]
    if not np.array_equal(a, a.T):
        problems.append("not symmetric")
    if not np.all(np.diag(a) == 1.0):
        problems.append("diagonal not 1")
    if np.any(np.abs(a) > 1.0):
        problems.append("entry outside [-1, 1]")
    if a.size and np.linalg.eigvalsh(a)[0] < -tol:
        problems.append("not positive semidefinite")
    return problems


def _as_vector(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DataError("expected a 1-D vector")
    return x


def _centred(x):
    return x - math.fsum(x) / len(x)


def pearson(x, y):
    """Sample Pearson correlation of two equal-length vectors."""
    x = _as_vector(x)
    y = _as_vector(y)
    if len(x) != len(y):
        raise DataError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise DataError("need at least 2 observations")
    dx = _centred(x)
    dy = _centred(y)
    sxx = math.fsum(dx * dx)
    syy = math.fsum(dy * dy)
    if sxx == 0:
        raise DegenerateColumnError("x")
    if syy == 0:
        raise DegenerateColumnError("y")
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def _corr_from_comoments(c):
    d = np.sqrt(np.diag(c))
    r = c / np.outer(d, d)
    np.clip(r, -1.0, 1.0, out=r)
    r = (r + r.T) / 2
    np.fill_diagonal(r, 1.0)
    return r


def _comoments(values):
    m, n = values.shape
    dev = np.empty_like(values)
    for j in range(n):
        dev[:, j] = _centred(values[:, j])
    c = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            c[i, j] = c[j, i] = math.fsum(dev[:, i] * dev[:, j])
    return c


def _zero_variance(c):
    return [j for j in range(c.shape[0]) if not c[j, j] > 0]


def corr_matrix(data):
    """Full Pearson correlation matrix of a :class:`~extcorr.data.DataMatrix`.

    Raises
    ------
    DegenerateColumnError
        If some column is constant; the first such column is named.
    """
    values = data.values
    if values.shape[0] < 2:
        raise DataError("need at least 2 rows")
    c = _comoments(values)
    bad = _zero_variance(c)
    if bad:
        raise DegenerateColumnError(data.column_names[bad[0]])
    return CorrelationMatrix(_corr_from_comoments(c), data.column_names)


def fc_from_first_row(first_row_signs):
    """Rebuild the FC correlation matrix ``s s^T`` from its first row."""
    s = np.asarray(first_row_signs)
    if s.ndim != 1 or s.size == 0:
        raise ParameterError("first row must be a non-empty vector")
    if not np.all((s == 1) | (s == -1)):
        raise ParameterError("first row entries must be +1 or -1")
    if s[0] != 1:
        raise ParameterError("first entry must be +1")
    s = s.astype(float)
    return CorrelationMatrix(np.outer(s, s))


def prefix_corr(data, k, policy=None):
    """Correlation matrix of the first ``k`` rows, or ``DEGENERATE``.

    ``DEGENERATE`` is returned under the SKIP rule when a column is constant
    over the prefix; the FAIL rule raises instead.
    """
    policy = policy or PrefixPolicy()
    lo = policy.resolve(data.n_cols)
    if not lo <= k <= data.n_rows:
        raise ParameterError(f"prefix length {k} outside [{lo}, {data.n_rows}]")
    c = _comoments(data.values[:k])
    bad = _zero_variance(c)
    if bad:
        if policy.degenerate_rule is DegenerateRule.FAIL:
            raise DegenerateColumnError(data.column_names[bad[0]])
        return DEGENERATE
    return CorrelationMatrix(_corr_from_comoments(c), data.column_names)


class RollingCorrelation:
    """Incremental correlation matrix over a growing sample.

    Keeps the running mean and the co-moment matrix, updated per row with
    Welford's rule ``C += (k-1)/k * d d^T`` where ``d`` is the deviation of
    the new row from the previous mean.  O(n^2) per row.  Not thread-safe;
    one owner at a time.
    """

    def __init__(self, n_vars, column_names=None):
        self.n_vars = int(n_vars)
        self.column_names = tuple(column_names) if column_names is not None else None
        self.count = 0
        self.mean = np.zeros(self.n_vars)
        self.comoment = np.zeros((self.n_vars, self.n_vars))

    def update(self, row):
        row = np.asarray(row, dtype=float)
        if row.shape != (self.n_vars,):
            raise DataError(f"expected a row of {self.n_vars} values")
        self.count += 1
        k = self.count
        delta = row - self.mean
        self.mean = self.mean + delta / k
        self.comoment = self.comoment + ((k - 1) / k) * np.outer(delta, delta)
        return self

    def degenerate_columns(self):
        return _zero_variance(self.comoment)

    def correlation(self, degenerate_rule=DegenerateRule.SKIP):
        """Current correlation matrix, or ``DEGENERATE``."""
        if self.count < 2:
            raise DataError("need at least 2 rows")
        bad = self.degenerate_columns()
        if bad:
            if DegenerateRule(degenerate_rule) is DegenerateRule.FAIL:
                name = self.column_names[bad[0]] if self.column_names else bad[0]
                raise DegenerateColumnError(name)
            return DEGENERATE
        return CorrelationMatrix(_corr_from_comoments(self.comoment), self.column_names)

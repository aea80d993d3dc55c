"""Extended (multivariable) correlation coefficient and its applications.

For an ``n``-variable dataset with correlation matrix ``R``::

    rho_eig  = (lambda_max(R) - 1) / (n - 1)
    rho_frob = (||R||_F - sqrt(n)) / (n - sqrt(n))

Both are 0 for an identity correlation matrix and 1 for ``s s^T``.  In
ROLLING_MEAN mode ``lambda_max`` and ``||R||_F`` are replaced by their means
over the prefix trace (``k = min_prefix .. m`` rows); INSTANT mode uses the
full table.  The two coefficients agree at the endpoints only: for two
variables with ``|r| = 0.5`` ``rho_eig = 0.5`` but ``rho_frob ~ 0.28494``.
Values are never clamped to [0, 1].
"""

import enum
import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .corr import (
    DEGENERATE,
    PrefixPolicy,
    RollingCorrelation,
    corr_matrix,
    pearson,
    prefix_corr,
)
from .data import DataMatrix
from .exceptions import DataError, ParameterError
from .spectral import frobenius_norm, lambda_max

__all__ = [
    "MAX_RANK_COLUMNS",
    "LambdaMaxTrace",
    "NoiseReport",
    "RhoMode",
    "RhoResult",
    "SubsetScore",
    "TraceEntry",
    "compose_noise",
    "lambda_trace",
    "noise_report",
    "rank_subsets",
    "rho_extended",
    "rho_from_frobenius",
    "rho_from_lambda",
    "rho_pairwise_consistency",
]

MAX_RANK_COLUMNS = 20


class RhoMode(str, enum.Enum):
    INSTANT = "instant"
    ROLLING_MEAN = "rolling"


def rho_from_lambda(lam, n):
    return (lam - 1.0) / (n - 1.0)


def rho_from_frobenius(norm, n):
    root = math.sqrt(n)
    return (norm - root) / (n - root)


@dataclass(frozen=True)
class TraceEntry:
    prefix_length: int
    lambda_max: float
    frobenius: float
    degenerate: bool = False


@dataclass(frozen=True)
class LambdaMaxTrace:
    entries: tuple
    policy: PrefixPolicy
    n_vars: int

    def __len__(self):
        return len(self.entries)

    def valid(self):
        return [e for e in self.entries if not e.degenerate]

    @property
    def lambdas(self):
        return np.array([e.lambda_max for e in self.entries])

    @property
    def prefix_lengths(self):
        return np.array([e.prefix_length for e in self.entries], dtype=int)

    def mean_lambda(self):
        vals = [e.lambda_max for e in self.valid()]
        if not vals:
            raise DataError("every prefix in the trace is degenerate")
        return math.fsum(vals) / len(vals)

    def mean_frobenius(self):
        vals = [e.frobenius for e in self.valid()]
        if not vals:
            raise DataError("every prefix in the trace is degenerate")
        return math.fsum(vals) / len(vals)


def lambda_trace(data, policy=None, method="incremental"):
    """Largest eigenvalue of the correlation matrix of every prefix.

    Parameters
    ----------
    data : DataMatrix
    policy : PrefixPolicy, optional
        First prefix length and the degenerate-prefix rule.
    method : {"incremental", "recompute"}
        ``incremental`` updates running co-moments one row at a time;
        ``recompute`` calls :func:`~extcorr.corr.prefix_corr` per prefix.
        They agree to about 1e-12.

    Returns
    -------
    LambdaMaxTrace
        One entry per prefix length ``min_prefix .. m``.  Degenerate
        prefixes carry NaN values and ``degenerate=True``.
    """
    policy = policy or PrefixPolicy()
    n = data.n_cols
    lo = policy.resolve(n)
    m = data.n_rows
    if m < lo:
        raise DataError(f"dataset has {m} rows, fewer than min_prefix={lo}")
    if method not in ("incremental", "recompute"):
        raise ParameterError(f"unknown method {method!r}")

    entries = []
    if method == "incremental":
        engine = RollingCorrelation(n, data.column_names)
        for row in data.values[: lo - 1]:
            engine.update(row)

    for k in range(lo, m + 1):
        if method == "incremental":
            engine.update(data.values[k - 1])
            r = engine.correlation(policy.degenerate_rule)
        else:
            r = prefix_corr(data, k, policy)
        if r is DEGENERATE:
            entries.append(TraceEntry(k, math.nan, math.nan, True))
        else:
            entries.append(TraceEntry(k, lambda_max(r), frobenius_norm(r)))
    return LambdaMaxTrace(tuple(entries), policy, n)


@dataclass(frozen=True)
class RhoResult:
    rho_eig: float
    rho_frob: float
    n_vars: int
    mode: RhoMode
    trace_length: int = 0

    def as_dict(self):
        d = asdict(self)
        d["mode"] = self.mode.value
        return d


def rho_extended(data, mode=RhoMode.INSTANT, policy=None):
    """Extended correlation coefficient of all columns of ``data``.

    ``trace_length`` counts the non-degenerate prefixes that entered the
    means (0 in INSTANT mode).
    """
    mode = RhoMode(mode)
    n = data.n_cols
    if n < 2:
        raise ParameterError("need at least 2 variables")
    if mode is RhoMode.INSTANT:
        r = corr_matrix(data)
        return RhoResult(
            rho_from_lambda(lambda_max(r), n),
            rho_from_frobenius(frobenius_norm(r), n),
            n,
            mode,
            0,
        )
    trace = lambda_trace(data, policy)
    return RhoResult(
        rho_from_lambda(trace.mean_lambda(), n),
        rho_from_frobenius(trace.mean_frobenius(), n),
        n,
        mode,
        len(trace.valid()),
    )


def rho_pairwise_consistency(x, y):
    """``(|pearson(x, y)|, rho_eig)`` for the two-column dataset ``[x, y]``.

    With two variables ``lambda_max = 1 + |r|``, so the components agree.
    """
    r = pearson(x, y)
    data = DataMatrix(("x", "y"), np.column_stack([x, y]))
    return abs(r), rho_extended(data, RhoMode.INSTANT).rho_eig


@dataclass(frozen=True)
class NoiseReport:
    total_noise: float
    predictor_noise: float
    labeling_noise: float

    def as_dict(self):
        return asdict(self)


def compose_noise(total_noise, predictor_noise):
    """Split dataset noise: labeling = max(0, total - predictor)."""
    return NoiseReport(
        float(total_noise),
        float(predictor_noise),
        max(0.0, float(total_noise) - float(predictor_noise)),
    )


def noise_report(data, target, mode=RhoMode.INSTANT, policy=None):
    """Total, predictor and labeling noise with ``target`` as the label.

    ``predictor_noise`` is reported so callers can decide whether it is
    small enough for the labeling figure to be meaningful.
    """
    data.column_index(target)
    if data.n_cols - 1 < 2:
        raise ParameterError(
            f"need at least 2 predictor columns besides {target!r}, got {data.n_cols - 1}"
        )
    predictors = data.drop(target)
    rho_all = rho_extended(data, mode, policy).rho_eig
    rho_pred = rho_extended(predictors, mode, policy).rho_eig
    return compose_noise(1.0 - rho_all, 1.0 - rho_pred)


@dataclass(frozen=True)
class SubsetScore:
    subset: tuple
    rho: float
    predictor_noise: float = field(default=math.nan)


def _tie_key(x):
    # scores equal at the reporting precision count as ties
    return float(f"{x:.12g}")


def rank_subsets(data, target, k, mode=RhoMode.INSTANT, policy=None):
    """Score every ``k``-subset of predictors against ``target``.

    Each subset ``S`` is scored by ``rho_eig`` of ``S + [target]``;
    ``predictor_noise`` is ``1 - rho_eig(S)`` (NaN when ``k == 1``, where a
    single predictor has no spread to measure).  Results are sorted by
    descending score, ties (equal to 12 significant digits) broken by the
    subset's column names.

    Raises
    ------
    ParameterError
        ``k`` outside ``1 .. n - 1`` or more than 20 columns.
    """
    n = data.n_cols
    if n > MAX_RANK_COLUMNS:
        raise ParameterError(
            f"exhaustive ranking supports at most {MAX_RANK_COLUMNS} columns, got {n}"
        )
    data.column_index(target)
    k = int(k)
    if not 1 <= k <= n - 1:
        raise ParameterError(f"subset size k={k} outside [1, {n - 1}]")
    mode = RhoMode(mode)
    predictors = [c for c in data.column_names if c != target]

    scores = []
    for subset in itertools.combinations(predictors, k):
        rho = rho_extended(data.select(list(subset) + [target]), mode, policy).rho_eig
        if k >= 2:
            pnoise = 1.0 - rho_extended(data.select(list(subset)), mode, policy).rho_eig
        else:
            pnoise = math.nan
        scores.append(SubsetScore(subset, rho, pnoise))
    scores.sort(key=lambda s: (-_tie_key(s.rho), s.subset))
    return scores

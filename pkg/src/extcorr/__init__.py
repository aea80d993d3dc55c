"""Extended multivariable Pearson correlation from correlation-matrix spectra.

The coefficient maps an identity correlation matrix (fully uncorrelated
variables) to 0 and a rank-one ``s s^T`` matrix (fully correlated) to 1,
via either the largest eigenvalue or the Frobenius norm.
"""

__version__ = "0.1.0"

from .corr import (
    DEGENERATE,
    CorrelationMatrix,
    DegenerateRule,
    PrefixPolicy,
    RollingCorrelation,
    corr_matrix,
    fc_from_first_row,
    pearson,
    prefix_corr,
)
from .data import (
    DataMatrix,
    Label,
    SignPattern,
    add_noise,
    gen_fc,
    gen_fu,
    median_label,
    read_csv,
    write_csv,
)
from .estimators import CorrelationSubsetSelector, ExtendedCorrelation, NoiseInjector
from .exceptions import (
    ConvergenceError,
    CSVParseError,
    DataError,
    DegenerateColumnError,
    ExtCorrError,
    ParameterError,
    UnknownColumnError,
)
from .rho import (
    LambdaMaxTrace,
    NoiseReport,
    RhoMode,
    RhoResult,
    SubsetScore,
    compose_noise,
    lambda_trace,
    noise_report,
    rank_subsets,
    rho_extended,
    rho_pairwise_consistency,
)
from .spectral import EigenSpectrum, eig_sym, frobenius_norm, lambda_max, spectral_norm

"""Exponentiated inverse power Lindley distribution: evaluation, fitting and model comparison."""

from .data import BUILTIN_TOKEN, ingest, parse_values, repair_times
from .distribution import (Params, cdf, hazard, log_cdf, log_pdf, median, pdf, quantile,
                           reversed_hazard, sample, survival)
from .errors import (ConvergenceError, DataError, DomainError, EIPLDError,
                     MomentDoesNotExistError, NumericalError, SimulationError)
from .estimation import (ConfidenceInterval, Dataset, FitConfig, FitResult, InfoMatrix,
                         confidence_intervals, fit_mle, log_likelihood, observed_information, score)
from .families import FAMILIES, COMPARED_FAMILIES, Family, get_family
from .properties import (lr_order_check, mgf_formal, order_stat_pdf, raw_moment,
                         raw_moment_series, renyi_entropy, shannon_entropy)
from .selection import ModelScore, aic, bic, compare, ks_statistic
from .simulation import SimulationReport, derive_seed, run_study
from .special import integrate_positive_halfline, lambert_w_minus1, log_gamma

__version__ = "0.1.0"

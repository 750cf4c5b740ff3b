"""Lifetime families compared against EIPLD on the repair-times data.

Parameter vectors are ordered as in ``Family.param_names``:

======  ====================  =====================================================
tag     params                CDF
======  ====================  =====================================================
EIPLD   alpha, beta, theta    [(1 + beta/((1+beta) x**alpha)) e**(-beta/x**alpha)]**theta
EPLD    alpha, beta, theta    [1 - (1 + beta x**alpha/(1+beta)) e**(-beta x**alpha)]**theta
PLD     alpha, beta           1 - (1 + beta x**alpha/(1+beta)) e**(-beta x**alpha)
GLD     alpha, beta           [1 - (1 + beta x/(1+beta)) e**(-beta x)]**alpha
LD      beta                  1 - (1 + beta x/(1+beta)) e**(-beta x)
EE      alpha, beta           (1 - e**(-beta x))**alpha
WD      alpha, beta           1 - e**(-beta x**alpha)
ILD     beta                  (1 + beta/((1+beta) x)) e**(-beta/x)
IPLD    alpha, beta           (1 + beta/((1+beta) x**alpha)) e**(-beta/x**alpha)
======  ====================  =====================================================

ILD and IPLD are written out in closed form here, independently of the
EIPLD code, so the reductions ``theta = 1`` and ``alpha = theta = 1`` can be
checked against them.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import distribution as eipld
from .errors import DomainError

__all__ = ["FAMILIES", "COMPARED_FAMILIES", "Family", "family_cdf", "family_log_pdf", "get_family"]


def _support(z):
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)) or np.any(z <= 0):
        raise DomainError("z must be > 0")
    return z


def _out(a):
    return a if np.ndim(a) else float(a)


def _log1mexp(x):
    """``ln(1 - e**x)`` for ``x <= 0``, accurate at both ends."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > -math.log(2.0), np.log(-np.expm1(x)), np.log1p(-np.exp(x)))


# Lindley building blocks, all in log space -----------------------------------

def _lindley_log_pdf(b, x):
    return 2.0 * math.log(b) - math.log1p(b) + np.log1p(x) - b * x


def _lindley_log_sf(b, x):
    with np.errstate(invalid="ignore", over="ignore"):
        bx = b * x
        return np.where(np.isinf(bx), -np.inf, np.log1p(bx / (1.0 + b)) - bx)


def _lindley_log_cdf(b, x, lx=None):
    # lx = ln x lets callers pass arguments whose exponential underflows;
    # below b x = 1e-8 the two-term expansion
    # ln F = ln(b**2 x/(1+b)) + ln(1 - (b-1) x/2) is exact to rounding
    lx = np.log(x) if lx is None else lx
    small = lx + math.log(b) < math.log(1e-8)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        direct = _log1mexp(_lindley_log_sf(b, x))
        x_small = np.exp(np.minimum(lx, 0.0))
        series = 2.0 * math.log(b) - math.log1p(b) + lx + np.log1p(-(b - 1.0) * x_small / 2.0)
    return np.where(small, series, direct)


def _pow(x, a):
    with np.errstate(over="ignore"):
        return np.exp(a * np.log(x))


# per-family log pdf / log cdf ------------------------------------------------

def _ld_logpdf(p, x):
    return _lindley_log_pdf(p[0], x)


def _ld_logcdf(p, x):
    return _lindley_log_cdf(p[0], x)


def _gld_logpdf(p, x):
    a, b = p
    return math.log(a) + (a - 1.0) * _lindley_log_cdf(b, x) + _lindley_log_pdf(b, x)


def _gld_logcdf(p, x):
    return p[0] * _lindley_log_cdf(p[1], x)


def _pld_logpdf(p, x):
    a, b = p
    return math.log(a) + _lindley_log_pdf(b, _pow(x, a)) + (a - 1.0) * np.log(x)


def _pld_logcdf(p, x):
    a, b = p
    return _lindley_log_cdf(b, _pow(x, a), a * np.log(x))


def _epld_logpdf(p, x):
    a, b, t = p
    return math.log(t) + (t - 1.0) * _pld_logcdf((a, b), x) + _pld_logpdf((a, b), x)


def _epld_logcdf(p, x):
    return p[2] * _pld_logcdf(p[:2], x)


def _ee_logpdf(p, x):
    a, b = p
    return math.log(a) + math.log(b) - b * x + (a - 1.0) * _log1mexp(-b * x)


def _ee_logcdf(p, x):
    return p[0] * _log1mexp(-p[1] * x)


def _wd_logpdf(p, x):
    a, b = p
    return math.log(a) + math.log(b) + (a - 1.0) * np.log(x) - b * _pow(x, a)


def _wd_logcdf(p, x):
    return _log1mexp(-p[1] * _pow(x, p[0]))


def _ild_logpdf(p, x):
    b = p[0]
    return 2.0 * math.log(b) - math.log1p(b) + np.logaddexp(0.0, np.log(x)) - 3.0 * np.log(x) - b / x


def _ild_logcdf(p, x):
    b = p[0]
    return np.log1p(b / ((1.0 + b) * x)) - b / x


def _ipld_logpdf(p, x):
    a, b = p
    xa = _pow(x, a)
    return (math.log(a) + 2.0 * math.log(b) - math.log1p(b) + np.logaddexp(0.0, a * np.log(x))
            - (2.0 * a + 1.0) * np.log(x) - b / xa)


def _ipld_logcdf(p, x):
    a, b = p
    xa = _pow(x, a)
    return np.log1p(b / ((1.0 + b) * xa)) - b / xa


def _eipld_logpdf(p, x):
    return eipld.log_pdf(eipld.Params(*p), x)


def _eipld_logcdf(p, x):
    return eipld.log_cdf(eipld.Params(*p), x)


# multi-start grids ------------------------------------------------------------

def _grid(*axes):
    return [tuple(v) for v in np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(axes), -1).T]


def _rate_axis(med):
    return (0.5 / med, 1.0 / med, 5.0 / med)


def _eipld_starts(med):
    return _grid((0.5, 1.0, 2.0), (0.5, med, 5.0 * med), (0.1, 1.0, 5.0))


def _starts_shape_rate(med):
    return _grid((0.5, 1.0, 2.0), _rate_axis(med))


def _starts_shape_rate_exp(med):
    return _grid((0.5, 1.0, 2.0), _rate_axis(med), (0.1, 1.0, 5.0))


def _starts_rate(med):
    return _grid(_rate_axis(med))


def _starts_inverse_scale(med):
    return _grid((0.5 * med, med, 5.0 * med))


def _starts_inverse_shape_scale(med):
    return _grid((0.5, 1.0, 2.0), (0.5 * med, med, 5.0 * med))


@dataclass(frozen=True)
class Family:
    """A parametric lifetime family.

    ``log_pdf`` and ``log_cdf`` take a parameter tuple and an ndarray of
    positive abscissae. ``starts`` maps the sample median to the multi-start
    grid used by the fitter.
    """

    tag: str
    name: str
    param_names: tuple
    _log_pdf: Callable
    _log_cdf: Callable
    starts: Callable

    @property
    def n_params(self):
        return len(self.param_names)

    def check_params(self, params):
        vals = tuple(float(v) for v in params)
        if len(vals) != self.n_params:
            raise DomainError(f"{self.tag} takes {self.n_params} parameters, got {len(vals)}")
        for name, v in zip(self.param_names, vals):
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{self.tag} parameter {name} must be positive, got {v!r}")
        return vals

    def log_pdf(self, params, z):
        vals = self.check_params(params)
        z = _support(z)
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            out = np.asarray(self._log_pdf(vals, z), dtype=float)
        return _out(np.where(np.isnan(out), -np.inf, out))

    def log_cdf(self, params, z):
        vals = self.check_params(params)
        z = _support(z)
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            out = np.asarray(self._log_cdf(vals, z), dtype=float)
        return _out(np.where(np.isnan(out), -np.inf, out))

    def pdf(self, params, z):
        return _out(np.exp(self.log_pdf(params, z)))

    def cdf(self, params, z):
        return _out(np.exp(self.log_cdf(params, z)))

    def __str__(self):
        return self.tag


FAMILIES = {f.tag: f for f in [
    Family("EIPLD", "Exponentiated Inverse Power Lindley", ("alpha", "beta", "theta"),
           _eipld_logpdf, _eipld_logcdf, _eipld_starts),
    Family("EPLD", "Exponentiated Power Lindley", ("alpha", "beta", "theta"),
           _epld_logpdf, _epld_logcdf, _starts_shape_rate_exp),
    Family("PLD", "Power Lindley", ("alpha", "beta"),
           _pld_logpdf, _pld_logcdf, _starts_shape_rate),
    Family("GLD", "Generalised Lindley", ("alpha", "beta"),
           _gld_logpdf, _gld_logcdf, _starts_shape_rate),
    Family("LD", "Lindley", ("beta",),
           _ld_logpdf, _ld_logcdf, _starts_rate),
    Family("EE", "Exponentiated Exponential", ("alpha", "beta"),
           _ee_logpdf, _ee_logcdf, _starts_shape_rate),
    Family("WD", "Weibull", ("alpha", "beta"),
           _wd_logpdf, _wd_logcdf, _starts_shape_rate),
    Family("ILD", "Inverse Lindley", ("beta",),
           _ild_logpdf, _ild_logcdf, _starts_inverse_scale),
    Family("IPLD", "Inverse Power Lindley", ("alpha", "beta"),
           _ipld_logpdf, _ipld_logcdf, _starts_inverse_shape_scale),
]}

# the families ranked by `compare --families all`
COMPARED_FAMILIES = ("EIPLD", "EPLD", "PLD", "GLD", "LD", "EE", "WD")
TAG_ORDER = {tag: i for i, tag in enumerate(FAMILIES)}


def get_family(tag):
    """Look up a family by case-insensitive tag."""
    if isinstance(tag, Family):
        return tag
    try:
        return FAMILIES[str(tag).upper()]
    except KeyError:
        raise DomainError(f"unknown family {tag!r}; choose from {', '.join(FAMILIES)}") from None


def family_log_pdf(family, params, z):
    """Log density of ``family`` at ``z``."""
    return get_family(family).log_pdf(params, z)


def family_cdf(family, params, z):
    """CDF of ``family`` at ``z``."""
    return get_family(family).cdf(params, z)

"""Moments, MGF, Renyi entropy, order statistics and likelihood-ratio ordering.

Quadrature is the primary route for every integral here. The term-by-term
series obtained from the binomial expansion of
``[1 + beta/((1+beta) z**alpha)] ** (theta - 1)`` is kept as a cross-check:
that expansion diverges for small ``z`` unless ``theta`` is a positive
integer, in which case it terminates and is exact.
"""

import math

import numpy as np

from .distribution import _as_params, _support, log_cdf, log_pdf, median, survival
from .errors import ConvergenceError, DomainError, MomentDoesNotExistError
from .special import gen_binomial, integrate_positive_halfline, log_gamma

__all__ = [
    "lr_order_check",
    "mgf_formal",
    "mgf_quadrature",
    "order_stat_pdf",
    "raw_moment",
    "raw_moment_series",
    "renyi_entropy",
    "renyi_entropy_series",
    "shannon_entropy",
]


def _is_whole(x):
    return float(x).is_integer()


def _check_moment(p, r):
    if int(r) != r or r < 0:
        raise DomainError("moment order must be a nonnegative integer")
    if not p.alpha > r:
        raise MomentDoesNotExistError(
            f"E[Z^{r}] is infinite: requires alpha > r (alpha={p.alpha})")


def raw_moment(p, r, rtol=1e-11):
    """``E[Z**r]`` by quadrature of ``z**r * pdf(z)``.

    Raises
    ------
    MomentDoesNotExistError
        If ``alpha <= r``.
    """
    p = _as_params(p)
    _check_moment(p, r)
    if r == 0:
        return 1.0

    def f(z):
        return np.exp(r * np.log(z) + log_pdf(p, z))

    return integrate_positive_halfline(f, tol=1e-300, rtol=rtol,
                                       scale=median(p)).value


def raw_moment_series(p, r, max_terms=500, tol=1e-15):
    """``E[Z**r]`` from the binomial series

    ``(beta theta)**(r/alpha) * sum_i C(theta-1, i) (i + 1 - r/alpha + theta beta)
    Gamma(i + 1 - r/alpha) / (theta (1 + beta))**(i + 1)``.

    For integer ``theta`` the sum stops after ``i = theta - 1`` and is exact.
    Otherwise terms are added until ``|term| < tol * |sum|``.

    Raises
    ------
    MomentDoesNotExistError
        If ``alpha <= r``.
    ConvergenceError
        If ``max_terms`` terms do not meet the tolerance (the series is
        asymptotic, not convergent, for most non-integer ``theta``).
    """
    p = _as_params(p)
    _check_moment(p, r)
    a, b, t = p.alpha, p.beta, p.theta
    ra = r / a
    pref = (t * b) ** ra
    log_tb1 = math.log(t * (1.0 + b))

    def term(i):
        m = i + 1.0 - ra
        log_mag = log_gamma(m) - (i + 1) * log_tb1
        if log_mag > 700.0:
            raise ConvergenceError("moment series terms overflow; the series diverges",
                                   estimate=pref * total, error=math.inf)
        return gen_binomial(t - 1.0, i) * (m + t * b) * math.exp(log_mag)

    total = 0.0
    if _is_whole(t):
        for i in range(int(t)):
            total += term(i)
        return pref * total
    for i in range(int(max_terms)):
        tm = term(i)
        total += tm
        if abs(tm) < tol * abs(total):
            return pref * total
    raise ConvergenceError("moment series did not meet its tolerance within max_terms",
                           estimate=pref * total, error=pref * abs(tm))


def mgf_formal(p, t, n_terms, method="quadrature"):
    """Truncated moment expansion ``sum_{n < n_terms} t**n / n! * E[Z**n]``.

    This is a formal expansion. ``E[exp(tZ)]`` is infinite for every
    ``t > 0`` because the density decays only like ``z**-(alpha+1)``, and
    ``E[Z**n]`` itself is infinite once ``n >= alpha``, so only terms with
    ``n < alpha`` may be requested. For ``t < 0`` the partial sums approximate
    the (finite) Laplace transform up to the first omitted term.

    ``method`` selects ``"quadrature"`` (default) or ``"series"`` moments.
    """
    p = _as_params(p)
    n_terms = int(n_terms)
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    if not p.alpha > n_terms - 1:
        raise MomentDoesNotExistError(
            f"term n={n_terms - 1} needs E[Z^{n_terms - 1}], which requires alpha > n")
    moment = raw_moment if method == "quadrature" else raw_moment_series
    total = 1.0
    for n in range(1, n_terms):
        total += t ** n / math.factorial(n) * moment(p, n)
    return total


def mgf_quadrature(p, t):
    """``E[exp(tZ)]`` by quadrature; defined only for ``t <= 0``."""
    p = _as_params(p)
    if t > 0:
        raise DomainError("E[exp(tZ)] diverges for t > 0")
    return integrate_positive_halfline(lambda z: np.exp(t * z + log_pdf(p, z)),
                                       tol=1e-300, rtol=1e-12, scale=median(p)).value


def renyi_entropy(p, gamma):
    """Renyi entropy ``ln(integral of pdf**gamma) / (1 - gamma)``."""
    p = _as_params(p)
    if not gamma > 0 or gamma == 1:
        raise DomainError("Renyi entropy requires gamma > 0 and gamma != 1")
    res = integrate_positive_halfline(lambda z: np.exp(gamma * log_pdf(p, z)),
                                      tol=1e-300, rtol=1e-12, scale=median(p))
    return math.log(res.value) / (1.0 - gamma)


def renyi_entropy_series(p, gamma):
    """Renyi entropy from the double binomial series, terminating cases only.

    ``pdf**gamma`` expands as
    ``c**gamma z**-gamma(alpha+1) (1 + z**-alpha)**gamma (1 + k z**-alpha)**(gamma(theta-1))
    exp(-gamma theta beta z**-alpha)`` with ``c = alpha beta**2 theta / (1+beta)``;
    each term integrates to an inverse-gamma integral. Both binomial
    exponents must be nonnegative integers so the sums are finite.
    """
    p = _as_params(p)
    a, b, t = p.alpha, p.beta, p.theta
    e1 = gamma * (t - 1.0)
    if not (gamma > 0 and gamma != 1 and _is_whole(gamma) and _is_whole(e1) and e1 >= 0):
        raise DomainError("series form requires integer gamma and gamma*(theta-1)")
    k = b / (1.0 + b)
    c = gamma * t * b
    log_pref = gamma * (math.log(a) + 2 * math.log(b) + math.log(t) - math.log1p(b)) - math.log(a)
    terms = []
    for i in range(int(e1) + 1):
        for j in range(int(gamma) + 1):
            m = i + j + gamma + (gamma - 1.0) / a
            terms.append(gen_binomial(e1, i) * gen_binomial(gamma, j) * k ** i
                         * math.exp(log_gamma(m) - m * math.log(c) + log_pref))
    return math.log(math.fsum(terms)) / (1.0 - gamma)


def shannon_entropy(p):
    """``-E[ln pdf(Z)]`` by quadrature."""
    p = _as_params(p)

    def f(z):
        lp = log_pdf(p, z)
        return np.where(np.isfinite(lp), -np.exp(lp) * lp, 0.0)

    return integrate_positive_halfline(f, tol=1e-13, rtol=1e-12, scale=median(p)).value


def order_stat_pdf(p, z, k, n):
    """Density of the ``k``-th smallest of ``n`` independent draws.

    ``n! / ((k-1)! (n-k)!) pdf(z) cdf(z)**(k-1) survival(z)**(n-k)``,
    assembled in log space.
    """
    p = _as_params(p)
    k, n = int(k), int(n)
    if not 1 <= k <= n:
        raise DomainError(f"order statistic index must satisfy 1 <= k <= n, got k={k}, n={n}")
    z = _support(z)
    log_coef = log_gamma(n + 1.0) - log_gamma(float(k)) - log_gamma(n - k + 1.0)
    lp = np.asarray(log_pdf(p, z))
    lc = np.asarray(log_cdf(p, z))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ls = np.log(np.asarray(survival(p, z)))
        val = log_coef + lp
        if k > 1:
            val = val + (k - 1) * lc
        if n > k:
            val = val + (n - k) * ls
    out = np.exp(np.where(np.isnan(val), -np.inf, val))
    return out if out.ndim else float(out)


def lr_order_check(p1, p2, grid):
    """Whether ``pdf(p2, z) / pdf(p1, z)`` is nondecreasing along ``grid``.

    The ratio is compared in log space; a step may dip by at most
    ``1e-12 * max(1, |log ratio|)`` to absorb rounding.
    """
    p1, p2 = _as_params(p1), _as_params(p2)
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 3 or np.any(np.diff(g) <= 0):
        raise DomainError("grid must be strictly increasing with at least 3 points")
    lr = np.asarray(log_pdf(p2, g)) - np.asarray(log_pdf(p1, g))
    if not np.all(np.isfinite(lr)):
        raise DomainError("density ratio is not finite on the grid")
    slack = 1e-12 * np.maximum(1.0, np.maximum(np.abs(lr[:-1]), np.abs(lr[1:])))
    return bool(np.all(np.diff(lr) >= -slack))


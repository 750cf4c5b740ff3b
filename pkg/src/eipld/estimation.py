"""Maximum-likelihood fitting, score, observed information and Wald intervals.

Optimization runs in log-parameter space, so every returned estimate is
positive by construction. Each parameter is confined to a box
``[lower, upper]`` (default ``[1e-3, 1e3]``). The box matters: on some
samples the EIPLD likelihood keeps rising along a ridge with
``beta -> inf``, ``theta -> 0``, ``theta * beta`` fixed. That ridge tends to
the inverse Weibull law, so no interior maximum exists. Such fits stop on
the box edge and are reported with ``converged=False`` and the offending
parameter listed in ``at_bound``.
"""

import configparser
import math
from dataclasses import dataclass, field, fields
from statistics import NormalDist

import numpy as np
from scipy.optimize import minimize

from .distribution import Params
from .errors import DataError, DomainError
from .families import Family, get_family

__all__ = [
    "ConfidenceInterval",
    "Dataset",
    "FitConfig",
    "FitResult",
    "InfoMatrix",
    "confidence_intervals",
    "fit_mle",
    "hessian_closed_form",
    "log_likelihood",
    "observed_information",
    "score",
]


@dataclass(frozen=True)
class Dataset:
    """Sorted sample of positive reals with a provenance label."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size < 1:
            raise DataError("dataset is empty")
        if not np.all(np.isfinite(v)):
            raise DataError("dataset contains non-finite values")
        if v[0] <= 0:
            raise DataError(f"dataset values must be positive, found {v[0]!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return int(self.values.size)

    def __len__(self):
        return self.n


def _as_dataset(data):
    return data if isinstance(data, Dataset) else Dataset(data)


@dataclass(frozen=True)
class FitConfig:
    """Optimizer settings.

    ``restarts`` caps how many grid starts (best first by log-likelihood)
    get a full simplex run. ``lower``/``upper`` bound every parameter.
    """

    restarts: int = 27
    max_iters: int = 20000
    tol_loglik: float = 1e-10
    tol_simplex: float = 1e-9
    ci_level: float = 0.95
    lower: float = 1e-3
    upper: float = 1e3

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise DomainError("restarts and max_iters must be >= 1")
        if not (self.tol_loglik > 0 and self.tol_simplex > 0):
            raise DomainError("tolerances must be positive")
        if not 0 < self.ci_level < 1:
            raise DomainError("ci_level must lie in (0, 1)")
        if not 0 < self.lower < self.upper:
            raise DomainError("need 0 < lower < upper")

    @classmethod
    def from_mapping(cls, mapping):
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, raw in mapping.items():
            key = key.strip().lower()
            if key not in known:
                raise DomainError(f"unknown fit config key {key!r}")
            kwargs[key] = int(raw) if key in ("restarts", "max_iters") else float(raw)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        """Read ``key = value`` lines (``#`` comments, no section header needed)."""
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        if not text.lstrip().startswith("["):
            text = "[fit]\n" + text
        parser.read_string(text)
        items = {}
        for section in parser.sections():
            items.update(parser[section])
        return cls.from_mapping(items)


@dataclass(frozen=True)
class InfoMatrix:
    """Observed information: negated Hessian of the log-likelihood."""

    matrix: np.ndarray
    eigenvalues: np.ndarray = field(init=False)
    positive_definite: bool = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if np.all(np.isfinite(m)):
            ev = np.linalg.eigvalsh(0.5 * (m + m.T))
        else:
            ev = np.full(m.shape[0], np.nan)
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "positive_definite", bool(np.all(ev > 0)))


@dataclass(frozen=True)
class ConfidenceInterval:
    name: str
    estimate: float
    lower: float
    upper: float
    floored: bool = False


@dataclass
class FitResult:
    family: Family
    estimates: tuple
    log_lik: float
    n: int
    score_at_mle: np.ndarray
    info: InfoMatrix
    vcov: np.ndarray | None
    converged: bool
    n_restarts_used: int
    at_bound: tuple = ()
    message: str = ""
    ci: tuple | None = None
    ci_level: float = 0.95
    start_log_liks: tuple = ()

    @property
    def q(self):
        return self.family.n_params

    @property
    def params(self):
        return dict(zip(self.family.param_names, self.estimates))

    def to_dict(self):
        def arr(a):
            return None if a is None else np.asarray(a, dtype=float).tolist()

        return {
            "family": self.family.tag,
            "n": self.n,
            "q": self.q,
            "params": self.params,
            "log_lik": self.log_lik,
            "neg_log_lik": -self.log_lik,
            "converged": self.converged,
            "at_bound": list(self.at_bound),
            "message": self.message,
            "n_restarts_used": self.n_restarts_used,
            "score": arr(self.score_at_mle),
            "info": arr(self.info.matrix),
            "info_positive_definite": self.info.positive_definite,
            "vcov": arr(self.vcov),
            "ci_level": self.ci_level,
            "ci": None if self.ci is None else {
                c.name: {"lower": c.lower, "upper": c.upper, "floored": c.floored}
                for c in self.ci},
        }


# ---------------------------------------------------------------------------
# likelihood, score, information
# ---------------------------------------------------------------------------

def log_likelihood(family, params, data):
    """Sum of log densities of ``data`` under ``family`` at ``params``."""
    fam = get_family(family)
    data = _as_dataset(data)
    return float(np.sum(fam.log_pdf(params, data.values)))


def _eipld_pieces(params, z):
    p = params if isinstance(params, Params) else Params(*params)
    a, b, t = p.alpha, p.beta, p.theta
    lz = np.log(z)
    u = np.exp(-a * lz)
    k = b / (1.0 + b)
    D = 1.0 + k * u
    return a, b, t, lz, u, k, D


def score(params, data):
    """Analytic gradient of the EIPLD log-likelihood in ``(alpha, beta, theta)``.

    With ``u = z**-alpha``, ``k = beta/(1+beta)`` and ``D = 1 + k u``::

        dL/dalpha = n/alpha + sum z**a ln z/(1+z**a) - 2 sum ln z
                    + theta beta sum u ln z - (theta-1) k sum u ln z / D
        dL/dbeta  = n (2+beta)/(beta(1+beta)) - theta sum u
                    + (theta-1)/(1+beta)**2 sum u / D
        dL/dtheta = n/theta - beta sum u + sum ln D
    """
    data = _as_dataset(data)
    z = data.values
    n = z.size
    a, b, t, lz, u, k, D = _eipld_pieces(params, z)
    # z**a / (1 + z**a) == 1 / (1 + u)
    d_a = (n / a + np.sum(lz / (1.0 + u)) - 2.0 * np.sum(lz)
           + t * b * np.sum(u * lz) - (t - 1.0) * k * np.sum(u * lz / D))
    d_b = n * (2.0 + b) / (b * (1.0 + b)) - t * np.sum(u) + (t - 1.0) / (1.0 + b) ** 2 * np.sum(u / D)
    d_t = n / t - b * np.sum(u) + np.sum(np.log1p(k * u))
    return np.array([d_a, d_b, d_t])


def hessian_closed_form(params, data):
    """Closed-form Hessian of the EIPLD log-likelihood (cross-check only)."""
    data = _as_dataset(data)
    z = data.values
    n = z.size
    a, b, t, lz, u, k, D = _eipld_pieces(params, z)
    s_aa = (-n / a ** 2 + np.sum(u * lz ** 2 / (1.0 + u) ** 2) - t * b * np.sum(u * lz ** 2)
            + (t - 1.0) * k * np.sum(u * lz ** 2 / D ** 2))
    s_ab = t * np.sum(u * lz) - (t - 1.0) / (1.0 + b) ** 2 * np.sum(u * lz / D ** 2)
    s_at = b * np.sum(u * lz) - k * np.sum(u * lz / D)
    s_bb = (n * (-2.0 / b ** 2 + 1.0 / (1.0 + b) ** 2)
            - (t - 1.0) * np.sum(2.0 * u / ((1.0 + b) ** 3 * D) + u ** 2 / ((1.0 + b) ** 4 * D ** 2)))
    s_bt = -np.sum(u) + np.sum(u / D) / (1.0 + b) ** 2
    s_tt = -n / t ** 2
    return np.array([[s_aa, s_ab, s_at], [s_ab, s_bb, s_bt], [s_at, s_bt, s_tt]])


def observed_information(params, data, rel_step=1e-5):
    """Negated Hessian of the EIPLD log-likelihood.

    Columns are central differences of the analytic :func:`score`,
    symmetrized; the ``(theta, theta)`` entry is the exact ``n / theta**2``.
    """
    data = _as_dataset(data)
    x = np.array(tuple(params if isinstance(params, Params) else Params(*params)), dtype=float)
    H = np.empty((3, 3))
    for j in range(3):
        h = rel_step * x[j]
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        H[:, j] = (score(xp, data) - score(xm, data)) / (2.0 * h)
    H = 0.5 * (H + H.T)
    H[2, 2] = -data.n / x[2] ** 2
    return InfoMatrix(-H)


def _fd_gradient(fn, x, rel_step=1e-6):
    g = np.empty_like(x)
    for j in range(x.size):
        h = rel_step * max(abs(x[j]), 1e-8)
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        g[j] = (fn(xp) - fn(xm)) / (2.0 * h)
    return g


def _fd_hessian(fn, x, rel_step=1e-4):
    q = x.size
    h = rel_step * np.maximum(np.abs(x), 1e-8)
    H = np.empty((q, q))
    f0 = fn(x)
    for i in range(q):
        for j in range(i, q):
            if i == j:
                xp, xm = x.copy(), x.copy()
                xp[i] += h[i]
                xm[i] -= h[i]
                H[i, i] = (fn(xp) - 2.0 * f0 + fn(xm)) / h[i] ** 2
            else:
                vals = []
                for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    xx = x.copy()
                    xx[i] += si * h[i]
                    xx[j] += sj * h[j]
                    vals.append(fn(xx))
                H[i, j] = H[j, i] = (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h[i] * h[j])
    return H


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _loglik_fn(fam, z):
    """Fast unchecked log-likelihood in natural parameters."""
    if fam.tag == "EIPLD":
        lz = np.log(z)
        slz = float(np.sum(lz))
        n = z.size

        def ll(x):
            a, b, t = x
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                u = np.exp(-a * lz)
                val = (n * (math.log(a) + 2.0 * math.log(b) + math.log(t) - math.log1p(b))
                       + np.sum(np.logaddexp(0.0, a * lz)) - (2.0 * a + 1.0) * slz
                       - t * b * np.sum(u) + (t - 1.0) * np.sum(np.log1p(b / (1.0 + b) * u)))
            return float(val) if np.isfinite(val) else -np.inf
        return ll

    def ll(x):
        with np.errstate(all="ignore"):
            val = np.sum(fam._log_pdf(tuple(x), z))
        return float(val) if np.isfinite(val) else -np.inf
    return ll


def _polish_eipld(x, ll, data, log_lo, log_hi, iters=30):
    """Newton ascent in log space on the coordinates not pinned to the box."""
    f = ll(np.exp(x))
    for _ in range(iters):
        p = np.exp(x)
        g = score(p, data)
        free = (x > log_lo + 1e-9) & (x < log_hi - 1e-9)
        if not np.any(free) or np.max(np.abs(g[free])) <= 1e-10:
            break
        info = observed_information(p, data).matrix
        g_log = g * p
        H_log = -(p[:, None] * info * p[None, :]) + np.diag(g_log)
        Hf = H_log[np.ix_(free, free)]
        try:
            if np.all(np.linalg.eigvalsh(Hf) < 0):
                step_f = np.linalg.solve(Hf, -g_log[free])
            else:
                step_f = 1e-3 * g_log[free]
        except np.linalg.LinAlgError:
            step_f = 1e-3 * g_log[free]
        step = np.zeros_like(x)
        step[free] = step_f
        lam = 1.0
        improved = False
        # near the optimum the loglik gain drops below rounding noise; then
        # accept a step that still shrinks the score
        noise = 1e-13 * max(1.0, abs(f))
        gnorm = np.max(np.abs(g_log[free]))
        while lam > 1e-8:
            xn = np.clip(x + lam * step, log_lo, log_hi)
            fn = ll(np.exp(xn))
            if fn >= f or (fn >= f - noise
                           and np.max(np.abs((score(np.exp(xn), data) * np.exp(xn))[free])) < gnorm):
                improved = fn > f or np.max(np.abs(xn - x)) > 0
                x, f = xn, fn
                break
            lam *= 0.5
        if not improved or np.max(np.abs(lam * step)) < 1e-15:
            break
    return x, f


def fit_mle(family, data, config=None):
    """Maximum-likelihood fit of ``family`` to ``data``.

    Every point of the family's start grid (built around the sample median)
    is scored; the best ``config.restarts`` of them seed bounded Nelder-Mead
    runs in log-parameter space. The winning run (highest log-likelihood,
    ties to the lexicographically smallest log-parameters) is then, for
    EIPLD, polished by Newton steps on the analytic score.

    ``converged`` requires the simplex tolerances to be met, no parameter
    on the box, a positive definite information matrix and, for EIPLD, a
    score max-norm of at most ``1e-5``.
    """
    fam = get_family(family)
    data = _as_dataset(data)
    config = config or FitConfig()
    q = fam.n_params
    if data.n <= q:
        raise DomainError(f"need more than {q} observations to fit {fam.tag}")
    z = data.values
    if z[0] == z[-1]:
        raise DataError("all observations are equal; the fit is degenerate")

    ll = _loglik_fn(fam, z)
    log_lo, log_hi = math.log(config.lower), math.log(config.upper)

    def neg(x):
        v = ll(np.exp(x))
        return -v if np.isfinite(v) else 1e300

    starts = [np.clip(np.log(np.asarray(s, dtype=float)), log_lo, log_hi)
              for s in fam.starts(float(np.median(z)))]
    start_vals = [ll(np.exp(s)) for s in starts]
    order = sorted(range(len(starts)), key=lambda i: (-start_vals[i], tuple(starts[i])))
    chosen = order[:config.restarts]

    runs = []
    for i in chosen:
        res = minimize(neg, starts[i], method="Nelder-Mead",
                       bounds=[(log_lo, log_hi)] * q,
                       options={"xatol": config.tol_simplex, "fatol": config.tol_loglik,
                                "maxiter": config.max_iters, "maxfev": 2 * config.max_iters,
                                "adaptive": q > 2})
        runs.append((-res.fun, tuple(res.x), res))
    best_ll, _, best = max(runs, key=lambda r: (r[0], tuple(-v for v in r[1])))
    x = np.clip(best.x, log_lo, log_hi)
    nm_ok = bool(best.success)

    if fam.tag == "EIPLD":
        x, best_ll = _polish_eipld(x, ll, data, log_lo, log_hi)
    est = np.exp(x)
    at_bound = tuple(name for name, xi in zip(fam.param_names, x)
                     if xi <= log_lo + 1e-6 or xi >= log_hi - 1e-6)

    if fam.tag == "EIPLD":
        g = score(est, data)
        info = observed_information(est, data)
    else:
        def ll_nat(v):
            return ll(v) if np.all(v > 0) else -np.inf
        g = _fd_gradient(ll_nat, est)
        info = InfoMatrix(-_fd_hessian(ll_nat, est))

    vcov = None
    if np.all(np.isfinite(info.matrix)):
        try:
            vcov = np.linalg.inv(info.matrix)
        except np.linalg.LinAlgError:
            vcov = None

    messages = []
    if not nm_ok:
        messages.append(f"simplex search stopped early: {best.message}")
    if at_bound:
        messages.append("likelihood maximum lies on the parameter box for "
                        + ", ".join(at_bound)
                        + "; no interior maximum within [%g, %g]" % (config.lower, config.upper))
    if not info.positive_definite:
        messages.append("observed information is not positive definite")
    score_ok = fam.tag != "EIPLD" or float(np.max(np.abs(g))) <= 1e-5
    if not score_ok:
        messages.append("score max-norm %.3g exceeds 1e-5" % float(np.max(np.abs(g))))
    converged = nm_ok and not at_bound and info.positive_definite and score_ok

    fit = FitResult(
        family=fam,
        estimates=tuple(float(v) for v in est),
        log_lik=float(ll(est)),
        n=data.n,
        score_at_mle=np.asarray(g, dtype=float),
        info=info,
        vcov=vcov,
        converged=converged,
        n_restarts_used=len(runs),
        at_bound=at_bound,
        message="; ".join(messages) if messages else "converged",
        ci_level=config.ci_level,
        start_log_liks=tuple(start_vals),
    )
    if converged:
        fit.ci = confidence_intervals(fit, config.ci_level)
    return fit


def normal_quantile(p):
    return NormalDist().inv_cdf(p)


def confidence_intervals(fit, level=0.95):
    """Wald intervals ``estimate +/- z * sqrt(diag(vcov))``.

    Lower limits below zero are floored at 0 and flagged.

    Raises
    ------
    DomainError
        If the fit did not converge or its information matrix is singular.
    """
    if not 0 < level < 1:
        raise DomainError("level must lie in (0, 1)")
    if not fit.converged:
        raise DomainError("confidence intervals need a converged interior fit: " + fit.message)
    if fit.vcov is None or not fit.info.positive_definite:
        raise DomainError("observed information is singular or indefinite")
    zq = normal_quantile(0.5 * (1.0 + level))
    se = np.sqrt(np.diag(fit.vcov))
    out = []
    for name, est, s in zip(fit.family.param_names, fit.estimates, se):
        lo, hi = float(est - zq * s), float(est + zq * s)
        out.append(ConfidenceInterval(name, float(est), max(lo, 0.0), hi, lo <= 0))
    return tuple(out)


"""Special functions and numeric primitives.

Lambert W on the lower real branch, log-gamma, generalized binomial
coefficients and an adaptive Gauss-Kronrod integrator for the positive
half-line.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

INV_E = math.exp(-1.0)

__all__ = [
    "QuadratureResult",
    "gen_binomial",
    "integrate_positive_halfline",
    "lambert_w_minus1",
    "lambert_w_minus1_log",
    "log_gamma",
]


# ---------------------------------------------------------------------------
# Lambert W, branch -1
# ---------------------------------------------------------------------------

def _branch_point_guess(p):
    # series in p = -sqrt(2(1 + e x)) around x = -1/e
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))))


def _halley_direct(w, x, iters=30):
    for _ in range(iters):
        ew = np.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
            step = np.where(np.isfinite(denom) & (denom != 0.0), f / denom, 0.0)
        # never step across the branch point
        w_new = np.minimum(w - step, -1.0)
        done = np.abs(w_new - w) <= 4e-16 * np.abs(w_new)
        w = w_new
        if np.all(done):
            break
    return w


def _halley_log(w, log_mx, iters=30):
    # solve w + ln(-w) = ln(-x) for w <= -1; well conditioned away from w = -1
    for _ in range(iters):
        g = w + np.log(-w) - log_mx
        g1 = 1.0 + 1.0 / w
        g2 = -1.0 / (w * w)
        step = g / (g1 - 0.5 * g * g2 / g1)
        w_new = np.minimum(w - step, -1.0)
        done = np.abs(w_new - w) <= 4e-16 * np.abs(w_new)
        w = w_new
        if np.all(done):
            break
    return w


def lambert_w_minus1_log(log_mx):
    """W_{-1}(x) given ``log_mx = ln(-x)``, for ``log_mx <= -1``.

    Working from the logarithm keeps arguments such as ``-1e-400`` usable.
    Values of ``log_mx`` above -1 are outside the domain.
    """
    L = np.asarray(log_mx, dtype=float)
    if np.any(np.isnan(L)) or np.any(L > -1.0):
        raise DomainError("lambert_w_minus1 requires -1/e <= x < 0")
    Lf = np.atleast_1d(L).astype(float)
    out = np.empty_like(Lf)

    near = Lf > -1.5
    if np.any(near):
        Ln = Lf[near]
        x = -np.exp(Ln)
        # 1 + e*x = -expm1(1 + ln(-x)), no cancellation near the branch point
        q = np.maximum(-np.expm1(1.0 + Ln), 0.0)
        p = -np.sqrt(2.0 * q)
        w = _branch_point_guess(p)
        w = np.where(q == 0.0, -1.0, _halley_direct(w, x))
        out[near] = w
    far = ~near
    if np.any(far):
        Lr = Lf[far]
        l2 = np.log(-Lr)
        w0 = np.minimum(Lr - l2 + l2 / Lr, -1.0 - 1e-3)
        out[far] = _halley_log(w0, Lr)

    out = out.reshape(L.shape) if L.ndim else out[0]
    return out if np.ndim(out) else float(out)


def lambert_w_minus1(x):
    """Lower real branch of the Lambert W function.

    Parameters
    ----------
    x : float or array_like
        Argument(s) in ``[-1/e, 0)``.

    Returns
    -------
    float or ndarray
        ``w <= -1`` with ``w * exp(w) == x``. ``W_{-1}(-1/e) = -1`` exactly.

    Raises
    ------
    DomainError
        If any argument is below ``-1/e`` or not negative.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)) or np.any(xa >= 0.0) or np.any(xa < -INV_E):
        raise DomainError("lambert_w_minus1 requires -1/e <= x < 0")
    with np.errstate(divide="ignore"):
        L = np.minimum(np.log(-xa), -1.0)
    w = np.asarray(lambert_w_minus1_log(L), dtype=float)
    w = np.where(xa == -INV_E, -1.0, w)
    return w if w.ndim else float(w)


# ---------------------------------------------------------------------------
# Gamma and binomial
# ---------------------------------------------------------------------------

def log_gamma(x):
    """Natural logarithm of the gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def gen_binomial(a, i):
    """Generalized binomial coefficient ``C(a, i)`` for real ``a``.

    Uses the product ``prod_{j=1..i} (a - j + 1) / j`` so that negative or
    fractional ``a`` never touches a pole of the gamma function. For a
    nonnegative integer ``a`` and ``i > a`` a factor vanishes and the result is
    exactly zero.
    """
    i = int(i)
    if i < 0:
        raise DomainError("gen_binomial requires i >= 0")
    c = 1.0
    for j in range(1, i + 1):
        c *= (a - j + 1) / j
        if c == 0.0:
            return 0.0
    return c


# ---------------------------------------------------------------------------
# Quadrature on (0, inf)
# ---------------------------------------------------------------------------

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes sit at odd positions of the 15-point layout
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

# beyond this |s| the map z = scale * exp(s) leaves double range
_S_MAX = 600.0


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral with its estimated absolute error."""

    value: float
    abs_error_estimate: float
    evaluations: int

    def __float__(self):
        return self.value


def _mapped(f, t, scale):
    # z = scale * exp(s), s = t / (1 - t^2); dz/dt = z (1 + t^2) / (1 - t^2)^2
    one_m = 1.0 - t * t
    s = t / one_m
    inside = np.abs(s) < _S_MAX
    z = scale * np.exp(np.where(inside, s, 0.0))
    vals = np.asarray(f(z), dtype=float) * np.ones_like(z)
    jac = z * (1.0 + t * t) / (one_m * one_m)
    out = np.where(inside, vals * jac, 0.0)
    return np.where(np.isfinite(out), out, np.where(inside, np.nan, 0.0))


def integrate_positive_halfline(f, tol=1e-10, rtol=0.0, scale=1.0,
                                max_intervals=4000, initial_intervals=16):
    """Adaptively integrate ``f`` over ``(0, inf)``.

    The half-line is first mapped to the real line by ``z = scale * exp(s)``
    and then compactified with ``s = t / (1 - t**2)``, ``t in (-1, 1)``.
    Algebraic tails ``z**-p`` and essential singularities such as
    ``exp(-c / z**a)`` at the origin both turn into integrands that vanish
    smoothly at ``t = -1`` and ``t = 1``. ``scale`` should sit near the bulk of
    the mass so the initial partition resolves it.

    The interval with the largest error is bisected until the summed
    ``|K15 - G7|`` estimates drop below ``max(tol, rtol * |value|)``.

    Parameters
    ----------
    f : callable
        Vectorized integrand; receives an ndarray of positive abscissae.
    tol, rtol : float
        Absolute and relative error targets.
    scale : float
        Positive centring scale for the change of variables.

    Returns
    -------
    QuadratureResult

    Raises
    ------
    ConvergenceError
        If ``max_intervals`` is exhausted; carries the best estimate and
        its error bound.
    """
    if not tol > 0 and not rtol > 0:
        raise DomainError("at least one of tol, rtol must be positive")
    if not scale > 0:
        raise DomainError("scale must be positive")

    evaluations = 0

    def rule(a, b):
        nonlocal evaluations
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        vals = _mapped(f, mid + half * KRONROD_NODES, scale)
        evaluations += 15
        if np.any(np.isnan(vals)):
            raise DomainError("integrand returned a non-finite value")
        k = half * float(KRONROD_WEIGHTS @ vals)
        g = half * float(GAUSS_WEIGHTS @ vals)
        return k, abs(k - g)

    edges = np.linspace(-1.0, 1.0, initial_intervals + 1)
    heap = []
    for a, b in zip(edges[:-1], edges[1:]):
        k, e = rule(a, b)
        heap.append((-e, a, b, k))
    heapq.heapify(heap)
    total = sum(item[3] for item in heap)
    err = sum(-item[0] for item in heap)

    while err > max(tol, rtol * abs(total)):
        if len(heap) >= max_intervals:
            raise ConvergenceError(
                f"quadrature did not reach tolerance after {len(heap)} intervals",
                estimate=total, error=err)
        neg_e, a, b, k = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not a < m < b:
            raise ConvergenceError("quadrature interval underflow",
                                   estimate=total, error=err)
        k1, e1 = rule(a, m)
        k2, e2 = rule(m, b)
        heapq.heappush(heap, (-e1, a, m, k1))
        heapq.heappush(heap, (-e2, m, b, k2))
        # recompute sums to avoid drift from repeated subtraction
        total = math.fsum(item[3] for item in heap)
        err = math.fsum(-item[0] for item in heap)

    return QuadratureResult(value=total, abs_error_estimate=err,
                            evaluations=evaluations)

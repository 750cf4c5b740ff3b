import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eipld import COMPARED_FAMILIES, FAMILIES, DomainError, get_family, log_likelihood
from eipld.families import family_cdf, family_log_pdf
from eipld.special import integrate_positive_halfline

POINTS = {
    "EIPLD": [(1.2, 25.9, 0.062), (0.6, 0.4, 3.0), (3.0, 2.0, 1.0)],
    "EPLD": [(0.29, 3.5, 30.8), (1.5, 0.8, 0.4)],
    "PLD": [(0.8, 0.59), (2.5, 1.7)],
    "GLD": [(0.75, 0.36), (3.0, 2.0)],
    "LD": [(0.42,), (4.0,)],
    "EE": [(1.11, 0.27), (0.4, 3.0)],
    "WD": [(0.96, 0.27), (3.0, 0.1)],
    "ILD": [(1.0,), (0.2,)],
    "IPLD": [(1.3, 2.0), (0.7, 0.5)],
}


def test_registry():
    assert set(COMPARED_FAMILIES) <= set(FAMILIES)
    assert COMPARED_FAMILIES[0] == "EIPLD"
    assert get_family("wd") is FAMILIES["WD"]
    with pytest.raises(DomainError):
        get_family("gamma")


def test_parameter_count_checked():
    with pytest.raises(DomainError):
        family_log_pdf("WD", (1.0,), 1.0)
    with pytest.raises(DomainError):
        family_log_pdf("WD", (1.0, -2.0), 1.0)
    with pytest.raises(DomainError):
        family_log_pdf("WD", (1.0, 2.0), 0.0)


@pytest.mark.parametrize("tag, p", [("LD", (1.0,)), ("ILD", (1.0,))])
def test_unit_values(tag, p):
    assert family_log_pdf(tag, p, 1.0) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("tag, p", [(t, p) for t, ps in POINTS.items() for p in ps])
def test_pdf_normalizes(tag, p):
    fam = get_family(tag)
    val = integrate_positive_halfline(lambda z: fam.pdf(p, z), tol=1e-12).value
    assert val == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("tag, p", [(t, ps[0]) for t, ps in POINTS.items()])
def test_cdf_is_integral_of_pdf(tag, p):
    fam = get_family(tag)
    for x in (0.3, 1.0, 4.0):
        part = integrate_positive_halfline(lambda z: np.where(z < x, fam.pdf(p, np.minimum(z, x)), 0.0),
                                           tol=1e-13, scale=x).value
        assert part == pytest.approx(family_cdf(tag, p, x), abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(FAMILIES)), st.floats(min_value=0.3, max_value=5.0))
def test_cdf_monotone(tag, s):
    fam = get_family(tag)
    p = tuple(s * (1 + 0.1 * i) for i in range(fam.n_params))
    F = fam.cdf(p, np.geomspace(1e-3, 1e3, 300))
    assert np.all(np.diff(F) >= 0) and F[0] >= 0 and F[-1] <= 1


def test_epld_exponent_one_is_pld():
    z = np.geomspace(0.01, 50, 100)
    assert np.allclose(family_log_pdf("EPLD", (1.4, 0.6, 1.0), z), family_log_pdf("PLD", (1.4, 0.6), z),
                       rtol=1e-13)


def test_gld_and_pld_reduce_to_lindley():
    z = np.geomspace(0.01, 50, 100)
    ld = family_log_pdf("LD", (0.8,), z)
    assert np.allclose(family_log_pdf("GLD", (1.0, 0.8), z), ld, rtol=1e-13)
    assert np.allclose(family_log_pdf("PLD", (1.0, 0.8), z), ld, rtol=1e-13)


def test_weibull_repair_times_loglik(repair):
    assert -log_likelihood("WD", (0.96036, 0.26883), repair) == pytest.approx(95.5114, abs=0.05)


def test_ild_is_eipld_at_unit_alpha_theta():
    z = np.geomspace(0.01, 100, 200)
    assert np.allclose(family_log_pdf("ILD", (2.3,), z), family_log_pdf("EIPLD", (1.0, 2.3, 1.0), z),
                       rtol=1e-12)


def test_start_grids_positive():
    for fam in FAMILIES.values():
        starts = fam.starts(1.5)
        assert starts and all(len(s) == fam.n_params and min(s) > 0 for s in starts)
    assert len(get_family("EIPLD").starts(1.5)) == 27
    assert math.isclose(max(s[1] for s in get_family("EIPLD").starts(1.5)), 7.5)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(FAMILIES)), st.lists(st.floats(min_value=-2.0, max_value=3.5),
                                                  min_size=3, max_size=3))
def test_extreme_abscissae_stay_finite(tag, logs):
    fam = get_family(tag)
    p = tuple(np.exp(logs[:fam.n_params]))
    z = np.exp(np.linspace(-600, 600, 2001))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        f, F = fam.pdf(p, z), fam.cdf(p, z)
    assert np.all(np.isfinite(f)) and np.all(f >= 0)
    assert np.all(np.diff(F) >= 0) and F[-1] == 1.0

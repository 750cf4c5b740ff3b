import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import REFERENCE_POINT
from eipld import (DataError, Dataset, DomainError, FitConfig, Params, cdf, confidence_intervals,
                   fit_mle, log_likelihood, log_pdf, observed_information, sample, score)
from eipld.estimation import _fd_hessian, hessian_closed_form, normal_quantile
from eipld.simulation import derive_seed

pos = st.floats(min_value=0.3, max_value=8.0)


def _datasets(repair):
    return [repair, Dataset(sample((2, 3, 1.5), 60, 11)), Dataset(sample((0.7, 0.5, 4.0), 25, 12))]


def _fd_score(params, data, rel=1e-6):
    x = np.asarray(params, dtype=float)
    g = np.empty(3)
    for j in range(3):
        h = rel * max(1.0, abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        g[j] = (log_likelihood("EIPLD", xp, data) - log_likelihood("EIPLD", xm, data)) / (2 * h)
    return g


def test_dataset_validation():
    d = Dataset([3.0, 1.0, 2.0])
    assert d.n == 3 and list(d.values) == [1.0, 2.0, 3.0]
    with pytest.raises(ValueError):
        d.values[0] = 5.0
    for bad in ([], [1.0, -1.0], [1.0, math.nan], [0.0, 2.0]):
        with pytest.raises(DataError):
            Dataset(bad)


def test_loglik_at_reference_point(repair):
    assert log_likelihood("EIPLD", REFERENCE_POINT, repair) == pytest.approx(-89.45, abs=0.02)


def test_loglik_single_point():
    assert log_likelihood("EIPLD", (1, 1, 1), [1.0]) == pytest.approx(-1.0, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(pos, pos, pos)
def test_loglik_is_sum_of_log_pdf(a, b, t):
    z = sample((1.5, 2, 1), 30, 3)
    assert log_likelihood("EIPLD", (a, b, t), z) == pytest.approx(float(np.sum(log_pdf((a, b, t), z))),
                                                                    rel=1e-10)


def test_score_theta_component_single_point():
    assert score((1, 1, 1), [1.0])[2] == pytest.approx(math.log(1.5), rel=1e-15)


def test_score_matches_finite_differences(repair):
    rng = np.random.default_rng(5)
    for data in _datasets(repair):
        for _ in range(10):
            p = np.exp(rng.uniform(np.log(0.3), np.log(8.0), 3))
            g, fd = score(p, data), _fd_score(p, data)
            assert np.allclose(g, fd, rtol=1e-6, atol=1e-6 * np.max(np.abs(fd)))


def test_information_properties(repair):
    rng = np.random.default_rng(6)
    for data in _datasets(repair):
        for _ in range(5):
            p = np.exp(rng.uniform(np.log(0.3), np.log(8.0), 3))
            info = observed_information(p, data).matrix
            assert np.max(np.abs(info - info.T)) <= 1e-8 * np.max(np.abs(info))
            assert info[2, 2] == data.n / p[2] ** 2
            assert np.allclose(info, -hessian_closed_form(p, data), rtol=1e-4, atol=1e-6 * np.max(np.abs(info)))
            fd = -_fd_hessian(lambda x: log_likelihood("EIPLD", x, data), p)
            assert np.allclose(info, fd, rtol=1e-4, atol=1e-4 * np.max(np.abs(info)))


def test_information_theta_entry_at_reference(repair):
    info = observed_information(REFERENCE_POINT, repair)
    assert info.matrix[2, 2] == 40 / 0.06205 ** 2
    assert info.matrix[2, 2] == pytest.approx(10389.06, abs=0.01)


def test_repair_times_fit(eipld_fit, repair):
    fit = eipld_fit
    assert fit.log_lik == pytest.approx(-89.45, abs=0.05)
    assert 2 * -fit.log_lik + 6 == pytest.approx(184.91, abs=0.10)
    assert np.max(np.abs(fit.score_at_mle)) <= 1e-5
    assert all(v > 0 for v in fit.estimates)
    assert fit.log_lik >= max(fit.start_log_liks)
    # the likelihood climbs toward the box corner; see the module docstring
    assert fit.at_bound == ("beta",) and not fit.converged and fit.ci is None


def test_repair_times_fit_cdf_close_to_reference(eipld_fit):
    z = np.linspace(0.4, 25.0, 2000)
    assert np.max(np.abs(cdf(eipld_fit.estimates, z)
                         - cdf(REFERENCE_POINT, z))) <= 0.005


def test_fit_is_deterministic(repair):
    cfg = FitConfig(restarts=3)
    a, b = fit_mle("EIPLD", repair, cfg), fit_mle("EIPLD", repair, cfg)
    assert a.estimates == b.estimates and a.log_lik == b.log_lik


def test_fit_rejects_degenerate_data():
    with pytest.raises(DataError):
        fit_mle("EIPLD", [2.0] * 10)
    with pytest.raises(DomainError):
        fit_mle("EIPLD", [1.0, 2.0, 3.0])


@pytest.fixture(scope="module")
def large_fit():
    z = sample((2, 3, 1.5), 5000, derive_seed(0, 5000, 0))
    return fit_mle("EIPLD", z, FitConfig(restarts=3))


def test_large_sample_alpha_within_ten_percent(large_fit):
    assert large_fit.estimates[0] == pytest.approx(2.0, rel=0.10)


@pytest.mark.parametrize("j, name", [(1, "beta"), (2, "theta")])
def test_large_sample_fit_within_ten_percent(large_fit, j, name):
    assert large_fit.estimates[j] == pytest.approx((2, 3, 1.5)[j], rel=0.10), name


def test_normal_quantile():
    assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)


@pytest.fixture(scope="module")
def interior_fit():
    fit = fit_mle("EIPLD", sample((2, 3, 1.5), 500, 1), FitConfig(restarts=3))
    assert fit.converged
    return fit


def test_interval_nesting(interior_fit):
    widths = {}
    for level in (0.90, 0.95, 0.99):
        ci = confidence_intervals(interior_fit, level)
        for c in ci:
            assert c.lower <= c.estimate <= c.upper and c.lower >= 0
            assert c.floored == (c.lower == 0.0)
        widths[level] = [c.upper - c.lower for c in ci]
    assert all(a <= b <= c for a, b, c in zip(widths[0.90], widths[0.95], widths[0.99]))


def test_intervals_need_converged_fit(eipld_fit, interior_fit):
    with pytest.raises(DomainError):
        confidence_intervals(eipld_fit)
    with pytest.raises(DomainError):
        confidence_intervals(interior_fit, 1.0)


def test_fit_config_file(tmp_path):
    f = tmp_path / "fit.cfg"
    f.write_text("restarts = 5  # fewer\nci_level = 0.9\ntol_loglik = 1e-8\n")
    cfg = FitConfig.from_file(f)
    assert (cfg.restarts, cfg.ci_level, cfg.tol_loglik) == (5, 0.9, 1e-8)
    f.write_text("bogus = 1\n")
    with pytest.raises(DomainError):
        FitConfig.from_file(f)
    with pytest.raises(DomainError):
        FitConfig(lower=2.0, upper=1.0)


def test_competitor_fit_converges(repair):
    fit = fit_mle("WD", repair)
    assert fit.converged and fit.ci is not None
    assert -fit.log_lik == pytest.approx(95.5114, abs=0.05)


@pytest.mark.slow
def test_theta_interval_coverage():
    truth = Params(2, 3, 1.5)
    cfg = FitConfig(restarts=3)
    hits = 0
    reps = 500
    for i in range(reps):
        fit = fit_mle("EIPLD", sample(truth, 200, derive_seed(99, 200, i)), cfg)
        if fit.ci is not None and fit.ci[2].lower <= truth.theta <= fit.ci[2].upper:
            hits += 1
    assert 0.93 <= hits / reps <= 0.97

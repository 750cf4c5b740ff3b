import json
import math

import numpy as np
import pytest

from eipld import DomainError, aic, bic, compare, ks_statistic, quantile
from eipld.selection import scores_to_json, scores_to_text


@pytest.fixture(scope="module")
def ranking(repair):
    return compare(repair, ["EIPLD", "EPLD", "PLD", "GLD", "LD", "EE", "WD"])


def test_aic_bic():
    assert aic(89.45, 3) == pytest.approx(184.90, abs=1e-12)
    assert aic(0, 1) == 2
    assert bic(89.45, 3, 40) == pytest.approx(189.97, abs=0.02)
    assert bic(0, 1, math.e) == pytest.approx(1.0, abs=1e-15)
    assert aic(89.45, 3) - bic(89.45, 3, 40) == pytest.approx(6 - 3 * math.log(40), abs=1e-12)
    with pytest.raises(DomainError):
        aic(1.0, 0)


def test_ks_at_plotting_positions():
    n = 50
    z = quantile((1.5, 2, 0.7), (np.arange(1, n + 1) - 0.5) / n)
    assert ks_statistic("EIPLD", (1.5, 2, 0.7), z) == pytest.approx(1 / (2 * n), rel=1e-9)


def test_ks_eipld_fit(eipld_fit, repair):
    assert ks_statistic("EIPLD", eipld_fit.estimates, repair) == pytest.approx(0.0954, abs=0.003)


def test_eipld_ranks_first(ranking):
    assert ranking[0].family.tag == "EIPLD"
    aics = [r.aic for r in ranking]
    assert aics == sorted(aics)


def test_weibull_row(ranking):
    wd = next(r for r in ranking if r.family.tag == "WD")
    assert wd.neg_log_lik == pytest.approx(95.5114, abs=0.05)
    assert wd.converged


def test_discrepancy_notes_present(ranking):
    notes = {r.family.tag: r.note for r in ranking}
    for tag in ("EPLD", "GLD", "LD", "PLD"):
        assert notes[tag]
    assert not notes["WD"]


def test_single_family_table(repair):
    rows = compare(repair, ["ee"])
    assert len(rows) == 1 and rows[0].family.tag == "EE"
    assert rows[0].q == 2


def test_failed_fit_sorts_last():
    rows = compare([1.0, 2.0, 3.0], ["LD", "EIPLD"])
    assert rows[0].family.tag == "LD"
    assert math.isnan(rows[-1].aic) and rows[-1].error


def test_table_outputs(ranking):
    doc = json.loads(json.dumps(scores_to_json(ranking)))
    keys = {"family", "q", "neg_log_lik", "aic", "bic", "ks", "params", "converged"}
    assert all(keys <= set(row) for row in doc)
    text = scores_to_text(ranking).splitlines()
    assert len(text) == 1 + len(ranking)
    assert text[1].split("\t")[1] == "EIPLD"

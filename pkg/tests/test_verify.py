import csv
import io
import json

import pytest

from holonomy2.transport import TransportConfig
from holonomy2.verify import LAW_NAMES, LAWS, run_suite

LOW = TransportConfig(steps_t=32, steps_s=32, steps_x=16)

EXPECTED_LAWS = (
    "crossed_axioms", "cartan_structure", "two_structure", "fake_curvature", "bianchi", "two_bianchi",
    "alternation", "target_law", "vertical_functoriality", "horizontal_monoidality", "interchange",
    "reparametrization_invariance", "vertical_inverse", "gauge_covariance", "basepoint_translation",
    "family_derivative",
)


def test_law_set_is_fixed():
    assert LAW_NAMES == EXPECTED_LAWS
    assert all(tol > 0 and formula for _, formula, _, tol in LAWS)


@pytest.fixture(scope="module")
def flat_report():
    # the gauged data is pure gauge, so that row carries integrator error: 6e-10 at 64 steps, 2e-14 at 128
    return run_suite("flat-trivial", TransportConfig(steps_t=128, steps_s=128, steps_x=16))


def test_flat_trivial_is_exact(flat_report):
    assert [e.law for e in flat_report.entries] == list(EXPECTED_LAWS)
    for e in flat_report.entries:
        assert e.residual <= 1e-10, e.law
    assert flat_report.passed and flat_report.as_expected


def test_report_formats(flat_report):
    js = json.loads(flat_report.dumps())
    assert js["scenario"] == "flat-trivial" and js["law_set_version"] == 1
    assert len(js["entries"]) == len(EXPECTED_LAWS)
    assert flat_report.dumps() == flat_report.dumps()
    rows = list(csv.DictReader(io.StringIO(flat_report.to_csv())))
    assert [r["law"] for r in rows] == list(EXPECTED_LAWS)
    table = flat_report.to_table()
    assert "target_law" in table and "FAIL" not in table


def test_subset_and_overrides():
    rep = run_suite("corrupted-action", LOW, laws=["crossed_axioms", "interchange", "target_law"])
    # rows come back in law-set order
    assert [e.law for e in rep.entries] == ["crossed_axioms", "target_law", "interchange"]
    assert set(rep.failed) == {"crossed_axioms", "interchange"}
    assert rep.as_expected and not rep.passed
    loose = run_suite("corrupted-action", LOW, laws=["crossed_axioms"], tol=100.0)
    assert loose.passed
    with pytest.raises(KeyError):
        run_suite("flat-trivial", LOW, laws=["no-such-law"])
    with pytest.raises(KeyError):
        rep.entry("no-such-law")


def test_progress_callback():
    seen = []
    run_suite("flat-trivial", LOW, laws=["crossed_axioms", "alternation"], progress=seen.append)
    assert seen == ["crossed_axioms", "alternation"]

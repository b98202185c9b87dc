import numpy as np
import pytest

from src.config import RunConfig
from src.core.errors import VerificationError
from src.core.halfint import HalfInt
from src.core.utils.serialization import dump_json
from src.core.verification import (
    FLIPPED_TIME_METRIC,
    STANDARD_LABELS,
    VerificationSuite,
    run_verification,
    standard_jobs,
)


@pytest.fixture
def config(tmp_path):
    return RunConfig(samples=10, cache_dir=tmp_path / "cache")


def records(suite):
    return {r.name: r for r in suite.records}


def test_standard_labels_and_jobs():
    assert len(STANDARD_LABELS) == 8
    half = HalfInt(1)
    jobs = list(standard_jobs())
    assert ((half, HalfInt(0)), (HalfInt(0), half), half) in jobs
    assert all(j in (HalfInt(0), half, HalfInt(2), HalfInt(3)) for _, _, j in jobs)


def test_pauli_checks_pass(config):
    suite = VerificationSuite(config)
    suite.check_pauli()
    by_name = records(suite)
    assert by_name["gamma.pauli"].status == "pass"
    assert by_name["gamma.pauli_bar"].status == "pass"


def test_sigma_covariance_detects_wrong_metric(config):
    good = VerificationSuite(config)
    good.check_sigma_covariance()
    assert records(good)["gamma.sigma_covariance"].status == "pass"

    bad = VerificationSuite(config, metric=FLIPPED_TIME_METRIC)
    bad.check_sigma_covariance()
    record = records(bad)["gamma.sigma_covariance"]
    assert record.status == "fail"
    assert record.residual > record.limit
    assert record.inputs == {"words": 50, "seed": 42}


def test_errors_become_records(config):
    suite = VerificationSuite(config)

    def broken():
        raise VerificationError("residual too large", {"residual": 0.5, "job": "x"})

    suite.check("demo.broken", "anchor", broken)
    (record,) = suite.records
    assert record.status == "error"
    assert record.inputs["residual"] == 0.5
    assert record.inputs["job"] == "x"
    assert record.to_json()["message"] == "residual too large"
    assert record.to_json()["residual"] is None


def test_numerical_failures_become_records(config):
    suite = VerificationSuite(config)
    suite.check("demo.singular", "anchor", lambda: float(np.linalg.inv(np.zeros((2, 2)))[0, 0]))
    suite.check("demo.shape", "anchor", lambda: float(np.ones(3) @ np.ones(2)))
    for record in suite.records:
        assert record.status == "error"
        assert record.to_json()["residual"] is None
    assert records(suite)["demo.singular"].message.startswith("LinAlgError")
    assert records(suite)["demo.shape"].message.startswith("ValueError")


def test_statistics_suite_report(config):
    report = run_verification(config, ["statistics"])
    assert report.passed
    names = [c.name for c in report.checks]
    assert names == sorted(names)
    payload = report.to_json()
    assert payload["summary"] == {"total": len(names), "failed": 0}
    assert payload["config"]["seed"] == 42
    assert "runtime" in report.to_json(include_timing=True)["checks"][0]


def test_reports_are_deterministic(config):
    first = dump_json(run_verification(config, ["statistics"]).to_json())
    second = dump_json(run_verification(config, ["statistics"]).to_json())
    assert first == second


def test_unknown_suite(config):
    with pytest.raises(ValueError):
        run_verification(config, ["everything"])


@pytest.mark.slow
def test_full_suite_passes(config):
    report = run_verification(config)
    assert [c.name for c in report.failures] == []

"""
Unit tests for the verification suite and its report.

Tests cover:
- Report assembly, schema validation and writing
- Host stamping with psutil
- SuiteRunner ordering, concurrency settings and exit codes
- Individual suite categories on reduced level ranges
"""

import json
import logging
from unittest.mock import MagicMock, patch

import pytest

from src.cli import suite
from src.cli.report import REPORT_KEYS, SCHEMA_VERSION, Report, ReportEntry, ReportSchemaError, host_stamp
from src.cli.suite import (
    CATEGORIES,
    SuiteContext,
    SuiteRunner,
    calibration_category,
    chebyshev_category,
    colorings_category,
    correspondence_category,
    jones_category,
    oracle_category,
    skein_category,
    verlinde_category,
    weyl_category,
)
from src.config.settings import ToolkitConfig
from src.utils.errors import CalibrationError, InputError

# Mock data for testing
MOCK_MEMORY = MagicMock(total=16 * 2 ** 30, available=8 * 2 ** 30, percent=50.0)
MOCK_HOST = {"python": "3.11", "platform": "test"}


def small_config() -> ToolkitConfig:
    """Configuration with reduced sample sizes and bounds."""
    config = ToolkitConfig()
    config.suite.skein_triples = 5
    config.suite.random_b4_words = 5
    config.suite.phase_bound = 1
    config.suite.sign_bound = 1
    config.suite.workers = 2
    return config


@pytest.fixture
def context(calibration_record):
    """Suite context capped at level 4."""
    return SuiteContext(small_config(), calibration_record, 4)


def passing(name):
    """Category returning one passing entry."""
    return lambda context: [ReportEntry(name, "ok")]


def failing(name):
    """Category returning one failing entry."""
    return lambda context: [ReportEntry(name, "bad", passed=False)]


def raising(error):
    """Category raising ``error``."""
    def category(context):
        raise error
    return category


def test_report_document():
    """Test the serialised report and its summary."""
    report = Report(calibration={"c": 0.5}, level_max=8, host=MOCK_HOST)
    report.add(ReportEntry("jones", "a", {"braid": ("n=2", 1)}, True, 0.5, 1.0))
    report.extend([ReportEntry("jones", "b", passed=False), ReportEntry("weyl", "c", deviation=float("nan"))])
    document = report.to_json()

    assert set(REPORT_KEYS) <= set(document)
    assert document["schema_version"] == SCHEMA_VERSION
    assert document["summary"] == {"jones": {"passed": 1, "failed": 1}, "weyl": {"passed": 1, "failed": 0}}
    assert document["entries"][0]["inputs"] == {"braid": ["n=2", 1]}
    assert document["entries"][2]["deviation"] is None
    assert not report.passed
    assert [entry.check for entry in report.failures()] == ["b"]
    report.validate()


def test_report_keeps_small_deviations():
    """Test that deviations below the display rounding survive in JSON."""
    report = Report(calibration={"c": 0.5}, level_max=8, host=MOCK_HOST)
    report.add(ReportEntry("weyl", "tiny", {"drift": 4e-15}, True, 3e-14, 1e-12))
    document = json.loads(json.dumps(report.to_json()))
    entry = document["entries"][0]
    assert entry["deviation"] == 3e-14
    assert entry["tolerance"] == 1e-12
    assert entry["inputs"]["drift"] == 4e-15


def test_report_validation_errors():
    """Test empty reports, duplicate checks and bad field types."""
    with pytest.raises(ReportSchemaError):
        Report(host=MOCK_HOST).validate()

    duplicate = Report(entries=[ReportEntry("x", "same"), ReportEntry("x", "same")], host=MOCK_HOST)
    with pytest.raises(ReportSchemaError, match="duplicate"):
        duplicate.validate()

    wrong = Report(entries=[ReportEntry("x", "y", tolerance="large")], host=MOCK_HOST)  # type: ignore[arg-type]
    with pytest.raises(ReportSchemaError):
        wrong.validate()


def test_report_write(tmp_path):
    """Test that valid reports are written and invalid ones are not."""
    path = tmp_path / "out" / "report.json"
    report = Report(entries=[ReportEntry("jones", "a")], host=MOCK_HOST)
    report.write(path)
    data = json.loads(path.read_text())
    assert data["generated_by"] == "cskit"
    assert data["entries"][0]["check"] == "a"

    empty = tmp_path / "empty.json"
    with pytest.raises(ReportSchemaError):
        Report(host=MOCK_HOST).write(empty)
    assert not empty.exists()


def test_host_stamp():
    """Test host information with mocked psutil."""
    with patch("psutil.virtual_memory", return_value=MOCK_MEMORY), \
         patch("psutil.cpu_count", return_value=4):
        stamp = host_stamp()
    assert stamp["cpu_count"] == 4
    assert stamp["memory_total"] == MOCK_MEMORY.total

    with patch("psutil.virtual_memory", side_effect=RuntimeError("no /proc")):
        stamp = host_stamp()
    assert set(stamp) == {"python", "platform"}


def test_runner_orders_categories(calibration_record):
    """Test that entries follow category order and the first failure sets the exit code."""
    categories = [
        ("first", passing("first")),
        ("second", failing("second")),
        ("calibration", failing("calibration")),
    ]
    with patch("psutil.virtual_memory", return_value=MOCK_MEMORY):
        outcome = SuiteRunner(small_config(), calibration_record, 4, categories).run()
    assert [entry.category for entry in outcome.report.entries] == ["first", "second", "calibration"]
    assert [result.exit_code for result in outcome.results] == [0, 3, 4]
    assert outcome.exit_code == 3
    assert outcome.report.level_max == 4
    assert outcome.report.calibration == calibration_record.to_json()


def test_runner_calibration_failure(calibration_record):
    """Test that a failing calibration category gives exit code 4."""
    categories = [("jones", passing("jones")), ("calibration", failing("calibration"))]
    with patch("psutil.virtual_memory", return_value=MOCK_MEMORY):
        outcome = SuiteRunner(small_config(), calibration_record, 4, categories).run()
    assert outcome.exit_code == 4


@pytest.mark.parametrize(
    "error,code",
    [(InputError("bad"), 2), (ArithmeticError("nan"), 3), (CalibrationError("ambiguous"), 4)],
)
def test_runner_category_errors(calibration_record, error, code):
    """Test that a raising category becomes a failing error entry."""
    categories = [("jones", passing("jones")), ("broken", raising(error))]
    with patch("psutil.virtual_memory", return_value=MOCK_MEMORY):
        outcome = SuiteRunner(small_config(), calibration_record, 4, categories).run()
    entry = outcome.report.entries[-1]
    assert (entry.category, entry.check, entry.passed) == ("broken", "error", False)
    assert outcome.exit_code == code


def test_runner_all_pass(calibration_record):
    """Test exit code 0 when every category passes."""
    categories = [(name, passing(name)) for name in ("a", "b", "c")]
    with patch("psutil.virtual_memory", return_value=MOCK_MEMORY):
        outcome = SuiteRunner(small_config(), calibration_record, 4, categories).run()
    assert outcome.exit_code == 0
    assert outcome.report.passed


def test_runner_workers(calibration_record):
    """Test the worker count from configuration and from psutil."""
    config = small_config()
    assert SuiteRunner(config, calibration_record).workers == 2
    config.suite.workers = None
    with patch("psutil.cpu_count", return_value=64):
        assert SuiteRunner(config, calibration_record).workers == len(CATEGORIES)
    with patch("psutil.cpu_count", return_value=None):
        assert SuiteRunner(config, calibration_record).workers == 1


def test_runner_level_max_default(calibration_record):
    """Test that level_max falls back to the configured value."""
    assert SuiteRunner(ToolkitConfig(), calibration_record).level_max == 64


def test_memory_threshold_warning(calibration_record, caplog):
    """Test the pre-run memory warning."""
    busy = MagicMock(percent=97.5)
    runner = SuiteRunner(small_config(), calibration_record, 4, [("a", passing("a"))])
    with patch("psutil.virtual_memory", return_value=busy), caplog.at_level(logging.WARNING):
        runner.run()
    assert "High memory usage" in caplog.text


def test_jones_category(context):
    """Test the knot checks."""
    entries = jones_category(context)
    assert all(entry.passed for entry in entries)
    assert {entry.check for entry in entries} >= {"trefoil.state-sum", "trefoil.markov-trace", "figure-eight"}


def test_skein_category(context):
    """Test the skein relation on a few random triples."""
    entries = skein_category(context)
    assert len(entries) == 1 and entries[0].passed
    assert entries[0].inputs["count"] == 5


def test_oracle_category(context, monkeypatch):
    """Test the Markov-trace oracle on short words."""
    monkeypatch.setattr(suite, "ORACLE_LENGTH", 3)
    entries = oracle_category(context)
    assert [entry.check for entry in entries] == ["B2.exhaustive", "B3.exhaustive", "B4.random"]
    assert all(entry.passed for entry in entries)


def test_verlinde_and_colorings(context):
    """Test integrality and coloring counts up to level 4."""
    entries = verlinde_category(context) + colorings_category(context)
    assert all(entry.passed for entry in entries)
    spot = [entry for entry in entries if entry.check == "spot.g2.r3"]
    assert spot[0].inputs["count"] == 4


def test_calibration_category(context):
    """Test phase and sign uniqueness on the reduced levels."""
    entries = calibration_category(context)
    assert [entry.check for entry in entries] == ["phase", "sign", "provenance"]
    assert all(entry.passed for entry in entries)
    assert entries[0].inputs["levels"] == [3, 4]


def test_chebyshev_category(context):
    """Test the operator identities on levels 3 and 4."""
    entries = chebyshev_category(context)
    assert all(entry.passed for entry in entries)


def test_correspondence_category(context, calibration_record):
    """Test the skipped and the decaying correspondence checks."""
    skipped = correspondence_category(context)
    assert [entry.check for entry in skipped] == ["skipped"]
    assert skipped[0].passed

    config = small_config()
    config.suite.correspondence_levels = [8, 16, 32]
    entries = correspondence_category(SuiteContext(config, calibration_record, 32))
    assert len(entries) == 6
    assert all(entry.passed for entry in entries)
    assert all(entry.inputs["slope_in_band"] is False for entry in entries)
    assert all("outside the nominal band" in entry.note for entry in entries)


def test_weyl_category(calibration_record):
    """Test the Weyl comparison at r = 3 and the negative control."""
    entries = weyl_category(SuiteContext(small_config(), calibration_record, 3))
    assert [entry.check for entry in entries] == ["r3.best-scalar", "r3.scalar-spread", "negative-control"]
    assert all(entry.passed for entry in entries)


def test_verlinde_category_full_range(calibration_record):
    """Test the integrality entry over the whole g <= 5, r <= 32 range."""
    entries = verlinde_category(SuiteContext(small_config(), calibration_record, 32))
    integrality = entries[0]
    assert integrality.check == "integrality"
    assert integrality.passed
    assert integrality.inputs["levels"] == [3, 32]
    assert integrality.deviation <= integrality.tolerance

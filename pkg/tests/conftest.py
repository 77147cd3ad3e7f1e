"""
Pytest configuration for cskit tests.
"""

from fractions import Fraction
from pathlib import Path

import pytest

from src.torus.calibration import CalibrationRecord
from src.torus.correspondence import fit_kappa

TREFOIL_PD = """\
# right-handed trefoil, closure of sigma_1^3
X 4 2 5 1
X 2 6 3 5
X 6 4 1 3
"""

MALFORMED_PD = """\
X 1 2 3 4
X 1 2 3
"""


@pytest.fixture(scope="session")
def calibration_record() -> CalibrationRecord:
    """Calibrated conventions c = 1/2, s = -1 with kappa and sigma fitted once."""
    kappa, sigma = fit_kappa()
    return CalibrationRecord(
        c=Fraction(1, 2),
        s=-1,
        sigma=sigma,
        kappa=kappa,
        r_set=[3, 4, 5],
        max_deviation=0.0,
    )


@pytest.fixture
def calibration_path(tmp_path: Path, calibration_record: CalibrationRecord) -> Path:
    """A saved calibration record in a temporary directory."""
    path = tmp_path / "calibration.json"
    calibration_record.save(path)
    return path


@pytest.fixture
def isolated_home(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point HOME at a temporary directory and clear the calibration override."""
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.delenv("CSKIT_CALIBRATION", raising=False)
    return tmp_path


@pytest.fixture
def trefoil_pd_file(tmp_path: Path) -> Path:
    """PD file of the right-handed trefoil."""
    path = tmp_path / "trefoil.pd"
    path.write_text(TREFOIL_PD)
    return path


@pytest.fixture
def malformed_pd_file(tmp_path: Path) -> Path:
    """PD file whose second crossing line has three labels."""
    path = tmp_path / "broken.pd"
    path.write_text(MALFORMED_PD)
    return path

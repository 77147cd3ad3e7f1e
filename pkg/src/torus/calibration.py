"""
Convention calibration for the torus quantisation.

Determines and persists:

    c      phase coefficient in C(m,n)C(p,q) = e^(i pi c k / r) C(m+p,n+q) + ...
    s      commutation sign in V U = e^(s 2 pi i hbar) U V
    sigma  orientation sign of the Goldman bracket
    kappa  symplectic normalisation between Goldman and the commutator
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

from src.torus.correspondence import KAPPA_BASE_LEVEL, fit_kappa
from src.torus.nctorus import phi_product_check
from src.torus.operators import involved_vanish, product_to_sum_check
from src.utils.errors import CalibrationError

logger = logging.getLogger(__name__)

RECORD_VERSION = 1
PHASE_CANDIDATES = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2))
SIGN_CANDIDATES = (1, -1)
CONSISTENCY_TOLERANCE = 1e-10


@dataclass
class CalibrationRecord:
    """Persisted outcome of ``calibrate_conventions``."""

    c: Fraction
    s: int
    sigma: int
    kappa: float
    r_set: List[int]
    max_deviation: float
    deviations: Dict[str, float] = field(default_factory=dict)
    version: int = RECORD_VERSION

    def to_json(self) -> Dict[str, Any]:
        data = asdict(self)
        data["c"] = float(self.c)
        return data

    @classmethod
    def from_json(cls, data: Any) -> "CalibrationRecord":
        """
        Build a record from parsed JSON and validate it.

        Raises:
            CalibrationError: on missing fields, out-of-range values or a
                record that fails the consistency re-check.
        """
        if not isinstance(data, dict):
            raise CalibrationError("calibration record must be a JSON object")
        missing = [key for key in ("c", "s", "sigma", "kappa", "r_set", "max_deviation") if key not in data]
        if missing:
            raise CalibrationError(f"calibration record is missing {missing}")
        try:
            record = cls(
                c=Fraction(float(data["c"])),
                s=int(data["s"]),
                sigma=int(data["sigma"]),
                kappa=float(data["kappa"]),
                r_set=[int(r) for r in data["r_set"]],
                max_deviation=float(data["max_deviation"]),
                deviations={str(k): float(v) for k, v in data.get("deviations", {}).items()},
                version=int(data.get("version", RECORD_VERSION)),
            )
        except (TypeError, ValueError) as e:
            raise CalibrationError(f"malformed calibration record: {e}")
        record.validate()
        return record

    def validate(self) -> None:
        """
        Range checks plus an inexpensive consistency re-check at r = 3.

        Raises:
            CalibrationError: if any check fails.
        """
        if self.c not in PHASE_CANDIDATES:
            raise CalibrationError(f"phase coefficient {self.c} is not one of +-1, +-1/2")
        if self.s not in SIGN_CANDIDATES or self.sigma not in SIGN_CANDIDATES:
            raise CalibrationError(f"signs must be +1 or -1, got s={self.s}, sigma={self.sigma}")
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise CalibrationError(f"kappa must be positive and finite, got {self.kappa}")
        if not self.r_set or min(self.r_set) < 2:
            raise CalibrationError(f"r_set must be nonempty levels >= 2, got {self.r_set}")
        if self.version != RECORD_VERSION:
            raise CalibrationError(f"unsupported calibration record version {self.version}")
        deviation = product_to_sum_check(1, 0, 0, 1, 3, self.c)
        if deviation >= CONSISTENCY_TOLERANCE:
            raise CalibrationError(
                f"recorded c={self.c} fails the r=3 product-to-sum instance ({deviation:.3g})",
                {"c": deviation},
            )
        if not phi_product_check(1, 0, 0, 1, 3, self.c, self.s):
            raise CalibrationError(f"recorded s={self.s} fails the r=3 phi identity")

    def save(self, path: Path) -> None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w") as f:
                json.dump(self.to_json(), f, indent=2, sort_keys=True)
            logger.info("Calibration record saved to %s", path)
        except OSError as e:
            logger.error("Failed to save calibration record: %s", e)
            raise

    @classmethod
    def load(cls, path: Path) -> "CalibrationRecord":
        """
        Raises:
            CalibrationError: if the file is unreadable, not JSON or invalid.
        """
        try:
            with open(path) as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error("Failed to read calibration record %s: %s", path, e)
            raise CalibrationError(f"cannot read calibration record {path}: {e}")
        return cls.from_json(data)


def _label(c: Fraction) -> str:
    return f"c={c}"


def calibrate_phase(
    r_set: Sequence[int], bound: int = 3, tolerance: float = CONSISTENCY_TOLERANCE
) -> Tuple[Fraction, Dict[str, float]]:
    """
    Find the unique consistent phase coefficient.

    Instances whose four operators all vanish carry no information and are
    skipped.

    Returns:
        (c, deviations): the coefficient and each candidate's worst deviation.

    Raises:
        CalibrationError: if zero or several candidates are consistent.
    """
    if not r_set:
        raise CalibrationError("calibration needs at least one level")
    worst = {c: 0.0 for c in PHASE_CANDIDATES}
    span = range(-bound, bound + 1)
    for r in r_set:
        for m, n, p, q in product(span, repeat=4):
            if involved_vanish(m, n, p, q, r):
                continue
            for c in PHASE_CANDIDATES:
                deviation = product_to_sum_check(m, n, p, q, r, c)
                if deviation > worst[c]:
                    worst[c] = deviation
    deviations = {_label(c): value for c, value in worst.items()}
    consistent = [c for c, value in worst.items() if value < tolerance]
    for c, value in worst.items():
        logger.debug("phase candidate c=%s: max deviation %.3g", c, value)
    if len(consistent) != 1:
        logger.error("Phase calibration on %s found %d consistent candidates", list(r_set), len(consistent))
        raise CalibrationError(
            f"expected exactly one consistent phase coefficient, found {len(consistent)}",
            deviations,
        )
    return consistent[0], deviations


def calibrate_sign(
    r_set: Sequence[int], c: Fraction, bound: int = 3, tolerance: float = CONSISTENCY_TOLERANCE
) -> int:
    """
    Find the unique commutation sign making phi satisfy the product-to-sum identity.

    Raises:
        CalibrationError: if zero or both signs are consistent.
    """
    span = range(-bound, bound + 1)
    consistent = []
    failures: Dict[str, float] = {}
    for s in SIGN_CANDIDATES:
        failed = 0.0
        for r in r_set:
            for m, n, p, q in product(span, repeat=4):
                if not phi_product_check(m, n, p, q, r, c, s, tolerance):
                    failed = 1.0
                    break
            if failed:
                break
        failures[f"s={s:+d}"] = failed
        if not failed:
            consistent.append(s)
    if len(consistent) != 1:
        logger.error("Sign calibration found %d consistent candidates", len(consistent))
        raise CalibrationError(
            f"expected exactly one consistent commutation sign, found {len(consistent)}", failures
        )
    return consistent[0]


def calibrate_conventions(
    r_set: Sequence[int],
    matrix_bound: int = 3,
    nc_bound: int = 3,
    kappa_ladder: int = 5,
    tolerance: float = CONSISTENCY_TOLERANCE,
) -> CalibrationRecord:
    """
    Determine {c, s, sigma, kappa} from internal consistency.

    Raises:
        CalibrationError: if any convention is not uniquely determined.
    """
    c, deviations = calibrate_phase(r_set, matrix_bound, tolerance)
    s = calibrate_sign(r_set, c, nc_bound, tolerance)
    kappa, sigma = fit_kappa(r0=KAPPA_BASE_LEVEL, ladder=kappa_ladder)
    record = CalibrationRecord(
        c=c,
        s=s,
        sigma=sigma,
        kappa=kappa,
        r_set=sorted(r_set),
        max_deviation=deviations[_label(c)],
        deviations=deviations,
    )
    logger.info("Calibrated conventions: c=%s, s=%+d, sigma=%+d, kappa=%.12g", c, s, sigma, kappa)
    return record


def load_or_calibrate(
    path: Path,
    r_set: Sequence[int],
    matrix_bound: int = 3,
    nc_bound: int = 3,
    kappa_ladder: int = 5,
    persist: bool = True,
) -> CalibrationRecord:
    """
    Load the record at ``path``, calibrating and saving it when absent.

    Raises:
        CalibrationError: if the file exists but is corrupt or inconsistent.
    """
    if path.exists():
        return CalibrationRecord.load(path)
    logger.warning("No calibration record at %s; calibrating now", path)
    record = calibrate_conventions(r_set, matrix_bound, nc_bound, kappa_ladder)
    if persist:
        record.save(path)
    return record


def provenance_notes(record: CalibrationRecord) -> List[str]:
    """Where the calibrated conventions differ from the printed formulas."""
    notes = []
    if record.c != 1:
        notes.append(f"product-to-sum phase uses e^(i pi c k / r) with c={record.c}, printed c=1")
    if record.s != 1:
        notes.append(f"commutation relation is V U = e^({record.s:+d} 2 pi i hbar) U V, printed sign +1")
    notes.append(f"Goldman orientation sign sigma={record.sigma:+d}, kappa={record.kappa:.12g}")
    return notes


@dataclass(frozen=True)
class ConsistencySurvey:
    """Recorded conventions re-checked on every instance of one level."""

    r: int
    instances: int
    phi_failures: List[Tuple[int, int, int, int]]
    max_matrix_deviation: float

    @property
    def passed(self) -> bool:
        return not self.phi_failures and self.max_matrix_deviation < CONSISTENCY_TOLERANCE


def consistency_survey(record: CalibrationRecord, r: int, bound: int = 3) -> ConsistencySurvey:
    """
    Check the matrix product-to-sum identity and the phi homomorphism for all
    |m|, |n|, |p|, |q| <= bound at level r, using the recorded c and s.
    """
    span = range(-bound, bound + 1)
    failures = []
    worst = 0.0
    instances = 0
    for m, n, p, q in product(span, repeat=4):
        instances += 1
        worst = max(worst, product_to_sum_check(m, n, p, q, r, record.c))
        if not phi_product_check(m, n, p, q, r, record.c, record.s):
            failures.append((m, n, p, q))
    if failures:
        logger.error("phi identity fails on %d of %d instances at r=%d", len(failures), instances, r)
    logger.debug("survey r=%d: %d instances, matrix deviation %.3g", r, instances, worst)
    return ConsistencySurvey(r, instances, failures, worst)

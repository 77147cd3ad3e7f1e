"""
Machine-readable verification report.

The report is a versioned JSON document::

    {
      "schema_version": "1.0",
      "generated_by": "cskit",
      "host": {...},
      "calibration": {...},
      "level_max": 64,
      "entries": [ReportEntry, ...],
      "summary": {category: {"passed": n, "failed": m}}
    }

and is validated before it is written.
"""

import json
import logging
import math
import platform
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import psutil

from src import __version__
from src.utils.formatting import jsonable

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
GENERATOR = "cskit"

ENTRY_KEYS = ("category", "check", "inputs", "passed", "deviation", "tolerance", "note")
REPORT_KEYS = ("schema_version", "generated_by", "host", "calibration", "level_max", "entries", "summary")


class ReportSchemaError(ValueError):
    """The assembled report does not match the schema."""


@dataclass
class ReportEntry:
    """
    Outcome of one check.

    Attributes:
        category: Suite category the check belongs to.
        check: Short identifier, unique within the category.
        inputs: Parameters the check ran with.
        passed: Whether the check holds.
        deviation: Measured deviation, when the check is numeric.
        tolerance: Bound the deviation was compared against.
        note: Provenance of the formula or convention that was checked.
    """

    category: str
    check: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    passed: bool = True
    deviation: Optional[float] = None
    tolerance: Optional[float] = None
    note: str = ""

    def to_json(self) -> Dict[str, Any]:
        deviation = self.deviation
        if deviation is not None and not math.isfinite(deviation):
            deviation = None
        return {
            "category": self.category,
            "check": self.check,
            "inputs": jsonable(self.inputs),
            "passed": bool(self.passed),
            "deviation": jsonable(deviation),
            "tolerance": jsonable(self.tolerance),
            "note": self.note,
        }


def host_stamp() -> Dict[str, Any]:
    """Machine description recorded alongside the results."""
    try:
        memory = psutil.virtual_memory()
        return {
            "python": platform.python_version(),
            "platform": platform.platform(),
            "cpu_count": psutil.cpu_count(logical=True),
            "physical_cores": psutil.cpu_count(logical=False),
            "memory_total": memory.total,
            "memory_available": memory.available,
        }
    except Exception as e:
        logger.error("Failed to collect host information: %s", e)
        return {"python": platform.python_version(), "platform": platform.platform()}


@dataclass
class Report:
    """Ordered collection of entries plus run metadata."""

    entries: List[ReportEntry] = field(default_factory=list)
    calibration: Dict[str, Any] = field(default_factory=dict)
    level_max: int = 64
    host: Dict[str, Any] = field(default_factory=host_stamp)

    def add(self, entry: ReportEntry) -> None:
        self.entries.append(entry)

    def extend(self, entries: List[ReportEntry]) -> None:
        self.entries.extend(entries)

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries)

    def summary(self) -> Dict[str, Dict[str, int]]:
        """Pass/fail counts per category, in first-seen order."""
        counts: Dict[str, Dict[str, int]] = {}
        for entry in self.entries:
            bucket = counts.setdefault(entry.category, {"passed": 0, "failed": 0})
            bucket["passed" if entry.passed else "failed"] += 1
        return counts

    def failures(self) -> List[ReportEntry]:
        return [entry for entry in self.entries if not entry.passed]

    def to_json(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "generated_by": GENERATOR,
            "generator_version": __version__,
            "host": jsonable(self.host),
            "calibration": jsonable(self.calibration),
            "level_max": self.level_max,
            "entries": [entry.to_json() for entry in self.entries],
            "summary": self.summary(),
        }

    def validate(self) -> None:
        """
        Check the serialised report against the schema.

        Raises:
            ReportSchemaError: on a missing key, a wrong type or a duplicate check.
        """
        document = self.to_json()
        missing = [key for key in REPORT_KEYS if key not in document]
        if missing:
            raise ReportSchemaError(f"report is missing {missing}")
        if document["schema_version"] != SCHEMA_VERSION:
            raise ReportSchemaError(f"unexpected schema version {document['schema_version']}")
        if not document["entries"]:
            raise ReportSchemaError("report has no entries")
        seen = set()
        for index, entry in enumerate(document["entries"]):
            absent = [key for key in ENTRY_KEYS if key not in entry]
            if absent:
                raise ReportSchemaError(f"entry {index} is missing {absent}")
            if not isinstance(entry["passed"], bool):
                raise ReportSchemaError(f"entry {index}: 'passed' must be a boolean")
            if not isinstance(entry["inputs"], dict):
                raise ReportSchemaError(f"entry {index}: 'inputs' must be an object")
            for key in ("deviation", "tolerance"):
                value = entry[key]
                if value is not None and not isinstance(value, (int, float)):
                    raise ReportSchemaError(f"entry {index}: {key!r} must be a number or null")
            identity = (entry["category"], entry["check"])
            if identity in seen:
                raise ReportSchemaError(f"duplicate check {identity[0]}/{identity[1]}")
            seen.add(identity)

    def write(self, path: Path) -> None:
        """
        Validate and write the report.

        Raises:
            ReportSchemaError: if validation fails; nothing is written then.
            OSError: if the file cannot be written.
        """
        try:
            self.validate()
        except ReportSchemaError as e:
            logger.error("Report failed schema validation: %s", e)
            raise
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w") as f:
                json.dump(self.to_json(), f, indent=2, sort_keys=True)
            logger.info("Report with %d entries written to %s", len(self.entries), path)
        except OSError as e:
            logger.error("Failed to write report: %s", e)
            raise

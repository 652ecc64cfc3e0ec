"""Structured verification results."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


@dataclass
class ProtocolReport:
    """Outcome of one named check.

    ``witness`` holds the offending indices and values when the check fails
    and is None otherwise.  ``details`` carries per-sub-check results and
    ``metadata`` the run parameters (dimension, tolerance, seed, ...).
    """

    check: str
    passed: bool
    max_deviation: float = 0.0
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.max_deviation = float(self.max_deviation)
        if self.passed and self.witness is not None:
            raise ValueError("a passing report cannot carry a witness")

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        s = f"{self.check}: {'PASS' if self.passed else 'FAIL'} (max deviation {self.max_deviation:.3e})"
        if self.witness:
            s += f" witness={_plain(self.witness)}"
        return s

    def to_dict(self) -> dict[str, Any]:
        out = {
            "schema": SCHEMA_VERSION,
            "check": self.check,
            "pass": self.passed,
            "max_deviation": self.max_deviation,
            "witness": self.witness,
        }
        for key in ("d", "seed", "trials", "success_count", "analytic_success"):
            out[key] = self.metadata.get(key)
        out["details"] = self.details
        out["metadata"] = {k: v for k, v in self.metadata.items() if k not in out}
        return _plain(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, doc: dict) -> ProtocolReport:
        meta = dict(doc.get("metadata") or {})
        for key in ("d", "seed", "trials", "success_count", "analytic_success"):
            if doc.get(key) is not None:
                meta[key] = doc[key]
        return cls(
            check=doc["check"],
            passed=doc["pass"],
            max_deviation=doc.get("max_deviation", 0.0),
            witness=doc.get("witness"),
            details=doc.get("details") or {},
            metadata=meta,
        )

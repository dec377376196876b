"""Verification reports shared by the checking pipelines.

Verdicts: PASS for symbolic identities, EVIDENCE for checks certified
exactly at finitely many sample points (evidence, not proof), FAIL for a
detected violation.  FAIL reports always carry an explicit witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List

PASS = "PASS"
EVIDENCE = "EVIDENCE"
FAIL = "FAIL"


@dataclass
class VerificationReport:
    name: str
    verdict: str
    details: Dict[str, Any] = field(default_factory=dict)
    witnesses: List[Any] = field(default_factory=list)
    timing_ms: float = 0.0

    def __post_init__(self):
        if self.verdict not in (PASS, EVIDENCE, FAIL):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == FAIL and not self.witnesses:
            raise ValueError("FAIL reports must carry a witness")

    @property
    def ok(self) -> bool:
        return self.verdict in (PASS, EVIDENCE)

    def to_json_dict(self) -> Dict[str, Any]:
        # timing is excluded on purpose: --json output is byte-reproducible
        return {
            "check": self.name,
            "verdict": self.verdict,
            "details": self.details,
            "witnesses": self.witnesses,
        }

    def human_lines(self) -> List[str]:
        mode = " (sampled evidence)" if self.verdict == EVIDENCE else (
            " (symbolic)" if self.verdict == PASS else ""
        )
        lines = [f"{self.name}: {self.verdict}{mode}  [{self.timing_ms:.1f} ms]"]
        for key, value in self.details.items():
            lines.append(f"  {key}: {value}")
        for w in self.witnesses:
            lines.append(f"  witness: {w}")
        return lines

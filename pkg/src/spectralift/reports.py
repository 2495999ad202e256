"""Probe reports and identification traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class ProbeReport:
    """Outcome of one numerical probe.

    `worst_case` records the offending input, the measured quantity and the
    threshold it was compared against, so a failing report is reproducible
    on its own.
    """

    name: str
    passed: bool
    worst_case: dict[str, Any] = field(default_factory=dict)
    trials: int = 0
    seed: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "pass": self.passed,
            "worst_case": self.worst_case,
            "trials": self.trials,
            "seed": self.seed,
            "details": self.details,
        }


@dataclass(frozen=True)
class SpectrumPattern:
    """Sign/multiplicity pattern of a grouped spectrum, e.g. ((1,1),(0,2))
    for one positive eigenvalue and a zero block of size two."""

    blocks: tuple[tuple[int, int], ...]  # (sign in {-1,0,1}, block size)

    @classmethod
    def from_values(cls, values, tol: float) -> "SpectrumPattern":
        vals = sorted((float(v) for v in values), reverse=True)
        blocks: list[tuple[int, int]] = []
        i = 0
        while i < len(vals):
            j = i + 1
            while j < len(vals) and abs(vals[j] - vals[j - 1]) <= tol:
                j += 1
            block_mean = sum(vals[i:j]) / (j - i)
            sign = 0 if abs(block_mean) <= tol else (1 if block_mean > 0 else -1)
            blocks.append((sign, j - i))
            i = j
        merged: list[tuple[int, int]] = []
        for sign, size in blocks:  # adjacent blocks that both snap to 0 merge
            if merged and sign == 0 and merged[-1][0] == 0:
                merged[-1] = (0, merged[-1][1] + size)
            else:
                merged.append((sign, size))
        return cls(tuple(merged))

    def to_json(self) -> list[list[int]]:
        return [[sign, size] for sign, size in self.blocks]


@dataclass
class IdentificationTrace:
    """Record of a proximal run: per-iterate spectrum, pattern and value."""

    iterates: list[dict[str, Any]]
    identified_at: int | None

    @property
    def limit_pattern(self) -> SpectrumPattern | None:
        return self.iterates[-1]["pattern"] if self.iterates else None

    def to_json(self) -> dict[str, Any]:
        return {
            "iterates": [
                {
                    "step": rec["step"],
                    "lambda": [float(v) for v in rec["lambda"]],
                    "pattern": rec["pattern"].to_json(),
                    "value": float(rec["value"]),
                }
                for rec in self.iterates
            ],
            "identified_at": self.identified_at,
        }

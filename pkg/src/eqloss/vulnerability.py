"""Intensity to Mean Damage Ratio via country-specific curves.

Curves tabulate MDR at integer MMI; fractional MMI is resolved by linear
interpolation between the adjacent integer entries. Every city uses its
country's curve. The shipped curve file is an editable placeholder (see
data/mdr_curves.csv); the engine makes no claim about its calibration.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import CurveValidationError, ValidationError


@dataclass(frozen=True)
class MdrCurve:
    """Non-decreasing damage-ratio table over a contiguous integer MMI range."""

    country: str
    entries: Mapping[int, float]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValidationError(f"curve for {self.country} is empty")
        keys = sorted(self.entries)
        if keys != list(range(keys[0], keys[-1] + 1)):
            raise CurveValidationError(self.country, keys[0], "MMI entries must form a contiguous range")
        for mmi in keys:
            mdr = self.entries[mmi]
            if not 1 <= mmi <= 12:
                raise CurveValidationError(self.country, mmi, "MMI outside [1, 12]")
            if not 0.0 <= mdr <= 1.0:
                raise CurveValidationError(self.country, mmi, f"MDR outside [0, 1]: {mdr}")
        prev = None
        for mmi in keys:
            if prev is not None and self.entries[mmi] < prev:
                raise CurveValidationError(self.country, mmi, "MDR must be non-decreasing in MMI")
            prev = self.entries[mmi]

    @property
    def lowest(self) -> int:
        return min(self.entries)

    @property
    def highest(self) -> int:
        return max(self.entries)


def mmi_to_mdr(mmi: float, curve: MdrCurve) -> float:
    """Damage ratio for an intensity, interpolating between table entries.

    Below the lowest tabulated MMI the ratio is 0 (no observed damage range);
    above the highest it clamps to the last entry.
    """
    if not 1.0 <= mmi <= 12.0:
        raise ValidationError(f"MMI out of [1, 12]: {mmi}")
    lo, hi = curve.lowest, curve.highest
    if mmi < lo:
        return 0.0
    if mmi >= hi:
        return curve.entries[hi]
    f = math.floor(mmi)
    c = f + 1
    base = curve.entries[f]
    return base + (mmi - f) * (curve.entries[c] - base)


def load_mdr_curves(path: str | Path) -> dict[str, MdrCurve]:
    """Read curves from a CSV with header ``country,mmi,mdr``."""
    rows: dict[str, dict[int, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"country", "mmi", "mdr"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValidationError(f"{path}: expected header country,mmi,mdr")
        for row in reader:
            country = row["country"].strip()
            try:
                mmi = int(row["mmi"])
                mdr = float(row["mdr"])
            except ValueError as exc:
                raise ValidationError(f"{path}: bad row {row}: {exc}") from None
            entries = rows.setdefault(country, {})
            if mmi in entries:
                raise CurveValidationError(country, mmi, "duplicate MMI entry")
            entries[mmi] = mdr
    return {country: MdrCurve(country, entries) for country, entries in sorted(rows.items())}

"""Exception types shared across the estimation pipeline.

Every error raised on a documented contract boundary derives from
:class:`EqlossError` so callers (CLI, HTTP service, watcher) can convert
them into structured diagnostics without string matching.
"""

from __future__ import annotations


class EqlossError(Exception):
    """Base class for all domain errors."""

    code = "error"


class ParseError(EqlossError):
    """Malformed input document; carries line/column when known."""

    code = "parse_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(EqlossError):
    """Structurally valid document missing or violating a mandatory field."""

    code = "schema_error"

    def __init__(self, field: str, message: str | None = None):
        super().__init__(message or f"missing or invalid mandatory field: {field}")
        self.field = field


class IntegrityError(EqlossError):
    """Input data contradicts its own declared structure."""

    code = "integrity_error"


class EmptyGridError(EqlossError):
    code = "empty_grid"


class ValidationError(EqlossError):
    """Row-level invariant violation in ingested tabular data."""

    code = "validation_error"


class ReferentialError(EqlossError):
    """Reference to a geographic unit or event that does not exist."""

    code = "referential_error"


class DegenerateGroupError(EqlossError):
    """Aggregation group with zero total population."""

    code = "degenerate_group"

    def __init__(self, region_id: str):
        super().__init__(f"group '{region_id}' has zero total population")
        self.region_id = region_id


class DegenerateRegionError(EqlossError):
    """Exposure disaggregation target with zero total population."""

    code = "degenerate_region"


class MissingCurveError(EqlossError):
    """No damage curve configured for a country; estimation must fail."""

    code = "missing_curve"

    def __init__(self, country: str):
        super().__init__(f"no MDR curve loaded for country '{country}'")
        self.country = country


class CurveValidationError(EqlossError):
    code = "curve_validation"

    def __init__(self, country: str, mmi: int, message: str):
        super().__init__(f"curve '{country}' at MMI {mmi}: {message}")
        self.country = country
        self.mmi = mmi


class MissingDataError(EqlossError):
    """Economic series lacks a required year."""

    code = "missing_data"


class ConsistencyError(EqlossError):
    """Multiplier set whose wealth x population disagrees with ICW."""

    code = "inconsistent_multipliers"


class UndefinedValueError(EqlossError):
    """Operation undefined for the given input (e.g. percent error vs zero)."""

    code = "undefined_value"


class OutOfRangeError(EqlossError):
    """Value falls outside the configured threshold ladder."""

    code = "out_of_range"


class NotFoundError(EqlossError):
    """Unknown event, alert version, or geographic unit."""

    code = "not_found"


class DuplicateAlertError(EqlossError):
    """Alert version already ingested for this event."""

    code = "duplicate_alert"

    def __init__(self, event_id: str, version: int):
        super().__init__(f"alert version {version} already ingested for event '{event_id}'")
        self.event_id = event_id
        self.version = version

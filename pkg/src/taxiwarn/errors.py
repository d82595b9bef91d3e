"""Exception hierarchy shared across the package."""


class TaxiwarnError(Exception):
    """Base class for all package-specific errors."""


class MapValidationError(TaxiwarnError):
    """An airport map failed one or more structural invariants."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class CommandValidationError(TaxiwarnError):
    """A taxi command violates routing rules."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InsufficientDataError(TaxiwarnError):
    """Too few samples to produce a statistically meaningful result."""


class DegenerateDataError(TaxiwarnError):
    """Samples have zero spread; interval construction is meaningless."""


class UndefinedCorrelationError(TaxiwarnError):
    """Correlation requested for a constant series."""


class InvalidCalibrationError(TaxiwarnError):
    """A speed interval cannot be used for deduction (non-positive bound)."""


class UncalibratedSegmentError(TaxiwarnError):
    """A route references a taxiway with no usable calibration entry."""

    def __init__(self, taxiway_id: str):
        self.taxiway_id = taxiway_id
        super().__init__(f"taxiway {taxiway_id!r} has no usable calibration entry")

"""Exception types shared across the package."""


class SingularMatrixError(ValueError):
    """Matrix is singular to working precision (sigma_min < 1e-12 * sigma_max)."""


class PlanValidationError(ValueError):
    """A construction plan failed validation; carries the offending report."""

    def __init__(self, report):
        self.report = report
        super().__init__("invalid plan:\n" + "\n".join(report.violations))


class InsufficientCardinalityError(RuntimeError):
    """A spectral window does not hold enough unused values for the selection."""

    def __init__(self, level, exponent, window, needed, available):
        self.level = level
        self.exponent = exponent
        self.window = window
        self.needed = needed
        self.available = available
        super().__init__(
            f"level {level}: window [{window[0]:.6g}, {window[1]:.6g}] "
            f"(exponent {exponent}) holds {available} unused values, "
            f"{needed} required"
        )

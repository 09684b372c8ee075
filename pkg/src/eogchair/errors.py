class ValidationError(ValueError):
    """Input or configuration violates a documented contract (CLI exit code 1)."""


class InfeasibleDesign(ValidationError):
    """No positive component set realizes the requested filter."""

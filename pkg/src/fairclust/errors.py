"""Exception types raised across the package."""


class FairClustError(ValueError):
    """Base class for invalid inputs and unsatisfiable requests."""


class InputError(FairClustError):
    """Malformed or out-of-range input (bad index, bad parameter, bad file)."""


class InfeasibleError(FairClustError):
    """No center set satisfies the requested constraint."""


class OracleCapExceeded(FairClustError):
    """Exhaustive enumeration would exceed the configured candidate cap."""

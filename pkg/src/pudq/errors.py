"""Exception hierarchy shared by all modules."""


class PUDQError(Exception):
    """Base class for every error raised by this package."""


class SignatureMismatchError(PUDQError, ValueError):
    """A polynomial mentions a variable the pair signature does not know."""


class SingularParametersError(PUDQError, ValueError):
    """Parameters hit a singular point of a constructor (e.g. equal frequencies)."""

    def __init__(self, message: str, *, quantity: str | None = None):
        super().__init__(message)
        self.quantity = quantity


class NonNormalizableError(PUDQError, ValueError):
    """A wavefunction norm integral diverges."""

    def __init__(self, message: str, *, growth: list[float] | None = None):
        super().__init__(message)
        self.growth = growth or []


class UnderResolvedError(PUDQError, RuntimeError):
    """A quadrature failed its self-consistency gate."""

    def __init__(self, message: str, *, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate


class DivergentIntegralError(PUDQError, ValueError):
    """Integral parameters lie outside the convergence domain."""


class NodeAtOriginError(PUDQError, ValueError):
    """Wavefunction reconstruction needs a reference point where psi does not vanish."""


class ExactnessError(PUDQError, ArithmeticError):
    """An exact identity that must hold structurally failed (internal bug signal)."""


class ConfigError(PUDQError, ValueError):
    """Invalid run configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message

"""Exception hierarchy shared by all logpot modules."""


class LogPotError(Exception):
    """Base class for every error raised by logpot."""


class ParameterError(LogPotError, ValueError):
    """Invalid parameter combination (spectral parameters, Jacobi indices, ...)."""


class PoleError(LogPotError, ArithmeticError):
    """A Gamma function or Pochhammer denominator hit a pole."""


class DivergenceError(LogPotError, ArithmeticError):
    """A series is outside its convergence regime or failed to converge."""


class DomainError(LogPotError, ValueError):
    """Evaluation point outside the open unit disk."""


class StepError(LogPotError, ValueError):
    """Finite-difference step outside the stable range."""


class SizeError(LogPotError, ValueError):
    """Invalid quadrature size."""


class SingularityError(LogPotError, ArithmeticError):
    """Evaluation point collides with a quadrature node ring."""


class RangeError(LogPotError, ValueError):
    """Not enough data for a requested fit range."""

"""Exception hierarchy shared by the numerical and geometric modules."""


class HermcurvError(Exception):
    """Base class for all errors raised by this package."""


class BracketError(HermcurvError, ValueError):
    """The supplied interval does not bracket a sign change."""


class EvaluationError(HermcurvError, ArithmeticError):
    """A function returned a non-finite value."""


class DegeneracyError(HermcurvError, ArithmeticError):
    """A linear system or closed form is singular or too ill-conditioned."""


class AccuracyError(HermcurvError, ArithmeticError):
    """A numerical procedure did not reach the requested tolerance."""


class MonotonicityError(HermcurvError, ValueError):
    """Samples that must be strictly monotone are not."""


class GridError(HermcurvError, ValueError):
    """A grid is malformed or too small for the requested stencil."""


class DomainError(HermcurvError, ValueError):
    """An argument lies outside the domain of a formula."""


class SolverError(HermcurvError, RuntimeError):
    """A construction failed to produce a solution."""


class UnsupportedDegreeError(SolverError):
    """The requested Hirzebruch degree has no known construction."""


class NoSolutionError(SolverError):
    """A root scan found no admissible solution."""


class InvalidSolutionError(SolverError):
    """A candidate solution violates a positivity or boundary requirement."""


class MetricFileError(HermcurvError, ValueError):
    """A metric file is malformed or inconsistent."""

"""Exception types shared across the package.

The CLI maps these onto exit codes: invalid representations and bad configs
exit 2, mathematically undefined phases exit 3, numerical non-convergence
exits 4.
"""


class InvalidRepresentationError(ValueError):
    """A representation violates a constraint required by the requested operation."""


class ConfigError(ValueError):
    """A run configuration could not be parsed or is internally inconsistent."""


class UndefinedPhaseError(ValueError):
    """The requested Berry phase does not exist for the given inputs."""


class NotCyclicError(UndefinedPhaseError):
    """The evolution time does not return the state to itself up to a phase."""


class ResonanceError(UndefinedPhaseError):
    """The driving force contains a mode resonant with the oscillator."""


class IncommensurateError(UndefinedPhaseError):
    """No rational p/N approximates the period ratio within tolerance."""


class ConditioningError(UndefinedPhaseError):
    """A mode denominator is too close to resonance for a trustworthy result."""


class ConvergenceError(RuntimeError):
    """An iterative numerical routine hit its refinement cap before converging."""

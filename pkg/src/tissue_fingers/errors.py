"""Exception hierarchy shared by the analysis modules and the CLI."""


class FingerError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(FingerError):
    """Malformed or incomplete parameter file."""


class SignError(FingerError, ValueError):
    """A physical constant violates its sign convention."""


class DomainError(FingerError, ValueError):
    """Argument outside the half-plane y <= 0 or similar domain."""


class ResonanceError(FingerError, ArithmeticError):
    """A closed-form denominator vanishes (or nearly so) for these parameters.

    ``names`` lists the offending denominators in the order they were found.
    """

    def __init__(self, names, detail=""):
        if isinstance(names, str):
            names = [names]
        self.names = list(names)
        msg = "resonant denominator(s): " + ", ".join(self.names)
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NoRootError(FingerError):
    """Lambda(q) has no + to - sign change on the scanned interval."""


class NotARootError(FingerError):
    """A supplied wavenumber does not satisfy Lambda(q) = 0."""


class StepError(FingerError, ValueError):
    """Finite-difference stencil would leave the admissible domain."""


class HypothesisViolation(FingerError):
    """Non-resonance or transversality hypothesis of the bifurcation theorem fails."""


class TransversalityError(HypothesisViolation):
    """The slope of Lambda at the critical wavenumber is (numerically) zero."""


class SolveError(FingerError):
    """A discretized boundary-value problem could not be solved reliably."""


class UnknownEquationError(FingerError, KeyError):
    """Residual requested for an equation id that is not registered."""

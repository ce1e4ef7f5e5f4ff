"""Exception hierarchy shared across the package."""


class EquilogError(Exception):
    """Base class for all package-specific errors."""


class PrecisionExhausted(EquilogError):
    """A certified result could not be obtained below the precision cap."""


class BudgetExhausted(EquilogError):
    """An enumeration or recombination exceeded its node budget."""


class CertificationFailed(EquilogError):
    """Ball widths were too large to certify a required inequality."""


class BallDomainError(EquilogError):
    """A ball operation left its domain (log of a ball touching zero,
    division by a ball containing zero); callers usually escalate precision."""


class GridDegenerate(EquilogError):
    """A quadrature sample point coincides with a root."""


class RamifiedError(EquilogError):
    """The minimal polynomial is not squarefree modulo p (unsupported)."""


class PadicContextUnavailable(EquilogError):
    """No p-adic evaluation context exists for the requested embedding."""


class NonIntegralElement(EquilogError):
    """An element with negative valuation where a p-adic integer is required."""


class ConjugateInputs(EquilogError):
    """The two algebraic numbers share a minimal polynomial."""


class VanishingInput(EquilogError):
    """An exact test shows the evaluated value is zero."""


class FactorizationInconclusive(EquilogError):
    """Integer factor recombination could not finish within its budget."""


class SearchRangeExhausted(EquilogError):
    """No viable exponent found below the configured ceiling."""


class DegenerateExponent(EquilogError):
    """The requested exponent fails a largeness condition of the construction."""


class AssemblyInvariantViolated(EquilogError):
    """A divisibility postcondition of the polynomial assembly failed."""


class NoSquarefreePrime(EquilogError):
    """The bounded search for an auxiliary factoring prime failed."""


class PreconditionError(EquilogError):
    """An operation was invoked outside its stated domain."""

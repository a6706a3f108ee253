"""Exception types raised across the package."""


class FracdriftError(Exception):
    """Base class for all package-specific errors."""


class NegativeSpectrum(FracdriftError):
    """Circulant embedding produced eigenvalues below the clamping tolerance."""


class NonDividingFactor(FracdriftError):
    """Subsampling factor does not divide the path's grid size."""


class QuadratureNonConvergence(FracdriftError):
    """Adaptive quadrature failed to reach its relative-error target."""


class PositiveRegularity(FracdriftError):
    """Effective Besov regularity is positive; outside this library's scope."""


class StepTooLarge(FracdriftError):
    """Time step must lie in (0, 1/2) for the step-to-mollification coupling."""


class GridMismatch(FracdriftError):
    """Path grid does not refine the scheme grid, or dimensions disagree."""


class NonFiniteState(FracdriftError):
    """Scheme state became non-finite or exceeded the explosion guard."""


class UncoupledRuns(FracdriftError):
    """Strong-error inputs are not driven by pairwise-identical noise."""


class MomentOverflow(FracdriftError):
    """m-th powers of path errors are non-finite."""


class DegenerateDesign(FracdriftError):
    """Rate regression needs at least 3 distinct step sizes."""


class ParseError(FracdriftError):
    """Experiment config document is not well formed."""


class ValidationError(FracdriftError):
    """Experiment config violates an invariant."""


class IoFailure(FracdriftError):
    """Writing result files failed."""

"""Exception types shared across the package."""


class BlochBraidsError(Exception):
    """Base class for all package-specific errors."""


class ZeroModulus(BlochBraidsError):
    """z = 0 requested for a model with negative Fourier exponents."""


class DegeneracyEncountered(BlochBraidsError):
    """A sampled spectrum has two eigenvalues closer than the degeneracy
    tolerance; the parameters sit on (or numerically on) an exceptional
    point and band identity is undefined."""


class RefinementExhausted(BlochBraidsError):
    """Grid refinement hit its cap without reaching a stable matching."""


class DegenerateCrossing(BlochBraidsError):
    """Two strands cross with both real and imaginary parts equal: an
    exceptional point, where no braid letter is defined."""


class UnresolvedCrossing(BlochBraidsError):
    """Two crossings could not be separated within one refined step."""


class StrandMismatch(BlochBraidsError):
    """Braid words on different strand counts cannot be concatenated."""


class UnsupportedDegree(BlochBraidsError):
    """Discriminant requested for a polynomial degree outside {2, 3}."""


class DegenerateModel(BlochBraidsError):
    """A model parameter combination (e.g. alpha*beta = 0) for which the
    requested closed form is undefined."""


class ReferenceOnBand(BlochBraidsError):
    """The winding-number reference energy lies on (or numerically on) a
    band, so det(H(k) - E_ref) vanishes somewhere on the grid."""


class NonConvergent(BlochBraidsError):
    """An adaptive numerical loop failed to converge within its cap."""

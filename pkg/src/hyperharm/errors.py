"""Exception taxonomy shared by all modules.

Every library-raised error derives from HyperharmError so callers can fence
the whole package with one except clause; the CLI maps ConfigError to exit
code 2 and everything else to exit code 1.
"""


class HyperharmError(Exception):
    pass


class ConfigError(HyperharmError):
    """Bad user-supplied configuration (CLI flags, malformed JSON)."""


class PoleAtPoint(HyperharmError):
    """Evaluation at a pole of a Moebius map or of the Cayley inverse."""


class IdentityMap(HyperharmError):
    """Operation undefined for the identity (e.g. fixed points)."""


class ConstraintViolation(HyperharmError):
    """Algebraic constraint on inputs violated (SU(1,1) relations etc.)."""


class TooCloseToBoundary(HyperharmError):
    """Finite-difference or quadrature point too close to the domain edge."""


class DomainViolation(HyperharmError):
    """Point or segment leaves the declared domain of a field."""


class QuadratureFailure(HyperharmError):
    """Adaptive refinement exhausted its subdivision budget."""


class BoundsMissing(HyperharmError):
    """Operation needs a BoundsReport (D, K1, K2) that was not supplied."""


class NotTangential(HyperharmError):
    """Circle field fails the tangentiality test beyond tolerance."""


class ConstructionFailed(HyperharmError):
    """A searched construction (group arrangement) found no witness."""


class CommutingInputs(HyperharmError):
    """Rank computation requires non-commuting hyperbolic inputs."""


class TruncationTooLarge(HyperharmError):
    """Word-length truncation would enumerate more than the word cap."""


class InvarianceDefectTooLarge(HyperharmError):
    """Input quadratic differential is not close enough to invariant."""


class CoverageGap(HyperharmError):
    """Partition-of-unity translates fail to cover the probe region."""

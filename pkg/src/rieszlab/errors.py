"""Exception hierarchy shared across the library."""


class RieszLabError(Exception):
    """Base class for all library errors."""


class SeparationViolation(RieszLabError):
    """Node sequence has coincident points or nonpositive separation."""


class WeightViolation(RieszLabError):
    """A Clark weight is nonpositive."""


class DivergenceDetected(RieszLabError):
    """Partial sums of nu_k/(1+lambda_k^2) fail the bounded-increment test."""


class PoleHit(RieszLabError):
    """Evaluation requested exactly at a pole."""


class EvaluationRegionError(RieszLabError):
    """Point lies below the certified analytic-continuation strip."""


class IndexOutOfWindow(RieszLabError):
    """Node label outside the truncation window."""


class UnwrapFailure(RieszLabError):
    """Consecutive phase jump >= pi; grid too coarse for the symbol."""


class InvalidStrip(RieszLabError):
    """epsilon * sup|Theta'| >= 1, strip bound vacuous."""


class GridMismatch(RieszLabError):
    """Sample array does not match the Cayley pullback grid."""


class QuadratureNonconvergence(RieszLabError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class NodeNotUnimodular(RieszLabError):
    """|Theta(lambda)| differs from 1 beyond tolerance at a kernel node."""


class NodeMismatch(RieszLabError):
    """I(lambda_n) != 1 at a node where the Clark pairing requires it."""


class NonHermitianInput(RieszLabError):
    """Matrix expected Hermitian is not, beyond tolerance."""


class WindowTooSmall(RieszLabError):
    """Requested tail start leaves no nodes in the window."""


class IllConditionedTail(RieszLabError):
    """Tail Gram is numerically singular; orthonormalization unreliable."""


class ResolutionTooLow(RieszLabError):
    """Circle trace resolution insufficient for the requested section size."""


class ConfigError(RieszLabError):
    """Scenario configuration invalid."""


class ExecutionError(RieszLabError):
    """Scenario execution failed; carries module provenance in the message."""

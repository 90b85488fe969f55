"""Error taxonomy for the hypertoric package.

Every failure mode that callers are expected to handle gets its own class;
all inherit from HypertoricError so a bare `except HypertoricError` catches
any math-level refusal (as opposed to programming errors, which stay
ValueError/TypeError).
"""


class HypertoricError(Exception):
    """Base class for all math-level errors raised by this package."""


class NotSurjective(HypertoricError):
    """The map a: Z^n -> Z^d is not surjective (some Smith invariant > 1)."""


class RankDeficient(HypertoricError):
    """The matrix a has rank < d over Q."""


class NonGenericStability(HypertoricError):
    """theta_hat pairs to zero with some circuit kernel vector (wall data)."""


class DimensionMismatch(HypertoricError):
    """Shapes of inputs are inconsistent."""


class NotSmooth(HypertoricError):
    """Operation requires a smooth (simple + unimodular) arrangement."""


class ParameterDegeneracy(HypertoricError):
    """A parameter specialization hit a denominator zero or collapsed the staircase."""


class BudgetExceeded(HypertoricError):
    """A computation exceeded its configured work budget."""


class NotZeroDimensional(HypertoricError):
    """The ideal is not zero-dimensional over the parameter field."""


class InconsistentExtraction(HypertoricError):
    """Steinberg operator extraction disagreed between independent runs."""


class PoleOrderError(HypertoricError):
    """Residue extraction found a pole that is not simple."""


class SingularEvaluation(HypertoricError):
    """Numeric evaluation hit (or came too close to) a pole/singular locus."""


class StepFailure(HypertoricError):
    """ODE transport failed to advance (step size underflow or solver failure)."""


class DegenerateModel(HypertoricError):
    """Mirror model punctures collide (or hit 0) for the given q."""


class UnsupportedDimension(HypertoricError):
    """Requested operation is only implemented for d <= 2."""


class BranchTrackingFailure(HypertoricError):
    """Continuous branch tracking could not keep increments small enough."""


class QuadratureFailure(HypertoricError):
    """Adaptive contour quadrature did not reach the requested tolerance."""


class IncompleteCriticalSet(HypertoricError):
    """Critical point search ended with fewer points than the ring rank."""


class SearchBudgetExceeded(HypertoricError):
    """Saturated-collection enumeration exceeded its search budget."""

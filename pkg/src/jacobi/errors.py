"""Exception hierarchy for the jacobi package.

Numerical failure modes are distinguished from bad input: a singular chart
difference is geometry (NotTransverse), an ill-conditioned solve that trips
the condition gate is numerics, and both are reported explicitly instead of
being propagated as LinAlgError.
"""


class JacobiError(Exception):
    """Base class for all package errors."""


class InvalidDimension(JacobiError):
    """Matrix shapes incompatible with the ambient symplectic space."""


class NotInChart(JacobiError):
    """Subspace is not transverse to the chart's point at infinity."""


class NotTransverse(JacobiError):
    """Two Lagrangian subspaces fail the transversality requirement."""


class InvalidBasis(JacobiError):
    """A frame matrix is singular or violates isotropy."""


class InvalidTransform(JacobiError):
    """Matrix does not satisfy the (conformal) symplectic condition."""


class RegularityFailure(JacobiError):
    """det S'(t) = 0 within the condition gate at some parameter value."""

    def __init__(self, t, msg=None):
        self.t = t
        super().__init__(msg or f"curve velocity singular at t={t!r}")


class DomainError(JacobiError):
    """Requested parameter values outside the curve domain."""


class TooFewSamples(JacobiError):
    """Finite-difference stencils need at least five samples."""


class SingularParameter(JacobiError):
    """Change of parameter with vanishing first derivative."""


class InflectionPoint(JacobiError):
    """S'' correction singular: the derivative curve leaves the chart."""


class ComplexEigenvalues(JacobiError):
    """Curvature spectrum not real; monotonicity or numerics broke down."""


class RepeatedEigenvalues(JacobiError):
    """Curvature eigenvalue gap below tolerance."""

    def __init__(self, gap, msg=None):
        self.gap = gap
        super().__init__(msg or f"eigenvalue gap {gap!r} below tolerance")


class MonotonicityFailure(JacobiError):
    """Velocity form indefinite: the frame theory does not apply."""


class NotAdmissible(JacobiError):
    """Arc element vanishes: det(R - (1/n) tr R * Id) = 0 at some t."""

    def __init__(self, t, msg=None):
        self.t = t
        super().__init__(msg or f"curve not admissible at t={t!r}")


class NormalizationViolation(JacobiError):
    """Product of centered curvature magnitudes deviates from 1."""

    def __init__(self, t, value, msg=None):
        self.t = t
        self.value = value
        super().__init__(msg or f"normalization invariant {value!r} at t={t!r}")


class EigenCrossing(JacobiError):
    """Ascending eigenvalue order would swap frame columns between samples."""

    def __init__(self, t, msg=None):
        self.t = t
        super().__init__(msg or f"eigenvalue crossing near t={t!r}")


class StructureViolation(JacobiError):
    """Computed Cartan matrix does not have the reduced block shape."""


class GridMismatch(JacobiError):
    """Invariant series defined on incompatible grids."""


class SymplecticityLoss(JacobiError):
    """Frame integration residual exceeded the cap even after refinement."""

    def __init__(self, residual, msg=None):
        self.residual = residual
        super().__init__(msg or f"symplecticity residual {residual!r}")


class NotGeneralPosition(JacobiError):
    """A pair of the three given points is not transverse."""

    def __init__(self, i, j, msg=None):
        self.i = i
        self.j = j
        super().__init__(msg or f"points {i} and {j} are not transverse")


class ZeroDirection(JacobiError):
    """Line direction matrix is (numerically) zero."""


class NoFit(JacobiError):
    """No Moebius factor fits the sampled flat curve within tolerance."""

    def __init__(self, residual, msg=None):
        self.residual = residual
        super().__init__(msg or f"moebius fit residual {residual!r}")

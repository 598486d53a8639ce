"""Exception types shared across the package."""


class BgrdmftError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(BgrdmftError, ValueError):
    """An argument is outside its documented range."""


class DimensionMismatchError(BgrdmftError, ValueError):
    """Operator / sector / vector shapes are inconsistent."""


class ConvergenceError(BgrdmftError, RuntimeError):
    """A numerical routine failed to reach its target tolerance."""


class DegenerateConstraintError(BgrdmftError, ValueError):
    """A raw facet normal vanishes after projection onto the tangent plane."""


class OffHyperplaneError(BgrdmftError, ValueError):
    """An occupation vector does not satisfy the particle-number sum."""


class NotSimplexError(BgrdmftError, ValueError):
    """Operation requires the simplex setting but the domain is not one."""


class InfeasibleTargetError(BgrdmftError, ValueError):
    """Target occupation vector lies outside the representable domain."""


class InfeasibleKernelError(BgrdmftError, ValueError):
    """No kernel coordinate makes every weight radicand nonnegative."""


class PathExitsDomainError(BgrdmftError, ValueError):
    """A displacement path left the representable domain."""


class EmptyFacetBasisError(BgrdmftError, RuntimeError):
    """No configuration state lies on the requested facet."""


class UnsupportedDimensionError(BgrdmftError, ValueError):
    """Requested polytope dimension exceeds the supported range."""

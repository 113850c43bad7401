"""Exception hierarchy for latticesum."""


class LatticeSumError(Exception):
    """Base class for all latticesum errors."""


class SingularPoint(LatticeSumError):
    """An evaluation point where the summand's denominator is below the floor."""


class CutViolation(LatticeSumError):
    """Dilogarithm argument on the branch cut [1, inf)."""


class DegeneratePoint(LatticeSumError):
    """Kummer angle requested at the degenerate point r = 1, theta = 0 (mod 2*pi)."""


class LowerHalfPlane(LatticeSumError):
    """Dedekind eta argument not in the upper half plane."""


class PoleAt(LatticeSumError):
    """Digamma evaluated at a nonpositive integer."""


class NotPositiveDefinite(LatticeSumError):
    """Quadratic form with nonnegative discriminant."""


class ToleranceNotMet(LatticeSumError):
    """Adaptive quadrature exhausted its evaluation budget before the tolerance."""


class InsufficientSamples(LatticeSumError):
    """Residual-order fit called with fewer than four samples."""


class DegenerateGraph(LatticeSumError):
    """Torus graph whose generators collide modulo n (multi-edges or loops)."""

"""Exception hierarchy shared across the toolkit.

Numerical failures (poles on the evaluation axis, degenerate inputs) are kept
distinct from usage errors so the CLI can map them to exit codes.
"""


class SrgError(Exception):
    """Base class for all toolkit errors."""


class IncompatibleSignalsError(SrgError):
    """Two signals do not share the same fundamental frequency and length."""


class DegenerateAngleError(SrgError):
    """Angle requested between signals where at least one has zero norm."""


class PoleOnAxisError(SrgError):
    """Transfer function evaluated at (or numerically on) an imaginary-axis pole."""

    def __init__(self, omega: float):
        self.omega = omega
        super().__init__(f"transfer function has a pole on the imaginary axis at omega={omega!r}")


class ComplexSignalError(SrgError):
    """A real-valued nonlinearity was fed a signal with non-negligible imaginary part."""


class DegeneratePairError(SrgError):
    """Input pair with u1 = u2; excluded from the graph by definition."""


class InfinitePreimageError(SrgError):
    """Inverse Beltrami-Klein map requested at w = 1, whose preimage is the point at infinity."""


class InfiniteRegionError(SrgError):
    """Operation rejected because an operand region carries the includes-infinity flag."""


class UnsupportedRegionError(SrgError):
    """Region algebra result cannot be expressed in the available variants."""

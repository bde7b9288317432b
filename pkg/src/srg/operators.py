"""Operator descriptions and their action on periodic signals.

Covers proper rational transfer functions (evaluated exactly on the harmonic
grid), memoryless nonlinearities applied samplewise, and describing
functions (the fundamental-harmonic gain of a nonlinearity driven by a
sinusoid).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ComplexSignalError, PoleOnAxisError
from .signals import PeriodicSignal, Spectrum, from_spectrum, to_spectrum

_POLE_RTOL = 1e-12
_REAL_INPUT_ATOL = 1e-12


@dataclass(frozen=True)
class RationalTF:
    """Proper rational transfer function with real coefficients.

    Coefficients are ascending in s: num[k] multiplies s**k.
    """

    num: tuple
    den: tuple

    def __post_init__(self):
        num = tuple(float(c) for c in self.num)
        den = tuple(float(c) for c in self.den)
        num = _strip_trailing_zeros(num)
        den = _strip_trailing_zeros(den)
        if not den or den[-1] == 0.0:
            raise ValueError("denominator must have a nonzero leading coefficient")
        if not num:
            num = (0.0,)
        if len(num) - 1 > len(den) - 1:
            raise ValueError("transfer function must be proper: deg(num) <= deg(den)")
        if not all(np.isfinite(c) for c in num + den):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def strictly_proper(self) -> bool:
        return len(self.num) < len(self.den)

    @property
    def limit_at_infinity(self) -> complex:
        """Value of G(jw) as w -> inf; zero for strictly proper G."""
        if self.strictly_proper:
            return 0.0 + 0.0j
        return complex(self.num[-1] / self.den[-1])

    def describe(self) -> str:
        return f"tf(num={list(self.num)}, den={list(self.den)})"


def _strip_trailing_zeros(coeffs: tuple) -> tuple:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0.0:
        end -= 1
    return coeffs[:end]


def tf_eval(tf: RationalTF, omega):
    """Evaluate G at s = j*omega (scalar or array of frequencies).

    Raises PoleOnAxisError when the denominator vanishes relative to the
    magnitude of its terms at that frequency.
    """
    w = np.asarray(omega, dtype=float)
    s = 1j * w
    den = np.asarray(tf.den, dtype=float)
    den_val = npoly.polyval(s, den)
    den_scale = npoly.polyval(np.abs(s), np.abs(den))
    bad = np.abs(den_val) <= _POLE_RTOL * np.maximum(den_scale, 1e-300)
    if np.any(bad):
        raise PoleOnAxisError(float(np.atleast_1d(w)[np.atleast_1d(bad)][0]))
    result = npoly.polyval(s, np.asarray(tf.num, dtype=float)) / den_val
    if np.ndim(omega) == 0:
        return complex(result)
    return result


def tf_eval_recip(tf: RationalTF, nu):
    """Evaluate G at s = j/nu for nu >= 0; nu = 0 gives the high-frequency limit.

    Uses reversed-coefficient polynomials in nu, so large frequencies never
    overflow: G(j/nu) = sum_k n_k (j/nu)^k / sum_k d_k (j/nu)^k scaled by nu^deg(den).
    """
    n = np.asarray(nu, dtype=float)
    deg = len(tf.den) - 1
    num_rev = np.zeros(deg + 1)
    num_rev[deg - (len(tf.num) - 1): deg + 1] = tf.num[::-1]
    den_rev = np.asarray(tf.den[::-1], dtype=float)
    s = -1j * n  # (1/s) evaluated at s = j/nu
    den_val = npoly.polyval(s, den_rev)
    den_scale = npoly.polyval(np.abs(s), np.abs(den_rev))
    bad = np.abs(den_val) <= _POLE_RTOL * np.maximum(den_scale, 1e-300)
    if np.any(bad):
        offending = np.atleast_1d(n)[np.atleast_1d(bad)][0]
        raise PoleOnAxisError(float(1.0 / offending) if offending else np.inf)
    result = npoly.polyval(s, num_rev) / den_val
    if np.ndim(nu) == 0:
        return complex(result)
    return result


def lti_apply(tf: RationalTF, u: PeriodicSignal) -> PeriodicSignal:
    """Apply the LTI operator exactly: each harmonic is scaled by G(j n omega0)."""
    spec = to_spectrum(u)
    gains = tf_eval(tf, spec.harmonics * u.omega0)
    return from_spectrum(Spectrum(spec.omega0, spec.coeffs * gains))


@dataclass(frozen=True)
class StaticNL:
    """Memoryless nonlinearity y(t) = map(u(t)) applied samplewise.

    Slope bounds are declared metadata; they are never assumed by the
    numerical checks.
    """

    kind: str
    map: Callable[[np.ndarray], np.ndarray]
    slope_min: float = -np.inf
    slope_max: float = np.inf
    name: Optional[str] = None

    def describe(self) -> str:
        return f"nl({self.name or self.kind})"


def saturation() -> StaticNL:
    """Unit saturation: clips to [-1, 1]."""
    return StaticNL("saturation", lambda u: np.clip(u, -1.0, 1.0), 0.0, 1.0)


def deadzone() -> StaticNL:
    """Unit deadzone: zero on [-1, 1], slope one outside."""
    return StaticNL("deadzone", lambda u: u - np.clip(u, -1.0, 1.0), 0.0, 1.0)


def relu() -> StaticNL:
    return StaticNL("relu", lambda u: np.maximum(u, 0.0), 0.0, 1.0)


def custom(fn: Callable[[np.ndarray], np.ndarray], slope_min: float, slope_max: float,
           name: str = "custom") -> StaticNL:
    """Wrap a pointwise map with declared slope bounds."""
    return StaticNL("custom", fn, float(slope_min), float(slope_max), name)


def static_nl(kind: str) -> StaticNL:
    factories = {"saturation": saturation, "deadzone": deadzone, "relu": relu}
    if kind not in factories:
        raise ValueError(f"unknown nonlinearity kind {kind!r}; expected one of {sorted(factories)}")
    return factories[kind]()


def static_apply(phi: StaticNL, u: PeriodicSignal) -> PeriodicSignal:
    """Apply a real nonlinearity samplewise; the input must be (numerically) real."""
    if np.max(np.abs(u.samples.imag)) > _REAL_INPUT_ATOL:
        raise ComplexSignalError(
            f"{phi.kind} expects a real signal; max |imag| = {np.max(np.abs(u.samples.imag)):.3e}"
        )
    return PeriodicSignal(u.omega0, np.asarray(phi.map(u.samples.real), dtype=float))


def df_saturation(a: float) -> float:
    """Describing function of the unit saturation at input amplitude a."""
    if a <= 0:
        raise ValueError(f"amplitude must be positive, got {a!r}")
    if a <= 1.0:
        return 1.0
    inv = 1.0 / a
    return (2.0 / np.pi) * (np.arcsin(inv) + inv * np.sqrt(1.0 - inv * inv))


def df_numeric(phi: StaticNL, a: float, n: int = 16384, omega0: float = 1.0) -> complex:
    """Fundamental-harmonic gain of phi driven by a*sin(omega0 t).

    Returns the ratio of first Fourier coefficients of output and input.
    Real for odd nonlinearities.
    """
    if a <= 0:
        raise ValueError(f"amplitude must be positive, got {a!r}")
    if n < 1024 or (n & (n - 1)):
        raise ValueError(f"sample count must be a power of two >= 1024, got {n}")
    t = np.arange(n) * (2.0 * np.pi / omega0) / n
    u = PeriodicSignal(omega0, a * np.sin(omega0 * t))
    y = static_apply(phi, u)
    y1 = to_spectrum(y).coeff(1)
    u1 = -0.5j * a  # first coefficient of a*sin, exact on the grid
    return y1 / u1


@dataclass(frozen=True)
class DescribingFn:
    """Amplitude-dependent fundamental gain of a static nonlinearity."""

    source: StaticNL
    evaluation: Callable[[float], complex] = field(repr=False)

    def __call__(self, a: float) -> complex:
        return self.evaluation(a)

    def describe(self) -> str:
        return f"df({self.source.name or self.source.kind})"


def describing_fn(phi: StaticNL, n: int = 16384) -> DescribingFn:
    """Describing function of phi: analytic for the saturation, numeric otherwise."""
    if phi.kind == "saturation":
        return DescribingFn(phi, lambda a: complex(df_saturation(a)))
    return DescribingFn(phi, lambda a: df_numeric(phi, a, n))

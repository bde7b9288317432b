"""Discretized square-integrable signals over one period.

A signal is stored as N uniform complex samples of one period T = 2*pi/omega0.
Inner products use the per-period integral convention, so Parseval holds
exactly against Fourier-series coefficients scaled by T.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateAngleError, IncompatibleSignalsError

DEFAULT_N = 4096


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PeriodicSignal:
    """One period of a uniformly sampled complex signal.

    omega0 is the fundamental angular frequency in rad/s; samples hold the
    N values on the grid t_k = k*T/N with T = 2*pi/omega0.  N must be a
    power of two (>= 8) so spectra are exact FFT pairs.
    """

    omega0: float
    samples: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.omega0) and self.omega0 > 0):
            raise ValueError(f"omega0 must be positive and finite, got {self.omega0!r}")
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1:
            raise ValueError("samples must be a one-dimensional sequence")
        n = samples.shape[0]
        if n < 8 or not _is_power_of_two(n):
            raise ValueError(f"sample count must be a power of two >= 8, got {n}")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega0

    @property
    def dt(self) -> float:
        return self.period / self.n

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n) * self.dt

    def __add__(self, other: "PeriodicSignal") -> "PeriodicSignal":
        _require_compatible(self, other)
        return PeriodicSignal(self.omega0, self.samples + other.samples)

    def __sub__(self, other: "PeriodicSignal") -> "PeriodicSignal":
        _require_compatible(self, other)
        return PeriodicSignal(self.omega0, self.samples - other.samples)

    def __mul__(self, c: complex) -> "PeriodicSignal":
        return PeriodicSignal(self.omega0, self.samples * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Spectrum:
    """Fourier-series coefficients c_n with x(t) = sum_n c_n exp(i n omega0 t).

    Coefficients are stored for harmonics n = -N/2 .. N/2-1 in ascending
    order of n.
    """

    omega0: float
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        n = coeffs.shape[0]
        if coeffs.ndim != 1 or n < 8 or not _is_power_of_two(n):
            raise ValueError("coeffs must be one-dimensional with a power-of-two length >= 8")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def harmonics(self) -> np.ndarray:
        half = self.n // 2
        return np.arange(-half, half)

    def coeff(self, harmonic: int) -> complex:
        half = self.n // 2
        if not -half <= harmonic < half:
            raise ValueError(f"harmonic {harmonic} outside [-{half}, {half})")
        return complex(self.coeffs[harmonic + half])


def _require_compatible(x: PeriodicSignal, y: PeriodicSignal) -> None:
    if x.omega0 != y.omega0 or x.n != y.n:
        raise IncompatibleSignalsError(
            f"signals differ in omega0 or length: ({x.omega0}, {x.n}) vs ({y.omega0}, {y.n})"
        )


def inner_product(x: PeriodicSignal, y: PeriodicSignal) -> complex:
    """Per-period L2 inner product, linear in x and antilinear in y."""
    _require_compatible(x, y)
    return complex(x.dt * np.vdot(y.samples, x.samples))


def norm(x: PeriodicSignal) -> float:
    return float(np.sqrt(x.dt) * np.linalg.norm(x.samples))


def angle_between(x: PeriodicSignal, y: PeriodicSignal) -> float:
    """Angle in [0, pi] from the real part of the inner product.

    The cosine is clipped to [-1, 1] to guard against rounding.
    """
    nx, ny = norm(x), norm(y)
    if nx == 0.0 or ny == 0.0:
        raise DegenerateAngleError("angle undefined for a zero-norm signal")
    c = inner_product(x, y).real / (nx * ny)
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def to_spectrum(x: PeriodicSignal) -> Spectrum:
    return Spectrum(x.omega0, np.fft.fftshift(np.fft.fft(x.samples)) / x.n)


def from_spectrum(s: Spectrum) -> PeriodicSignal:
    return PeriodicSignal(s.omega0, np.fft.ifft(np.fft.ifftshift(s.coeffs)) * s.n)


def spectral_inner_product(a: Spectrum, b: Spectrum) -> complex:
    """Inner product evaluated on coefficients; equals the time-domain value."""
    if a.omega0 != b.omega0 or a.n != b.n:
        raise IncompatibleSignalsError("spectra differ in omega0 or length")
    period = 2.0 * np.pi / a.omega0
    return complex(period * np.vdot(b.coeffs, a.coeffs))


def harmonic_truncate(s: Spectrum, h: int) -> Spectrum:
    """Zero every coefficient with |n| > h."""
    if h < 1:
        raise ValueError(f"harmonic cap must be >= 1, got {h}")
    coeffs = s.coeffs.copy()
    coeffs[np.abs(s.harmonics) > h] = 0.0
    return Spectrum(s.omega0, coeffs)


def make_input(kind: str, omega0: float = 1.0, n: int = DEFAULT_N, **params) -> PeriodicSignal:
    """Build one of the stock input families.

    kind = "sinusoid":        amplitude * sin(omega0 t + phase)
    kind = "biased_sinusoid": bias + amplitude * sin(omega0 t)
    kind = "multisine":       sum_m amplitudes[m] * exp(i (harmonics[m] omega0 t + phi_m)),
                              phases phi_m drawn from the seeded generator unless given.

    Identical parameters (including seed) give bit-identical signals.
    """
    t = np.arange(n) * (2.0 * np.pi / omega0) / n
    if kind == "sinusoid":
        a = float(params.pop("amplitude", 1.0))
        phase = float(params.pop("phase", 0.0))
        _reject_unknown(params)
        _require_finite(amplitude=a, phase=phase)
        return PeriodicSignal(omega0, a * np.sin(omega0 * t + phase))
    if kind == "biased_sinusoid":
        k = float(params.pop("bias", 0.0))
        a = float(params.pop("amplitude", 1.0))
        _reject_unknown(params)
        _require_finite(bias=k, amplitude=a)
        return PeriodicSignal(omega0, k + a * np.sin(omega0 * t))
    if kind == "multisine":
        harmonics = np.asarray(params.pop("harmonics", [1]), dtype=int)
        amplitudes = params.pop("amplitudes", None)
        phases = params.pop("phases", None)
        seed = int(params.pop("seed", 0))
        _reject_unknown(params)
        if harmonics.size < 1:
            raise ValueError("multisine needs at least one harmonic")
        if np.any(harmonics == 0) or np.any(np.abs(harmonics) >= n // 2):
            raise ValueError("multisine harmonics must be nonzero and below the Nyquist index")
        if amplitudes is None:
            amplitudes = np.ones(harmonics.size)
        amplitudes = np.asarray(amplitudes, dtype=float)
        if amplitudes.shape != harmonics.shape or not np.all(np.isfinite(amplitudes)):
            raise ValueError("amplitudes must be finite and match the harmonics")
        if phases is None:
            phases = np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, harmonics.size)
        phases = np.asarray(phases, dtype=float)
        if phases.shape != harmonics.shape:
            raise ValueError("phases must match the harmonics")
        samples = np.zeros(n, dtype=np.complex128)
        for nk, ak, pk in zip(harmonics, amplitudes, phases):
            samples += ak * np.exp(1j * (nk * omega0 * t + pk))
        return PeriodicSignal(omega0, samples)
    raise ValueError(f"unknown input kind {kind!r}")


def _reject_unknown(params: dict) -> None:
    if params:
        raise ValueError(f"unknown parameters: {sorted(params)}")


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not np.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")

"""Sampling scaled relative graphs of operators.

Every sample is a complex number z = (|Dy|/|Du|) * exp(i * angle(Du, Dy))
for a pair of inputs; the angle convention puts z in the closed upper half
plane, and rendered figures mirror it across the real axis.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DegeneratePairError
from .operators import (
    DescribingFn,
    RationalTF,
    StaticNL,
    describing_fn,
    lti_apply,
    static_apply,
)
from .signals import (
    DEFAULT_N,
    PeriodicSignal,
    angle_between,
    from_spectrum,
    harmonic_truncate,
    make_input,
    norm,
    to_spectrum,
)

DEFAULT_H = 10
DEFAULT_BIAS_GRID = (-3.0, 3.0, 25)
DEFAULT_AMP_GRID = (4.0 / 25, 4.0, 25)
_PAIR_CHUNK = 65536


@dataclass(frozen=True)
class SrgPoint:
    """One graph sample: z = gain * exp(i*theta) with Im(z) >= 0."""

    z: complex
    gain: float
    theta: float
    provenance: str = ""


@dataclass(frozen=True)
class SrgCloud:
    """A collection of graph samples with the spec that produced them.

    Points are stored as upper-half representatives in deterministic order;
    identical spec and seed reproduce the cloud bit for bit.
    """

    z: np.ndarray
    provenance: tuple
    operator: str
    spec: dict
    skipped: int = 0

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.complex128).copy()
        z.setflags(write=False)
        object.__setattr__(self, "z", z)
        if len(self.provenance) != z.shape[0]:
            raise ValueError("provenance must have one entry per point")

    def __len__(self) -> int:
        return self.z.shape[0]

    @property
    def gain(self) -> np.ndarray:
        return np.abs(self.z)

    @property
    def theta(self) -> np.ndarray:
        return np.angle(self.z)

    @property
    def points(self) -> tuple:
        return tuple(
            SrgPoint(complex(zi), float(abs(zi)), float(np.angle(zi)), prov)
            for zi, prov in zip(self.z, self.provenance)
        )


def _upper(z: complex) -> complex:
    return z if z.imag >= 0 else z.conjugate()


def apply_operator(op, u: PeriodicSignal) -> PeriodicSignal:
    if isinstance(op, RationalTF):
        return lti_apply(op, u)
    if isinstance(op, StaticNL):
        return static_apply(op, u)
    if callable(op):
        return op(u)
    raise TypeError(f"cannot apply operator of type {type(op).__name__}")


def describe_operator(op) -> str:
    if hasattr(op, "describe"):
        return op.describe()
    return getattr(op, "__name__", repr(op))


def z_of_pair(op, u1: PeriodicSignal, u2: PeriodicSignal, h: Optional[int] = None,
              provenance: str = "") -> SrgPoint:
    """Graph sample for the input pair (u1, u2).

    With a harmonic cap h the outputs are truncated before differencing.
    A zero output difference maps to z = 0 with theta = 0.
    """
    du = u1 - u2
    ndu = norm(du)
    if ndu <= 1e-12 * max(norm(u1), norm(u2)):
        raise DegeneratePairError("input pair is degenerate: u1 = u2")
    dy = apply_operator(op, u1) - apply_operator(op, u2)
    if h is not None:
        dy = from_spectrum(harmonic_truncate(to_spectrum(dy), h))
    ndy = norm(dy)
    if ndy == 0.0:
        return SrgPoint(0.0 + 0.0j, 0.0, 0.0, provenance)
    theta = angle_between(du, dy)
    gain = ndy / ndu
    return SrgPoint(gain * np.exp(1j * theta), gain, theta, provenance)


def z_linear(op, v: PeriodicSignal, provenance: str = "") -> SrgPoint:
    """Single-argument sample for a linear operator: z over the input v alone."""
    nv = norm(v)
    if nv == 0.0:
        raise DegeneratePairError("z_linear requires a nonzero input")
    y = apply_operator(op, v)
    ny = norm(y)
    if ny == 0.0:
        return SrgPoint(0.0 + 0.0j, 0.0, 0.0, provenance)
    theta = angle_between(v, y)
    gain = ny / nv
    return SrgPoint(gain * np.exp(1j * theta), gain, theta, provenance)


def _grid_values(spec: tuple) -> np.ndarray:
    lo, hi, count = spec
    return np.linspace(float(lo), float(hi), int(count))


def default_bias_amp_grid() -> np.ndarray:
    """Default quadruples (k1, a1, k2, a2): all unordered pairs of bias/amplitude combos."""
    biases = _grid_values(DEFAULT_BIAS_GRID)
    amps = _grid_values(DEFAULT_AMP_GRID)
    kk, aa = np.meshgrid(biases, amps, indexing="ij")
    combos = np.column_stack([kk.ravel(), aa.ravel()])
    i_idx, j_idx = np.triu_indices(combos.shape[0], k=1)
    return np.column_stack([combos[i_idx], combos[j_idx]])


def sample_static_nl(phi: StaticNL, grid: Optional[np.ndarray] = None, h: int = DEFAULT_H,
                     n: int = DEFAULT_N, omega0: float = 1.0) -> SrgCloud:
    """Sample the graph of a static nonlinearity over biased sinusoids.

    grid rows are (k1, a1, k2, a2) for inputs u_i = k_i + a_i sin(omega0 t);
    outputs keep the first h harmonics.  Degenerate rows (u1 = u2) are
    skipped and counted.  Norms and angles are evaluated on the truncated
    output spectra, which matches the time-domain path exactly by Parseval.
    """
    if grid is None:
        grid = default_bias_amp_grid()
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2 or grid.shape[1] != 4 or grid.shape[0] == 0:
        raise ValueError("grid must be a nonempty array of (k1, a1, k2, a2) rows")

    period = 2.0 * np.pi / omega0
    t = np.arange(n) * period / n
    sin_t = np.sin(omega0 * t)

    combos, inverse = np.unique(grid.reshape(-1, 2), axis=0, return_inverse=True)
    pair_i = inverse.reshape(-1, 2)[:, 0]
    pair_j = inverse.reshape(-1, 2)[:, 1]

    # Truncated output spectra, one row per distinct (k, a) combo.
    width = 2 * h + 1
    coeffs = np.empty((combos.shape[0], width), dtype=np.complex128)
    for row, (k, a) in enumerate(combos):
        y = phi.map(k + a * sin_t)
        c = np.fft.fftshift(np.fft.fft(y)) / n
        coeffs[row] = c[n // 2 - h: n // 2 + h + 1]

    keep = pair_i != pair_j
    skipped = int(np.count_nonzero(~keep))
    pair_i, pair_j = pair_i[keep], pair_j[keep]
    grid = grid[keep]

    z = np.empty(pair_i.shape[0], dtype=np.complex128)
    for start in range(0, pair_i.shape[0], _PAIR_CHUNK):
        sl = slice(start, min(start + _PAIR_CHUNK, pair_i.shape[0]))
        dk = combos[pair_i[sl], 0] - combos[pair_j[sl], 0]
        da = combos[pair_i[sl], 1] - combos[pair_j[sl], 1]
        dc = coeffs[pair_i[sl]] - coeffs[pair_j[sl]]
        ny2 = period * np.sum(np.abs(dc) ** 2, axis=1)
        nu2 = period * (dk ** 2 + 0.5 * da ** 2)
        ip = period * (
            dk * np.conj(dc[:, h])
            + (-0.5j * da) * np.conj(dc[:, h + 1])
            + (0.5j * da) * np.conj(dc[:, h - 1])
        )
        gain = np.sqrt(ny2 / nu2)
        denom = np.sqrt(nu2 * ny2)
        cos = np.divide(ip.real, denom, out=np.zeros_like(denom), where=denom > 0)
        theta = np.arccos(np.clip(cos, -1.0, 1.0))
        zc = gain * np.exp(1j * theta)
        zc[ny2 == 0.0] = 0.0
        z[sl] = zc

    provenance = tuple(
        f"bias-pair:k1={k1:g};a1={a1:g};k2={k2:g};a2={a2:g}" for k1, a1, k2, a2 in grid
    )
    spec = {
        "family": "biased_sinusoid",
        "h": h,
        "n": n,
        "omega0": omega0,
        "pairs": int(pair_i.shape[0]),
    }
    return SrgCloud(z, provenance, describe_operator(phi), spec, skipped)


def _sweep_harmonics(max_harmonic: int, count: int) -> np.ndarray:
    raw = np.unique(np.round(np.logspace(0, np.log10(max_harmonic), count)).astype(int))
    return raw[(raw >= 1) & (raw <= max_harmonic)]


def sample_lti(tf: RationalTF, n_multisines: int = 1000, seed: int = 0,
               omega0: float = 0.01, n: int = DEFAULT_N, max_harmonic: int = 1600,
               sweep: int = 64) -> SrgCloud:
    """Sample the graph of an LTI operator over harmonics and random multisines.

    A deterministic log-spaced sweep of single harmonics covers the Nyquist
    locus from omega0 up to max_harmonic*omega0; seeded multisines mix one to
    three harmonics with random amplitudes and phases.
    """
    zs = []
    provs = []
    for nh in _sweep_harmonics(max_harmonic, sweep):
        v = make_input("multisine", omega0=omega0, n=n,
                       harmonics=[int(nh)], amplitudes=[1.0], phases=[0.0])
        zs.append(_upper(z_linear(tf, v).z))
        provs.append(f"harmonic:n={nh}")
    rng = np.random.default_rng(seed)
    log_max = np.log(max_harmonic)
    for i in range(n_multisines):
        m = int(rng.integers(1, 4))
        while True:
            ns = np.unique(1 + np.floor(np.exp(rng.uniform(0.0, log_max, m))).astype(int))
            ns = ns[ns <= max_harmonic]
            if ns.size == m:
                break
        amps = rng.uniform(0.2, 1.0, m)
        phases = rng.uniform(0.0, 2.0 * np.pi, m)
        v = make_input("multisine", omega0=omega0, n=n,
                       harmonics=ns, amplitudes=amps, phases=phases)
        zs.append(_upper(z_linear(tf, v).z))
        provs.append(f"multisine:i={i};ns={','.join(map(str, ns))};seed={seed}")
    spec = {
        "family": "harmonics+multisine",
        "n_multisines": n_multisines,
        "seed": seed,
        "omega0": omega0,
        "n": n,
        "max_harmonic": max_harmonic,
        "sweep": sweep,
    }
    return SrgCloud(np.array(zs), tuple(provs), describe_operator(tf), spec)


def sample_df(phi: StaticNL, amplitudes: Optional[Sequence[float]] = None,
              df: Optional[DescribingFn] = None) -> SrgCloud:
    """Sample the graph of the describing-function operator over sinusoid pairs.

    For inputs a_i sin(omega t) the operator scales each sinusoid by its
    amplitude gain, so z = (psi(a1) a1 - psi(a2) a2) / (a1 - a2).  Pairs with
    a1 = a2 are skipped.
    """
    if amplitudes is None:
        amplitudes = _grid_values(DEFAULT_AMP_GRID)
    amplitudes = np.asarray(amplitudes, dtype=float)
    if amplitudes.ndim != 1 or amplitudes.size < 2 or np.any(amplitudes <= 0):
        raise ValueError("amplitudes must be a 1-d grid of at least two positive values")
    if df is None:
        df = describing_fn(phi)
    psi = np.array([df(a) for a in amplitudes], dtype=np.complex128)
    zs = []
    provs = []
    skipped = 0
    for i in range(amplitudes.size):
        for j in range(i + 1, amplitudes.size):
            a1, a2 = amplitudes[i], amplitudes[j]
            if a1 == a2:
                skipped += 1
                continue
            z = (psi[i] * a1 - psi[j] * a2) / (a1 - a2)
            zs.append(_upper(complex(z)))
            provs.append(f"df-pair:a1={a1:g};a2={a2:g}")
    spec = {"family": "df_sinusoid_pairs", "amplitudes": [float(a) for a in amplitudes]}
    return SrgCloud(np.array(zs), tuple(provs), f"df({phi.name or phi.kind})", spec, skipped)


CSV_HEADER = ["re", "im", "gain", "theta", "prov"]


def cloud_to_csv(cloud: SrgCloud) -> str:
    """Serialize a cloud in the re,im,gain,theta,prov format (deterministic)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    gains = cloud.gain
    thetas = cloud.theta
    for zi, gi, ti, prov in zip(cloud.z, gains, thetas, cloud.provenance):
        writer.writerow([repr(float(zi.real)), repr(float(zi.imag)),
                         repr(float(gi)), repr(float(ti)), prov])
    return buf.getvalue()


def cloud_from_csv(text: str, operator: str = "csv", spec: Optional[dict] = None) -> SrgCloud:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}; expected {CSV_HEADER!r}")
    zs = []
    provs = []
    for row in reader:
        if not row:
            continue
        zs.append(complex(float(row[0]), float(row[1])))
        provs.append(row[4])
    return SrgCloud(np.array(zs, dtype=np.complex128), tuple(provs), operator, spec or {})

"""Analytic graph regions, their algebra, and property certification.

Regions are conjugate-symmetric subsets of the complex plane described by a
small set of variants (half planes, real-centred discs and their
complements, circles, hyperbolic hulls, point clouds).  Operator properties
translate to membership: an incremental gain bound gamma is the disc of
radius gamma about the origin, incremental positivity is the right half
plane, and any frequency-independent quadratic constraint on (Du, Dy) maps
to a disc, half plane, or disc complement.

Inverting a region applies the angle-preserving inversion r*exp(i*t) ->
(1/r)*exp(i*t); sums are Minkowski sums.  Results that can only be obtained
by sampling carry an explicit approximate flag, and certification never
passes on an approximate region.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InfiniteRegionError, UnsupportedRegionError
from .hyperbolic import HHull, arc_points, h_convex_hull, hull_contains, hull_from_dict, hull_to_dict
from .sampler import SrgCloud

_BOUNDARY_TOL = 1e-9
_SAMPLED_BOUNDARY = 1024
_MAX_SUM_POINTS = 200_000


@dataclass(frozen=True, kw_only=True)
class Region:
    """Base for all region variants.

    includes_infinity marks regions whose operator class contains the point
    at infinity (set when inverting a region with zero in its interior);
    approximate marks sampled results that cannot certify a pass.
    """

    includes_infinity: bool = False
    approximate: bool = False
    notes: tuple = ()


def _clean(x: float) -> float:
    return float(x) + 0.0  # normalizes -0.0


@dataclass(frozen=True)
class HalfPlane(Region):
    """Re z >= c (sense "ge") or Re z <= c (sense "le")."""

    c: float
    sense: str = "ge"

    def __post_init__(self):
        if self.sense not in ("ge", "le"):
            raise ValueError(f"sense must be 'ge' or 'le', got {self.sense!r}")
        object.__setattr__(self, "c", _clean(self.c))


@dataclass(frozen=True)
class Disc(Region):
    """Closed disc |z - c| <= rho with real centre."""

    c: float
    rho: float

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("disc radius must be nonnegative")
        object.__setattr__(self, "c", _clean(self.c))
        object.__setattr__(self, "rho", _clean(self.rho))


@dataclass(frozen=True)
class DiscComplement(Region):
    """Closed exterior |z - c| >= rho of a real-centred disc."""

    c: float
    rho: float

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("disc-complement radius must be positive")
        object.__setattr__(self, "c", _clean(self.c))
        object.__setattr__(self, "rho", _clean(self.rho))


@dataclass(frozen=True)
class CircleCurve(Region):
    """The circle |z - c| = rho itself (a curve, not a disc)."""

    c: float
    rho: float

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("circle radius must be nonnegative")
        object.__setattr__(self, "c", _clean(self.c))
        object.__setattr__(self, "rho", _clean(self.rho))


@dataclass(frozen=True)
class HullRegion(Region):
    """Conjugate-symmetric region given by a hyperbolic hull of its upper half."""

    hull: HHull


@dataclass(frozen=True)
class CloudRegion(Region):
    """Sampled region: the point set of a cloud (with its mirror image)."""

    cloud: SrgCloud


@dataclass(frozen=True)
class FullPlane(Region):
    pass


@dataclass(frozen=True)
class EmptyRegion(Region):
    pass


@dataclass(frozen=True)
class IqcSpec:
    """Entries of the quadratic form a|Du|^2 + (b+c)<Du|Dy> + d|Dy|^2 >= 0."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a == 0 and self.b + self.c == 0 and self.d == 0:
            raise ValueError("degenerate quadratic form: a, b+c and d all vanish")


def iqc_region(q: IqcSpec) -> Region:
    """Region {z : a + (b+c) Re z + d |z|^2 >= 0} of a quadratic constraint."""
    s = q.b + q.c
    if q.d == 0:
        if s == 0:
            return FullPlane() if q.a >= 0 else EmptyRegion()
        c = -q.a / s
        return HalfPlane(c, "ge" if s > 0 else "le")
    center = -s / (2.0 * q.d)
    r2 = center * center - q.a / q.d
    if q.d < 0:
        if r2 < 0:
            return EmptyRegion()
        return Disc(center, float(np.sqrt(r2)))
    if r2 <= 0:
        return FullPlane()
    return DiscComplement(center, float(np.sqrt(r2)))


def contains(r: Region, z, tol: float = _BOUNDARY_TOL):
    """Pointwise membership with slack tol on analytic boundaries.

    Accepts a scalar or an array of points; conjugate symmetry is built in.
    """
    za = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if isinstance(r, FullPlane):
        ok = np.ones(za.shape, dtype=bool)
    elif isinstance(r, EmptyRegion):
        ok = np.zeros(za.shape, dtype=bool)
    elif isinstance(r, HalfPlane):
        ok = za.real >= r.c - tol if r.sense == "ge" else za.real <= r.c + tol
    elif isinstance(r, Disc):
        ok = np.abs(za - r.c) <= r.rho + tol
    elif isinstance(r, DiscComplement):
        ok = np.abs(za - r.c) >= r.rho - tol
    elif isinstance(r, CircleCurve):
        ok = np.abs(np.abs(za - r.c) - r.rho) <= tol
    elif isinstance(r, HullRegion):
        ok = np.atleast_1d(hull_contains(r.hull, za, tol))
    elif isinstance(r, CloudRegion):
        upper = np.where(za.imag < 0, np.conj(za), za)
        pts = r.cloud.z
        ok = np.array([np.min(np.abs(pts - p)) <= tol if pts.size else False for p in upper])
    else:
        raise TypeError(f"unknown region type {type(r).__name__}")
    if np.ndim(z) == 0:
        return bool(ok[0])
    return ok


@dataclass(frozen=True)
class Violation:
    index: int
    z: complex
    provenance: str


@dataclass(frozen=True)
class ContainmentCertificate:
    """Outcome of checking one cloud against one region."""

    passed: bool
    total: int
    violations: tuple
    region: Region

    def worst(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None


def cloud_within(cloud: SrgCloud, r: Region, tol: float = _BOUNDARY_TOL) -> ContainmentCertificate:
    """Certificate that every cloud point lies in the region (within tol)."""
    ok = np.atleast_1d(contains(r, cloud.z, tol))
    bad = np.nonzero(~ok)[0]
    violations = tuple(
        Violation(int(i), complex(cloud.z[i]), cloud.provenance[i]) for i in bad
    )
    return ContainmentCertificate(bad.size == 0, len(cloud), violations, r)


def _interior_contains_zero(r: Region) -> bool:
    if isinstance(r, HalfPlane):
        return r.c < 0 if r.sense == "ge" else r.c > 0
    if isinstance(r, Disc):
        return abs(r.c) < r.rho
    if isinstance(r, DiscComplement):
        return abs(r.c) > r.rho
    if isinstance(r, FullPlane):
        return True
    return False


def moebius_invert(r: Region) -> Region:
    """Image of the region under r*exp(i*t) -> (1/r)*exp(i*t).

    Closed forms for the analytic variants; pointwise for clouds.  The
    includes-infinity flag is set when zero is interior to the source.
    """
    out = _invert_dispatch(r)
    if r.approximate and not out.approximate:
        out = replace(out, approximate=True)
    return out


def _invert_dispatch(r: Region) -> Region:
    flag = _interior_contains_zero(r)
    if isinstance(r, EmptyRegion):
        if r.includes_infinity:
            return Disc(0.0, 0.0)
        return EmptyRegion()
    if isinstance(r, FullPlane):
        return FullPlane(includes_infinity=True)
    if isinstance(r, HalfPlane):
        if r.c == 0:
            return HalfPlane(0.0, r.sense)
        inv_c = 1.0 / (2.0 * r.c)
        bounded = (r.c > 0) if r.sense == "ge" else (r.c < 0)
        if bounded:
            return Disc(inv_c, abs(inv_c))
        return DiscComplement(inv_c, abs(inv_c), includes_infinity=True)
    if isinstance(r, Disc):
        if r.rho == 0:
            if r.c == 0:
                return EmptyRegion(includes_infinity=True)
            return Disc(1.0 / r.c, 0.0)
        d = r.c * r.c - r.rho * r.rho
        if d > 0 and abs(r.c) != r.rho:
            return Disc(r.c / d, r.rho / d)
        if abs(r.c) == r.rho:
            inv_c = 1.0 / (2.0 * r.c)
            return HalfPlane(inv_c, "ge" if r.c > 0 else "le")
        return DiscComplement(r.c / d, r.rho / -d, includes_infinity=True)
    if isinstance(r, DiscComplement):
        d = r.c * r.c - r.rho * r.rho
        if abs(r.c) < r.rho:
            return Disc(r.c / d, r.rho / -d)
        if abs(r.c) == r.rho:
            inv_c = 1.0 / (2.0 * r.c)
            return HalfPlane(inv_c, "le" if r.c > 0 else "ge")
        return DiscComplement(r.c / d, r.rho / d, includes_infinity=True)
    if isinstance(r, CircleCurve):
        if r.rho == 0:
            if r.c == 0:
                return EmptyRegion(includes_infinity=True)
            return CircleCurve(1.0 / r.c, 0.0)
        if abs(r.c) == r.rho:
            raise UnsupportedRegionError(
                "inverting a circle through the origin yields a line, which has no variant"
            )
        d = r.c * r.c - r.rho * r.rho
        return CircleCurve(r.c / d, r.rho / abs(d))
    if isinstance(r, CloudRegion):
        z = r.cloud.z
        zero = np.abs(z) == 0.0
        finite = z[~zero]
        inv = finite / np.abs(finite) ** 2
        notes = r.notes
        if np.any(zero):
            notes = notes + ("zero points inverted to the point at infinity",)
        cloud = SrgCloud(
            inv,
            tuple(p for p, drop in zip(r.cloud.provenance, zero) if not drop),
            f"inv({r.cloud.operator})",
            dict(r.cloud.spec),
            r.cloud.skipped,
        )
        return CloudRegion(cloud, includes_infinity=flag or bool(np.any(zero)),
                           approximate=r.approximate, notes=notes)
    raise UnsupportedRegionError(
        f"inversion of {type(r).__name__} is not supported; sample it to a cloud first"
    )


def boundary_samples(r: Region, count: int = _SAMPLED_BOUNDARY,
                     extra_angles: Optional[np.ndarray] = None) -> np.ndarray:
    """Points on the region boundary (plus arc samples for hulls, the point
    set for clouds).  Used by sampled fallbacks and test oracles."""
    if isinstance(r, (Disc, DiscComplement, CircleCurve)):
        phi = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
        if extra_angles is not None:
            phi = np.unique(np.concatenate([phi, extra_angles]))
        return r.c + r.rho * np.exp(1j * phi)
    if isinstance(r, HalfPlane):
        span = np.linspace(-50.0, 50.0, count)
        return r.c + 1j * span
    if isinstance(r, HullRegion):
        hull = r.hull
        if hull.degenerate == "point":
            return hull.vertices.copy()
        edges = hull.edges
        if len(edges) > count:
            edges = edges[:: int(np.ceil(len(edges) / count))]
        per_edge = max(2, count // max(len(edges), 1))
        pts = [arc_points(e, per_edge) for e in edges]
        upper = np.concatenate(pts) if pts else hull.vertices
        return np.concatenate([upper, np.conj(upper)])
    if isinstance(r, CloudRegion):
        z = r.cloud.z
        return np.concatenate([z, np.conj(z)])
    raise UnsupportedRegionError(f"no boundary sampling for {type(r).__name__}")


def _as_sample_cloud(z: np.ndarray, label: str, note: str) -> Region:
    z = np.where(np.imag(z) < 0, np.conj(z), z)
    cloud = SrgCloud(z, ("",) * z.shape[0], label, {"sampled": True})
    return CloudRegion(cloud, approximate=True, notes=(note,))


def minkowski_sum(r1: Region, r2: Region) -> Region:
    """Minkowski sum of two regions.

    Closed forms cover half planes, discs and disc complements; operands
    without a verified chord property still produce a sum but the result is
    flagged approximate.  Operands carrying the includes-infinity flag are
    rejected.
    """
    if r1.includes_infinity or r2.includes_infinity:
        raise InfiniteRegionError("Minkowski sum requires both operands free of infinity")
    if isinstance(r1, EmptyRegion) or isinstance(r2, EmptyRegion):
        return EmptyRegion()

    extra_notes: tuple = ()
    approx = r1.approximate or r2.approximate
    if not (chord_property(r1) or chord_property(r2)):
        approx = True
        extra_notes = ("chord property verified on neither operand; sum may be inexact",)

    result = _minkowski_dispatch(r1, r2)
    if approx or extra_notes:
        result = replace(result, approximate=result.approximate or approx,
                         notes=result.notes + extra_notes)
    return result


def _minkowski_dispatch(r1: Region, r2: Region) -> Region:
    if isinstance(r1, FullPlane) or isinstance(r2, FullPlane):
        return FullPlane()
    for a, b in ((r1, r2), (r2, r1)):
        if isinstance(a, HalfPlane):
            if isinstance(b, HalfPlane):
                if a.sense == b.sense:
                    return HalfPlane(a.c + b.c, a.sense)
                return FullPlane()
            if isinstance(b, (Disc, CircleCurve)):
                shift = b.c - b.rho if a.sense == "ge" else b.c + b.rho
                return HalfPlane(a.c + shift, a.sense)
            if isinstance(b, DiscComplement):
                return FullPlane()
        if isinstance(a, Disc) and isinstance(b, Disc):
            return Disc(a.c + b.c, a.rho + b.rho)
        if isinstance(a, DiscComplement):
            if isinstance(b, Disc):
                if a.rho > b.rho:
                    return DiscComplement(a.c + b.c, a.rho - b.rho)
                return FullPlane()
            if isinstance(b, DiscComplement):
                return FullPlane()
    # Sampled fallback for curves, hulls and clouds.
    za = boundary_samples(r1)
    zb = boundary_samples(r2)
    if za.size * zb.size > _MAX_SUM_POINTS:
        stride = int(np.ceil(np.sqrt(za.size * zb.size / _MAX_SUM_POINTS)))
        za = za[::stride]
        zb = zb[::stride]
    sums = (za[:, None] + zb[None, :]).ravel()
    mirrored = (za[:, None] + np.conj(zb)[None, :]).ravel()
    return _as_sample_cloud(
        np.concatenate([sums, mirrored]),
        "minkowski-sum",
        "sampled Minkowski sum of boundary points",
    )


_ANALYTIC = (HalfPlane, Disc, DiscComplement, CircleCurve, FullPlane, EmptyRegion)


def intersect(r1: Region, r2: Region) -> Region:
    """Intersection of two regions; exact whenever the result is expressible."""
    if isinstance(r1, FullPlane):
        return r2
    if isinstance(r2, FullPlane):
        return r1
    if isinstance(r1, EmptyRegion) or isinstance(r2, EmptyRegion):
        return EmptyRegion()
    if isinstance(r1, _ANALYTIC) and isinstance(r2, _ANALYTIC) and r1 == r2:
        return r1

    for a, b in ((r1, r2), (r2, r1)):
        if isinstance(a, CloudRegion):
            ok = np.atleast_1d(contains(b, a.cloud.z))
            cloud = SrgCloud(
                a.cloud.z[ok],
                tuple(p for p, keep in zip(a.cloud.provenance, ok) if keep),
                a.cloud.operator,
                dict(a.cloud.spec),
                a.cloud.skipped,
            )
            return CloudRegion(cloud, approximate=True,
                               notes=("cloud filtered by region membership",))

    exact = _intersect_exact(r1, r2)
    if exact is not None:
        return exact

    sampled = _intersect_sampled(r1, r2)
    if sampled is not None:
        return sampled
    return replace(r1, approximate=True,
                   notes=r1.notes + ("unrepresentable intersection; over-approximated by one operand",))


def _intersect_exact(r1: Region, r2: Region) -> Optional[Region]:
    if isinstance(r1, HalfPlane) and isinstance(r2, HalfPlane):
        if r1.sense == r2.sense:
            if r1.sense == "ge":
                return HalfPlane(max(r1.c, r2.c), "ge")
            return HalfPlane(min(r1.c, r2.c), "le")
        ge = r1 if r1.sense == "ge" else r2
        le = r2 if r1.sense == "ge" else r1
        if ge.c > le.c:
            return EmptyRegion()
        return None
    if isinstance(r1, Disc) and isinstance(r2, Disc):
        d = abs(r1.c - r2.c)
        if d > r1.rho + r2.rho:
            return EmptyRegion()
        if d == r1.rho + r2.rho and d > 0:
            x = r1.c + np.sign(r2.c - r1.c) * r1.rho
            return Disc(float(x), 0.0)
        if d + r2.rho <= r1.rho:
            return r2
        if d + r1.rho <= r2.rho:
            return r1
        return None
    for a, b in ((r1, r2), (r2, r1)):
        if isinstance(a, Disc) and isinstance(b, HalfPlane):
            lo, hi = a.c - a.rho, a.c + a.rho
            if b.sense == "ge":
                if lo >= b.c:
                    return a
                if hi < b.c:
                    return EmptyRegion()
                if hi == b.c:
                    return Disc(hi, 0.0)
            else:
                if hi <= b.c:
                    return a
                if lo > b.c:
                    return EmptyRegion()
                if lo == b.c:
                    return Disc(lo, 0.0)
            return None
        if isinstance(a, Disc) and isinstance(b, DiscComplement):
            d = abs(a.c - b.c)
            if d - a.rho >= b.rho:
                return a
            if d + a.rho < b.rho:
                return EmptyRegion()
            if d + a.rho == b.rho:
                if d == 0:
                    return CircleCurve(a.c, a.rho)
                return Disc(float(a.c + np.sign(a.c - b.c) * a.rho), 0.0)
            return None
        if isinstance(a, CircleCurve) and isinstance(b, (Disc, DiscComplement, HalfPlane, CircleCurve)):
            samples = boundary_samples(a, 4096)
            ok = np.atleast_1d(contains(b, samples))
            if np.all(ok):
                return a
            if not np.any(ok):
                return EmptyRegion()
            return CloudRegion(
                SrgCloud(np.where(samples[ok].imag < 0, np.conj(samples[ok]), samples[ok]),
                         ("",) * int(np.count_nonzero(ok)), "circle-intersection",
                         {"sampled": True}),
                approximate=True, notes=("circle filtered by region membership",))
        if isinstance(a, DiscComplement) and isinstance(b, HalfPlane):
            # Hole entirely outside the half plane: the half plane is untouched.
            if b.sense == "ge" and a.c + a.rho <= b.c:
                return b
            if b.sense == "le" and a.c - a.rho >= b.c:
                return b
            return None
    return None


def _intersect_sampled(r1: Region, r2: Region) -> Optional[Region]:
    bounded = any(isinstance(r, (Disc, CircleCurve, HullRegion)) for r in (r1, r2))
    if not bounded:
        return None
    try:
        sa = boundary_samples(r1, 2048)
        sb = boundary_samples(r2, 2048)
    except UnsupportedRegionError:
        return None
    pts = np.concatenate([sa[np.atleast_1d(contains(r2, sa))],
                          sb[np.atleast_1d(contains(r1, sb))]])
    if pts.size == 0:
        return EmptyRegion()
    upper = np.where(pts.imag < 0, np.conj(pts), pts)
    hull = h_convex_hull(upper)
    return HullRegion(hull, approximate=True,
                      notes=("intersection represented by a hull of boundary samples",))


def chord_property(r: Region) -> bool:
    """Whether every finite region point z brings the segment [z, conj z] along.

    True structurally for half planes, discs and the full plane.  A disc
    complement fails: points straight above the hole have chords through it.
    Hulls and clouds are checked by sampling vertical segments.
    """
    if isinstance(r, (HalfPlane, Disc, FullPlane, EmptyRegion)):
        return True
    if isinstance(r, DiscComplement):
        return False
    if isinstance(r, CircleCurve):
        return r.rho == 0
    if isinstance(r, HullRegion):
        hull = r.hull
        if hull.degenerate == "point":
            return bool(abs(complex(hull.vertices[0]).imag) <= 1e-6)
        verts = hull.vertices
        if verts.shape[0] > 256:
            verts = verts[:: int(np.ceil(verts.shape[0] / 256))]
        probes = list(verts)
        edges = hull.edges
        if len(edges) > 256:
            edges = edges[:: int(np.ceil(len(edges) / 256))]
        for e in edges:
            probes.extend(arc_points(e, 9)[1:-1])
        for v in probes:
            v = complex(v)
            if abs(v.imag) <= 1e-6:
                continue
            seg = v.real + 1j * np.linspace(0.0, v.imag, 64)
            if not np.all(np.atleast_1d(hull_contains(hull, seg, 1e-6))):
                return False
        return True
    if isinstance(r, CloudRegion):
        for v in r.cloud.z:
            v = complex(v)
            if abs(v.imag) <= 1e-6:
                continue
            seg = v.real + 1j * np.linspace(0.0, v.imag, 64)
            if not np.all(np.atleast_1d(contains(r, seg, 1e-6))):
                return False
        return True
    raise TypeError(f"unknown region type {type(r).__name__}")


def feedback(r1: Region, r2: Region) -> Region:
    """Region of the negative feedback loop: invert, add, invert again."""
    return moebius_invert(minkowski_sum(moebius_invert(r1), r2))


# ---------------------------------------------------------------------------
# Properties and certification


@dataclass(frozen=True)
class GainBound:
    gamma: float

    @property
    def name(self) -> str:
        return f"gain<={self.gamma:g}"

    def region(self) -> Region:
        return Disc(0.0, self.gamma)


@dataclass(frozen=True)
class IncrementalPositivity:
    @property
    def name(self) -> str:
        return "incrementally-positive"

    def region(self) -> Region:
        return HalfPlane(0.0)


@dataclass(frozen=True)
class IqcProperty:
    spec: IqcSpec

    @property
    def name(self) -> str:
        q = self.spec
        return f"iqc({q.a:g},{q.b:g},{q.c:g},{q.d:g})"

    def region(self) -> Region:
        return iqc_region(self.spec)


PropertySpec = Union[GainBound, IncrementalPositivity, IqcProperty]


@dataclass(frozen=True)
class PropertyResult:
    name: str
    region: Region
    certificate: ContainmentCertificate

    @property
    def passed(self) -> bool:
        return self.certificate.passed and not self.region.approximate


@dataclass(frozen=True)
class CertificationReport:
    """Per-property verdicts for one sampled cloud, combined via intersection."""

    operator: str
    results: tuple
    combined: Optional[Region]

    @property
    def passed(self) -> bool:
        return all(res.passed for res in self.results)


def certify(cloud: SrgCloud, props: Sequence[PropertySpec],
            tol: float = _BOUNDARY_TOL) -> CertificationReport:
    results = []
    combined: Optional[Region] = None
    for prop in props:
        region = prop.region()
        cert = cloud_within(cloud, region, tol)
        results.append(PropertyResult(prop.name, region, cert))
        combined = region if combined is None else intersect(combined, region)
    return CertificationReport(cloud.operator, tuple(results), combined)


# ---------------------------------------------------------------------------
# JSON serialization


def region_to_dict(r: Region) -> dict:
    if isinstance(r, HalfPlane):
        data = {"variant": "halfplane", "c": r.c}
        if r.sense != "ge":
            data["sense"] = r.sense
    elif isinstance(r, Disc):
        data = {"variant": "disc", "c": r.c, "rho": r.rho}
    elif isinstance(r, DiscComplement):
        data = {"variant": "disc_complement", "c": r.c, "rho": r.rho}
    elif isinstance(r, CircleCurve):
        data = {"variant": "circle", "c": r.c, "rho": r.rho}
    elif isinstance(r, FullPlane):
        data = {"variant": "full"}
    elif isinstance(r, EmptyRegion):
        data = {"variant": "empty"}
    elif isinstance(r, HullRegion):
        data = {"variant": "hull", "hull": hull_to_dict(r.hull)}
    elif isinstance(r, CloudRegion):
        data = {
            "variant": "cloud",
            "points": [[float(z.real), float(z.imag)] for z in r.cloud.z],
            "prov": list(r.cloud.provenance),
        }
    else:
        raise TypeError(f"unknown region type {type(r).__name__}")
    if r.includes_infinity:
        data["includes_infinity"] = True
    if r.approximate:
        data["approximate"] = True
    if r.notes:
        data["notes"] = list(r.notes)
    return data


def region_from_dict(data: dict) -> Region:
    flags = {
        "includes_infinity": bool(data.get("includes_infinity", False)),
        "approximate": bool(data.get("approximate", False)),
        "notes": tuple(data.get("notes", ())),
    }
    variant = data["variant"]
    if variant == "halfplane":
        return HalfPlane(float(data["c"]), data.get("sense", "ge"), **flags)
    if variant == "disc":
        return Disc(float(data["c"]), float(data["rho"]), **flags)
    if variant == "disc_complement":
        return DiscComplement(float(data["c"]), float(data["rho"]), **flags)
    if variant == "circle":
        return CircleCurve(float(data["c"]), float(data["rho"]), **flags)
    if variant == "full":
        return FullPlane(**flags)
    if variant == "empty":
        return EmptyRegion(**flags)
    if variant == "hull":
        return HullRegion(hull_from_dict(data["hull"]), **flags)
    if variant == "cloud":
        pts = np.array([complex(re, im) for re, im in data["points"]], dtype=np.complex128)
        prov = tuple(data.get("prov", [""] * len(pts)))
        return CloudRegion(SrgCloud(pts, prov, "json", {}), **flags)
    raise ValueError(f"unknown region variant {variant!r}")


def certificate_to_dict(cert: ContainmentCertificate, max_listed: int = 100) -> dict:
    return {
        "passed": cert.passed,
        "total": cert.total,
        "violation_count": len(cert.violations),
        "violations": [
            {"index": v.index, "re": v.z.real, "im": v.z.imag, "prov": v.provenance}
            for v in cert.violations[:max_listed]
        ],
        "region": region_to_dict(cert.region),
    }


def report_to_dict(report: CertificationReport) -> dict:
    return {
        "operator": report.operator,
        "passed": report.passed,
        "checks": [
            {
                "property": res.name,
                "passed": res.passed,
                **certificate_to_dict(res.certificate),
            }
            for res in report.results
        ],
        "combined": region_to_dict(report.combined) if report.combined is not None else None,
    }

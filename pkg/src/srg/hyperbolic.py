"""Poincare half-plane geometry and exact LTI graph regions.

Geodesics in the closed upper half plane are circular arcs centred on the
real axis (vertical segments when the endpoints share a real part).  The
Beltrami-Klein map sends the half plane onto the closed unit disc and
geodesics to straight chords, so hyperbolic convexity reduces to Euclidean
convexity of the mapped points.  The graph of a stable LTI operator is the
hyperbolic convex hull of (the upper half of) its Nyquist locus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InfinitePreimageError, PoleOnAxisError
from .operators import RationalTF, tf_eval, tf_eval_recip

DEFAULT_FREQ_RANGE = (1e-3, 1e3)
DEFAULT_FREQ_POINTS = 2048
DEFAULT_REFINE_TOL = 1e-9
_REFINE_ROUNDS = 40

_SNAP_RTOL = 1e-10
_IM_ATOL = 1e-12


def _require_upper(z: np.ndarray) -> np.ndarray:
    bad = z.imag < -_IM_ATOL * (1.0 + np.abs(z))
    if np.any(bad):
        offender = z[np.atleast_1d(bad)][0] if z.ndim else z
        raise ValueError(f"point {offender} lies below the real axis")
    return np.where(z.imag < 0, z.real + 0.0j, z)


def bk_map(z):
    """Beltrami-Klein coordinates of a point in the closed upper half plane.

    Maps onto the closed unit disc; real-axis points land on the unit circle.
    """
    za = _require_upper(np.asarray(z, dtype=np.complex128))
    g = (za - 1j) / (za + 1j)
    w = 2.0 * g / (1.0 + np.abs(g) ** 2)
    if np.ndim(z) == 0:
        return complex(w)
    return w


def bk_inverse(w):
    """Preimage of a Klein-disc point; w = 1 corresponds to the point at infinity."""
    wa = np.asarray(w, dtype=np.complex128)
    mag = np.abs(wa)
    if np.any(mag > 1.0 + 1e-12):
        raise ValueError("bk_inverse requires |w| <= 1")
    if np.any(wa == 1.0 + 0.0j):
        raise InfinitePreimageError("w = 1 has no finite preimage")
    u = wa / (1.0 + np.sqrt(np.maximum(1.0 - mag ** 2, 0.0)))
    z = 1j * (1.0 + u) / (1.0 - u)
    z = np.where(z.imag < 0, z.real + 0.0j, z)
    if np.ndim(w) == 0:
        return complex(z)
    return z


@dataclass(frozen=True)
class GeodesicArc:
    """Minimal geodesic between two upper-half-plane points.

    Circular arcs store the real centre x0 and radius rho; vertical segments
    have equal real parts (snapped).  Equal endpoints give a degenerate
    vertical segment (a single point).
    """

    kind: str
    z1: complex
    z2: complex
    x0: Optional[float] = None
    rho: Optional[float] = None


def arc_min(z1: complex, z2: complex) -> GeodesicArc:
    z1 = complex(_require_upper(np.asarray(z1, dtype=np.complex128)))
    z2 = complex(_require_upper(np.asarray(z2, dtype=np.complex128)))
    snap = _SNAP_RTOL * (1.0 + abs(z1) + abs(z2))
    if abs(z1.real - z2.real) < snap:
        x = 0.5 * (z1.real + z2.real)
        return GeodesicArc("vertical", complex(x, z1.imag), complex(x, z2.imag))
    x0 = (abs(z2) ** 2 - abs(z1) ** 2) / (2.0 * (z2.real - z1.real))
    rho = 0.5 * (abs(z1 - x0) + abs(z2 - x0))
    return GeodesicArc("circular", z1, z2, x0, rho)


def arc_points(arc: GeodesicArc, count: int = 64) -> np.ndarray:
    """Uniform samples along the arc, endpoints included."""
    if count < 2:
        raise ValueError("need at least two samples")
    if arc.kind == "vertical":
        return arc.z1 + np.linspace(0.0, 1.0, count) * (arc.z2 - arc.z1)
    phi1 = np.arctan2(arc.z1.imag, arc.z1.real - arc.x0)
    phi2 = np.arctan2(arc.z2.imag, arc.z2.real - arc.x0)
    phi = np.linspace(phi1, phi2, count)
    return arc.x0 + arc.rho * np.exp(1j * phi)


def _monotone_chain(points: np.ndarray) -> np.ndarray:
    """Convex hull (CCW, collinear points dropped) of an (m, 2) array."""
    order = np.lexsort((points[:, 1], points[:, 0]))
    pts = points[order]
    keep = np.ones(pts.shape[0], dtype=bool)
    keep[1:] = np.any(np.diff(pts, axis=0) != 0.0, axis=1)
    pts = [tuple(p) for p in pts[keep]]
    if len(pts) == 1:
        return np.asarray(pts)

    def build(seq):
        chain = []
        for p in seq:
            while len(chain) > 1:
                (ax, ay), (bx, by) = chain[-2], chain[-1]
                if (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax) <= 0.0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = build(pts)
    upper = build(reversed(pts))
    return np.asarray(lower[:-1] + upper[:-1])


@dataclass(frozen=True)
class HHull:
    """Hyperbolic convex hull: extreme points, arc edges, and the Klein polygon.

    degenerate is None for a hull with interior, "point" for a single point,
    and "curve" when every vertex sits on one geodesic (the hull is an arc).
    """

    vertices: np.ndarray
    edges: tuple
    klein: np.ndarray
    degenerate: Optional[str] = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.complex128).copy()
        k = np.asarray(self.klein, dtype=float).copy()
        v.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "klein", k)


def _two_sweep_diameter(pts: np.ndarray) -> tuple:
    """Approximate farthest pair by two farthest-point sweeps."""
    a = pts[0]
    b = pts[np.argmax(np.sum((pts - a) ** 2, axis=1))]
    c = pts[np.argmax(np.sum((pts - b) ** 2, axis=1))]
    return b, c


def h_convex_hull(points) -> HHull:
    """Hyperbolic convex hull of a finite set of upper-half-plane points."""
    z = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    if z.size == 0:
        raise ValueError("cannot hull an empty point set")
    w = bk_map(z)
    kw = np.column_stack([w.real, w.imag])
    hull = _monotone_chain(kw)

    if hull.shape[0] == 1 or np.max(np.abs(hull - hull[0])) <= 1e-12:
        v = bk_inverse(complex(hull[0, 0], hull[0, 1]))
        return HHull(np.array([v]), (), hull[:1], "point")

    b, c = _two_sweep_diameter(hull)
    direction = c - b
    length = float(np.hypot(*direction))
    normal = np.array([-direction[1], direction[0]]) / length
    if np.max(np.abs((hull - b) @ normal)) <= 1e-9:
        t = (hull - b) @ direction
        ends = np.array([hull[np.argmin(t)], hull[np.argmax(t)]])
        verts = bk_inverse(ends[:, 0] + 1j * ends[:, 1])
        return HHull(verts, (arc_min(verts[0], verts[1]),), ends, "curve")

    verts = bk_inverse(hull[:, 0] + 1j * hull[:, 1])
    edges = tuple(
        arc_min(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))
    )
    return HHull(verts, edges, hull, None)


def hull_contains(h: HHull, z, tol: float = 1e-9):
    """Membership test in Klein coordinates (boundary inclusive, slack tol).

    Lower-half queries are mirrored to their upper-half representatives.
    Degenerate hulls admit only points within tol of the point or chord.
    """
    za = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    za = np.where(za.imag < 0, np.conj(za), za)
    w = bk_map(za)
    pts = np.column_stack([w.real, w.imag])

    if h.degenerate == "point":
        ok = np.hypot(*(pts - h.klein[0]).T) <= tol
    elif h.degenerate == "curve":
        ok = _segment_distance(pts, h.klein[0], h.klein[1]) <= tol
    else:
        ok = _polygon_margin(h.klein, pts) >= -tol
    if np.ndim(z) == 0:
        return bool(ok[0])
    return ok


def _polygon_margin(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Signed distance of each point to the nearest edge line of a CCW convex
    polygon (nonnegative inside).  Chunked so large polygons stay in memory."""
    nxt = np.roll(poly, -1, axis=0)
    edge = nxt - poly
    lengths = np.hypot(edge[:, 0], edge[:, 1])
    good = lengths > 1e-300
    ex, ey = edge[good, 0], edge[good, 1]
    px, py = poly[good, 0], poly[good, 1]
    inv_len = 1.0 / lengths[good]
    margins = np.empty(pts.shape[0])
    chunk = max(1, int(2 ** 22 / max(ex.size, 1)))
    for start in range(0, pts.shape[0], chunk):
        sl = slice(start, min(start + chunk, pts.shape[0]))
        cross = (
            ex[None, :] * (pts[sl, None, 1] - py[None, :])
            - ey[None, :] * (pts[sl, None, 0] - px[None, :])
        )
        margins[sl] = np.min(cross * inv_len[None, :], axis=1)
    return margins


def _segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = float(ab @ ab)
    t = np.clip((pts - a) @ ab / denom, 0.0, 1.0) if denom > 0 else np.zeros(len(pts))
    proj = a + t[:, None] * ab
    return np.hypot(*(pts - proj).T)


def default_frequency_grid(points: int = DEFAULT_FREQ_POINTS) -> np.ndarray:
    lo, hi = DEFAULT_FREQ_RANGE
    return np.logspace(np.log10(lo), np.log10(hi), points)


def nyquist_locus(tf: RationalTF, omegas: Optional[np.ndarray] = None) -> np.ndarray:
    """Ordered locus G(j omega) over a nonnegative grid, with the DC point
    prepended and the high-frequency limit appended."""
    if omegas is None:
        omegas = default_frequency_grid()
    omegas = np.asarray(omegas, dtype=float)
    values = tf_eval(tf, omegas)
    dc = tf_eval(tf, 0.0)
    return np.concatenate([[dc], values, [tf.limit_at_infinity]])


def _upper_rep(z: np.ndarray) -> np.ndarray:
    return np.where(z.imag < 0, np.conj(z), z)


def _refine_section(evaluate, params: np.ndarray, tol: float) -> np.ndarray:
    """Adaptively bisect a parameter grid until the Klein image of the curve
    deviates from its inscribed chords by at most tol.

    evaluate maps a parameter array to upper-half Nyquist values; the
    flatness test is done on their Klein coordinates, where hull edges are
    straight chords.
    """
    values = bk_map(_upper_rep(evaluate(params)))
    for _ in range(_REFINE_ROUNDS):
        mids = 0.5 * (params[:-1] + params[1:])
        wm = bk_map(_upper_rep(evaluate(mids)))
        chord = values[1:] - values[:-1]
        length = np.abs(chord)
        offset = wm - values[:-1]
        along = np.clip((offset * np.conj(chord)).real / np.maximum(length ** 2, 1e-300), 0.0, 1.0)
        sag = np.abs(offset - along * chord)
        need = sag > tol
        if not np.any(need):
            break
        params = np.sort(np.concatenate([params, mids[need]]))
        values = bk_map(_upper_rep(evaluate(params)))
    return _upper_rep(evaluate(params))


def refined_nyquist_points(tf: RationalTF, base_omegas: np.ndarray,
                           tol: float = DEFAULT_REFINE_TOL) -> np.ndarray:
    """Upper-half Nyquist values on a curvature-refined grid covering
    omega in [0, inf]: the base grid is bisected (in log frequency) until
    Klein-space chords are flat to tol, and both tails are refined the same
    way (the high tail in the reciprocal frequency nu = 1/omega, whose
    endpoint nu = 0 is the exact high-frequency limit)."""
    base_omegas = np.asarray(base_omegas, dtype=float)
    lo, hi = base_omegas[0], base_omegas[-1]
    low = _refine_section(lambda w: tf_eval(tf, w), np.linspace(0.0, lo, 17), tol)
    mid = _refine_section(lambda t: tf_eval(tf, np.power(10.0, t)),
                          np.log10(base_omegas), tol)
    high = _refine_section(lambda v: tf_eval_recip(tf, v),
                           np.linspace(0.0, 1.0 / hi, 17), tol)
    return np.concatenate([low, mid, high])


def lti_srg_region(tf: RationalTF, omegas: Optional[np.ndarray] = None,
                   refine_tol: Optional[float] = DEFAULT_REFINE_TOL) -> HHull:
    """Exact graph region of an LTI operator: the hyperbolic hull of the
    upper-half Nyquist points (lower-half points enter as their conjugates).

    By default the frequency grid is adaptively refined so that the hull
    boundary tracks the true curve to refine_tol in Klein coordinates; pass
    refine_tol=None to hull exactly the given grid (plus DC and the
    high-frequency limit)."""
    if omegas is None:
        omegas = default_frequency_grid()
    if refine_tol is None:
        pts = nyquist_locus(tf, omegas)
    else:
        pts = refined_nyquist_points(tf, omegas, refine_tol)
    return h_convex_hull(_upper_rep(pts))


def hull_to_dict(h: HHull) -> dict:
    edges = []
    for e in h.edges:
        if e.kind == "circular":
            edges.append({"kind": "circular", "x0": float(e.x0), "rho": float(e.rho)})
        else:
            edges.append({"kind": "vertical"})
    return {
        "vertices": [[float(v.real), float(v.imag)] for v in h.vertices],
        "edges": edges,
        "klein": [[float(x), float(y)] for x, y in h.klein],
        "degenerate": h.degenerate,
    }


def hull_from_dict(data: dict) -> HHull:
    verts = [complex(re, im) for re, im in data["vertices"]]
    return h_convex_hull(np.asarray(verts))

"""Deterministic SVG figures for clouds, regions, and Nyquist loci.

Figures are rendered on a fixed 800x800 canvas in a Euclidean view (upper
half data mirrored across the real axis) or a Beltrami-Klein view (unit
disc with mapped sets).  Output bytes depend only on the artifacts: the
SVG hash salt is pinned and no timestamps are embedded.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib import rc_context
from matplotlib.figure import Figure

from .hyperbolic import HHull, arc_points, bk_map
from .regions import (
    CircleCurve,
    CloudRegion,
    Disc,
    DiscComplement,
    EmptyRegion,
    FullPlane,
    HalfPlane,
    HullRegion,
    Region,
    boundary_samples,
)
from .sampler import SrgCloud

_CANVAS_INCHES = 800.0 / 72.0
_HASH_SALT = "srg-toolkit"
_MAX_DRAWN_POINTS = 20000
_COLORS = ("tab:blue", "tab:red", "tab:green", "tab:orange", "tab:purple", "tab:brown")


@dataclass
class PlotArtifacts:
    """What to draw: labelled clouds, regions, and Nyquist loci."""

    clouds: List[Tuple[str, SrgCloud]] = field(default_factory=list)
    regions: List[Tuple[str, Region]] = field(default_factory=list)
    loci: List[Tuple[str, np.ndarray]] = field(default_factory=list)

    def empty(self) -> bool:
        return not (self.clouds or self.regions or self.loci)


def _decimate(z: np.ndarray) -> np.ndarray:
    if z.size <= _MAX_DRAWN_POINTS:
        return z
    stride = int(np.ceil(z.size / _MAX_DRAWN_POINTS))
    return z[::stride]


def _hull_outline(hull: HHull) -> np.ndarray:
    if hull.degenerate == "point":
        return hull.vertices.copy()
    per_edge = max(2, int(8192 / max(len(hull.edges), 1)))
    pts = [arc_points(e, per_edge) for e in hull.edges]
    return np.concatenate(pts) if pts else hull.vertices.copy()


def _region_outline(region: Region) -> Optional[np.ndarray]:
    """Closed boundary polyline of the region in the z plane (both halves)."""
    if isinstance(region, (Disc, DiscComplement, CircleCurve)):
        phi = np.linspace(0.0, 2.0 * np.pi, 512)
        return region.c + region.rho * np.exp(1j * phi)
    if isinstance(region, HalfPlane):
        return None  # drawn as a vertical boundary line
    if isinstance(region, HullRegion):
        upper = _hull_outline(region.hull)
        return np.concatenate([upper, np.conj(upper[::-1])])
    return None


def _draw_euclidean(ax, artifacts: PlotArtifacts) -> None:
    color_iter = iter(_COLORS * 8)
    for label, region in artifacts.regions:
        color = next(color_iter)
        if isinstance(region, (FullPlane, EmptyRegion)):
            ax.plot([], [], color=color, label=f"{label} ({type(region).__name__})")
            continue
        if isinstance(region, HalfPlane):
            ax.axvline(region.c, color=color, linestyle="--", label=f"{label} (boundary)")
            continue
        if isinstance(region, CloudRegion):
            z = _decimate(region.cloud.z)
            ax.scatter(np.concatenate([z.real, z.real]),
                       np.concatenate([z.imag, -z.imag]),
                       s=2, color=color, label=label)
            continue
        outline = _region_outline(region)
        if outline is not None:
            ax.plot(outline.real, outline.imag, color=color, label=label)
            if isinstance(region, (Disc, HullRegion)):
                ax.fill(outline.real, outline.imag, color=color, alpha=0.12)
    for label, locus in artifacts.loci:
        color = next(color_iter)
        ax.plot(locus.real, locus.imag, color=color, lw=1.2, label=label)
        ax.plot(locus.real, -locus.imag, color=color, lw=1.2)
    for label, cloud in artifacts.clouds:
        color = next(color_iter)
        z = _decimate(cloud.z)
        ax.scatter(np.concatenate([z.real, z.real]),
                   np.concatenate([z.imag, -z.imag]),
                   s=2, color=color, alpha=0.7, label=label)
    ax.axhline(0.0, color="0.8", lw=0.6, zorder=0)
    ax.axvline(0.0, color="0.8", lw=0.6, zorder=0)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")


def _to_upper(z: np.ndarray) -> np.ndarray:
    return np.where(z.imag < 0, np.conj(z), z)


def _draw_klein(ax, artifacts: PlotArtifacts) -> None:
    phi = np.linspace(0.0, 2.0 * np.pi, 512)
    ax.plot(np.cos(phi), np.sin(phi), color="0.4", lw=1.0, label="unit disc")
    color_iter = iter(_COLORS * 8)
    for label, region in artifacts.regions:
        color = next(color_iter)
        if isinstance(region, HullRegion):
            k = region.hull.klein
            if k.shape[0] > 8192:
                k = k[:: int(np.ceil(k.shape[0] / 8192))]
            closed = np.vstack([k, k[:1]])
            ax.plot(closed[:, 0], closed[:, 1], color=color, label=label)
            if region.hull.degenerate is None:
                ax.fill(closed[:, 0], closed[:, 1], color=color, alpha=0.12)
            continue
        if isinstance(region, (FullPlane, EmptyRegion)):
            ax.plot([], [], color=color, label=f"{label} ({type(region).__name__})")
            continue
        if isinstance(region, CloudRegion):
            w = bk_map(_to_upper(_decimate(region.cloud.z)))
            ax.scatter(w.real, w.imag, s=2, color=color, label=label)
            continue
        samples = _to_upper(boundary_samples(region, 1024))
        w = bk_map(samples)
        ax.scatter(w.real, w.imag, s=1.5, color=color, label=label)
    for label, locus in artifacts.loci:
        color = next(color_iter)
        w = bk_map(_to_upper(locus))
        ax.plot(w.real, w.imag, color=color, lw=1.2, label=label)
    for label, cloud in artifacts.clouds:
        color = next(color_iter)
        w = bk_map(_to_upper(_decimate(cloud.z)))
        ax.scatter(w.real, w.imag, s=2, color=color, alpha=0.7, label=label)
    ax.set_xlim(-1.08, 1.08)
    ax.set_ylim(-1.08, 1.08)
    ax.set_aspect("equal", adjustable="box")
    ax.set_xlabel("Klein x")
    ax.set_ylabel("Klein y")


def render_svg(artifacts: PlotArtifacts, view: str = "euclidean") -> bytes:
    """Render the artifacts to SVG bytes; identical inputs give identical bytes."""
    if artifacts.empty():
        raise ValueError("nothing to plot: artifact list is empty")
    if view not in ("euclidean", "klein"):
        raise ValueError(f"unknown view {view!r}; expected 'euclidean' or 'klein'")
    with rc_context({"svg.hashsalt": _HASH_SALT}):
        fig = Figure(figsize=(_CANVAS_INCHES, _CANVAS_INCHES))
        ax = fig.add_subplot(1, 1, 1)
        if view == "euclidean":
            _draw_euclidean(ax, artifacts)
        else:
            _draw_klein(ax, artifacts)
        ax.legend(loc="upper right", fontsize=9)
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()

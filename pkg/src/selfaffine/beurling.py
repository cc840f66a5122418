"""Exact Beurling-type density scans over sliding cube windows.

The upper scan maximizes window mass over all placements of a closed cube
of side N; for that problem the optimum is attained with the window's
lower-left corner at a support point, so the scan over point anchors is
exact.  The lower scan minimizes over a continuum of placements inside the
origin-symmetric bounding box of the support, evaluating the piecewise
constant count once per cell between critical edge positions.

Finite truncations under-count the infinite expansion far from the origin.
A lower-scan window is therefore only *trusted* when the next level assigns
it the same count; untrusted entries are reported but carry trusted=False.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrix, UnsupportedDimension
from .pointset import WeightedPointSet, prefix_weights

#: Relative tolerance for closed-window boundary membership.
BOUNDARY_TOL = 1e-12

#: Number of window sizes in a natural (geometric, ratio 2) schedule.
NATURAL_SCHEDULE_LEN = 9


@dataclass(frozen=True)
class WindowSchedule:
    """Strictly increasing positive window side lengths."""

    sizes: tuple[float, ...]

    def __post_init__(self):
        if len(self.sizes) == 0:
            raise ValueError("schedule must contain at least one size")
        arr = np.asarray(self.sizes, dtype=float)
        if arr[0] <= 0 or np.any(np.diff(arr) <= 0):
            raise ValueError("window sizes must be positive and strictly increasing")
        object.__setattr__(self, "sizes", tuple(float(s) for s in arr))

    @classmethod
    def geometric(cls, start: float, stop: float, count: int) -> "WindowSchedule":
        if count < 1:
            raise ValueError("count must be at least 1")
        if count == 1:
            return cls((float(stop),))
        ratio = (stop / start) ** (1.0 / (count - 1))
        sizes = [start * ratio**i for i in range(count - 1)] + [float(stop)]
        return cls(tuple(sizes))

    @classmethod
    def linear(cls, start: float, stop: float, count: int) -> "WindowSchedule":
        if count < 1:
            raise ValueError("count must be at least 1")
        return cls(tuple(np.linspace(start, stop, count)))


@dataclass(frozen=True)
class WindowEntry:
    """Scan result at one window size; sup and inf halves fill independently."""

    size: float
    sup_count: int | None = None
    sup_value: float | None = None
    argmax_center: tuple[float, ...] | None = None
    inf_count: int | None = None
    inf_value: float | None = None
    argmin_center: tuple[float, ...] | None = None
    trusted: bool | None = None


@dataclass(frozen=True)
class DensityEstimate:
    dim: int
    entries: tuple[WindowEntry, ...]
    level: int | None
    max_multiplicity: int


@dataclass(frozen=True)
class MeasureResult:
    """A reciprocal-density measure estimate; zero when flagged divergent."""

    value: float
    divergent: bool


def natural_schedule(pts: WeightedPointSet, count: int = NATURAL_SCHEDULE_LEN) -> WindowSchedule:
    """Geometric ratio-2 schedule whose largest size is half the support extent."""
    extent = float(np.max(pts.points.max(axis=0) - pts.points.min(axis=0)))
    if extent <= 0:
        raise ValueError("support extent is zero; no natural window scale")
    top = extent / 2.0
    return WindowSchedule(tuple(top / 2 ** (count - 1 - i) for i in range(count)))


def _require_dim(pts: WeightedPointSet, op: str) -> int:
    if pts.dim not in (1, 2):
        raise UnsupportedDimension(f"{op} supports dimensions 1 and 2 only")
    return pts.dim


def _sup_1d(xs: np.ndarray, pref: np.ndarray, size: float):
    tol = BOUNDARY_TOL * size
    hi = np.searchsorted(xs, xs + (size + tol), side="right")
    counts = pref[hi] - pref[: len(xs)]
    i = int(np.argmax(counts))  # first maximum: smallest anchor wins ties
    return int(counts[i]), (float(xs[i] + size / 2),)


def _sup_2d(points: np.ndarray, weights: np.ndarray, size: float):
    tol = BOUNDARY_TOL * size
    xs = points[:, 0]
    ys = points[:, 1]
    hi_x = np.searchsorted(xs, xs + (size + tol), side="right")
    best = -1
    best_center = None
    for i in range(len(points)):
        if i > 0 and xs[i] == xs[i - 1]:
            continue  # same x-slab as the previous anchor
        hi = hi_x[i]
        slab_y = ys[i:hi]
        slab_w = weights[i:hi]
        order = np.argsort(slab_y, kind="stable")
        sy = slab_y[order]
        pref = np.concatenate([[0], np.cumsum(slab_w[order])])
        hi_y = np.searchsorted(sy, sy + (size + tol), side="right")
        counts = pref[hi_y] - pref[: len(sy)]
        j = int(np.argmax(counts))
        if counts[j] > best:
            best = int(counts[j])
            best_center = (float(xs[i] + size / 2), float(sy[j] + size / 2))
    return best, best_center


def upper_density_profile(
    pts: WeightedPointSet,
    schedule: WindowSchedule,
    level: int | None = None,
) -> DensityEstimate:
    """Exact sup of window mass / volume over all cube placements, per size.

    Ties in the argmax go to the lexicographically smallest window corner.
    """
    dim = _require_dim(pts, "upper_density_profile")
    entries = []
    if dim == 1:
        xs = pts.coords()
        pref = prefix_weights(pts)
        for size in schedule.sizes:
            count, center = _sup_1d(xs, pref, size)
            entries.append(
                WindowEntry(
                    size=size,
                    sup_count=count,
                    sup_value=count / size,
                    argmax_center=center,
                )
            )
    else:
        for size in schedule.sizes:
            count, center = _sup_2d(pts.points, pts.weights, size)
            entries.append(
                WindowEntry(
                    size=size,
                    sup_count=count,
                    sup_value=count / size**2,
                    argmax_center=center,
                )
            )
    return DensityEstimate(
        dim=dim,
        entries=tuple(entries),
        level=level,
        max_multiplicity=int(pts.weights.max()),
    )


def _counts_at_1d(xs, pref, centers, size):
    tol = BOUNDARY_TOL * size
    lo = np.searchsorted(xs, centers - size / 2 - tol, side="left")
    hi = np.searchsorted(xs, centers + size / 2 + tol, side="right")
    return pref[hi] - pref[lo]


def _candidate_centers(breaks: np.ndarray, zlo: float, zhi: float) -> np.ndarray:
    """Midpoints of the cells cut by ``breaks`` in [zlo, zhi], plus both ends."""
    inner = np.unique(breaks[(breaks > zlo) & (breaks < zhi)])
    grid = np.concatenate([[zlo], inner, [zhi]])
    return np.concatenate([[zlo], (grid[:-1] + grid[1:]) / 2.0, [zhi]])


def _inf_1d(pts, nxt, size, zlo, zhi):
    xs = pts.coords()
    pref = prefix_weights(pts)
    breaks = np.concatenate([xs - size / 2, xs + size / 2])
    if nxt is not None:
        xs2 = nxt.coords()
        pref2 = prefix_weights(nxt)
        breaks = np.concatenate([breaks, xs2 - size / 2, xs2 + size / 2])
    centers = _candidate_centers(breaks, zlo, zhi)
    counts = _counts_at_1d(xs, pref, centers, size)
    if nxt is None:
        stable = np.ones(len(centers), dtype=bool)
        any_stable = False
    else:
        stable = counts == _counts_at_1d(xs2, pref2, centers, size)
        any_stable = bool(stable.any())
        if not any_stable:
            stable = np.ones(len(centers), dtype=bool)
    pool = np.where(stable)[0]
    j = pool[int(np.argmin(counts[pool]))]
    return int(counts[j]), (float(centers[j]),), any_stable


def _inf_2d(pts, nxt, size, zlo, zhi):
    pointsets = [pts] if nxt is None else [pts, nxt]
    cx = np.concatenate(
        [np.concatenate([q.points[:, 0] - size / 2, q.points[:, 0] + size / 2]) for q in pointsets]
    )
    cy = np.concatenate(
        [np.concatenate([q.points[:, 1] - size / 2, q.points[:, 1] + size / 2]) for q in pointsets]
    )
    centers_x = _candidate_centers(cx, zlo[0], zhi[0])
    centers_y = _candidate_centers(cy, zlo[1], zhi[1])
    tol = BOUNDARY_TOL * size

    def slab_counts(q, x):
        """Counts at (x, centers_y) for every y center, one x-slab at a time."""
        px = q.points[:, 0]
        lo = np.searchsorted(px, x - size / 2 - tol, side="left")
        hi = np.searchsorted(px, x + size / 2 + tol, side="right")
        sy = np.sort(q.points[:, 1][lo:hi], kind="stable")
        wy = q.weights[lo:hi][np.argsort(q.points[:, 1][lo:hi], kind="stable")]
        pref = np.concatenate([[0], np.cumsum(wy)])
        ylo = np.searchsorted(sy, centers_y - size / 2 - tol, side="left")
        yhi = np.searchsorted(sy, centers_y + size / 2 + tol, side="right")
        return pref[yhi] - pref[ylo]

    best = None
    best_center = None
    any_stable = False
    fallback = None
    fallback_center = None
    for x in centers_x:
        counts = slab_counts(pts, x)
        if nxt is None:
            stable = np.ones(len(counts), dtype=bool)
        else:
            stable = counts == slab_counts(nxt, x)
        pool = np.where(stable)[0]
        if len(pool):
            any_stable = any_stable or nxt is not None
            j = pool[int(np.argmin(counts[pool]))]
            if best is None or counts[j] < best:
                best = int(counts[j])
                best_center = (float(x), float(centers_y[j]))
        j = int(np.argmin(counts))
        if fallback is None or counts[j] < fallback:
            fallback = int(counts[j])
            fallback_center = (float(x), float(centers_y[j]))
    if nxt is not None and not any_stable:
        return fallback, fallback_center, False
    if nxt is None:
        return fallback, fallback_center, False
    return best, best_center, True


def lower_density_profile(
    pts: WeightedPointSet,
    schedule: WindowSchedule,
    next_level_pts: WeightedPointSet | None = None,
    level: int | None = None,
) -> DensityEstimate:
    """Exact inf of window mass / volume over placements in the symmetric box.

    Windows range over every position of the closed cube inside the
    origin-symmetric bounding box of the support (per-axis radius
    max |coordinate|); that family can see regions the expansion has not
    reached, which is exactly what distinguishes a one-sided support from a
    filled-out one.  With ``next_level_pts`` supplied, the infimum is taken
    over windows whose count agrees at both levels and the entry is marked
    trusted; with no stable window (or no next level) the raw infimum is
    reported untrusted.  Sizes exceeding the box are skipped.
    """
    dim = _require_dim(pts, "lower_density_profile")
    if next_level_pts is not None and next_level_pts.dim != dim:
        raise UnsupportedDimension("next_level_pts dimension differs")
    radius = np.max(np.abs(pts.points), axis=0)
    entries = []
    for size in schedule.sizes:
        if np.any(2 * radius < size):
            continue
        zlo = -radius + size / 2
        zhi = radius - size / 2
        if dim == 1:
            count, center, trusted = _inf_1d(
                pts, next_level_pts, size, float(zlo[0]), float(zhi[0])
            )
        else:
            count, center, trusted = _inf_2d(pts, next_level_pts, size, zlo, zhi)
        entries.append(
            WindowEntry(
                size=size,
                inf_count=count,
                inf_value=count / size**dim,
                argmin_center=center,
                trusted=trusted,
            )
        )
    return DensityEstimate(
        dim=dim,
        entries=tuple(entries),
        level=level,
        max_multiplicity=int(pts.weights.max()),
    )


def trend_divergent(values) -> bool:
    """Heuristic growth test: last three strictly increase and final > 10x first."""
    vals = list(values)
    if len(vals) < 3:
        return False
    return vals[-3] < vals[-2] < vals[-1] and vals[-1] > 10 * vals[0]


def lebesgue_from_density(profile: DensityEstimate) -> MeasureResult:
    """Reciprocal of the sup density at the largest window size.

    Returns zero with the divergent flag when the profile certifies an
    unbounded density: either a collision in the underlying expansion (a
    point of multiplicity >= 2 doubles along its amplification sequence, so
    the true sup is infinite) or sup values still growing with window size
    at the largest scales.
    """
    sup_entries = [e for e in profile.entries if e.sup_value is not None]
    if not sup_entries:
        raise ValueError("profile has no sup entries")
    values = [e.sup_value for e in sup_entries]
    if profile.max_multiplicity >= 2 or trend_divergent(values):
        return MeasureResult(value=0.0, divergent=True)
    return MeasureResult(value=1.0 / values[-1], divergent=False)


def rescale_points(pts: WeightedPointSet, matrix) -> WeightedPointSet:
    """Apply an invertible linear map to every point, keeping weights."""
    c = np.asarray(matrix, dtype=float)
    if c.ndim == 0:
        c = c.reshape(1, 1)
    if c.shape != (pts.dim, pts.dim):
        raise SingularMatrix(f"rescale matrix must be {pts.dim}x{pts.dim}")
    if float(np.linalg.det(c)) == 0.0:
        raise SingularMatrix("rescale matrix is singular")
    return WeightedPointSet(pts.points @ c.T, pts.weights)

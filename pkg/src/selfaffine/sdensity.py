"""Upper s-densities, discrete convolution, and invariant-measure sampling.

The s-density scan generalizes the window scan: it maximizes
mass / diameter^s over intervals with both endpoints at support points and
diameter at least a threshold r.  Its reciprocal at the largest threshold
estimates the s-dimensional Hausdorff measure of the attractor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beurling import MeasureResult, trend_divergent
from .errors import BudgetExceeded, DimensionMismatch, UnsupportedDimension
from .expansion import DEFAULT_CAP, expand_level
from .pairs import SelfAffinePair
from .pointset import (
    WeightedPointSet,
    _canonicalize,
    prefix_weights,
    weight_in_interval,
)

#: Relative tolerance admitting intervals whose diameter sits at a threshold.
THRESHOLD_TOL = 1e-12


@dataclass(frozen=True)
class SDensityEntry:
    threshold: float
    sup_value: float
    sup_count: int
    argmax: tuple[float, float]


@dataclass(frozen=True)
class SDensityEstimate:
    s: float
    entries: tuple[SDensityEntry, ...]
    level: int | None
    max_multiplicity: int


@dataclass(frozen=True)
class MeasureSample:
    """Points drawn from the normalized invariant measure of a pair."""

    points: np.ndarray
    seed: int
    count: int

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class RenormCheck:
    lhs: float
    rhs: float
    stderr: float


def natural_thresholds(pts: WeightedPointSet, count: int = 9):
    """Geometric ratio-2 thresholds whose largest value is the support extent."""
    xs = pts.coords()
    extent = float(xs[-1] - xs[0])
    if extent <= 0:
        raise ValueError("support extent is zero; no natural threshold scale")
    return tuple(extent / 2 ** (count - 1 - i) for i in range(count))


def interval_value(pts: WeightedPointSet, a: float, b: float, s: float) -> float:
    """Mass of [a, b] divided by (b - a)^s."""
    if b <= a:
        raise ValueError("interval must have positive length")
    return weight_in_interval(pts, a, b) / (b - a) ** s


def upper_s_density_profile(
    pts: WeightedPointSet,
    s: float,
    thresholds,
    level: int | None = None,
) -> SDensityEstimate:
    """Exact sup of mass / diameter^s over point-bounded intervals, per threshold.

    For each threshold r only intervals of diameter >= r compete, so the sup
    is nonincreasing in r.  Thresholds with no admissible interval (for
    instance r beyond the support extent) produce no entry.
    """
    if pts.dim != 1:
        raise UnsupportedDimension("s-density scan supports dimension 1 only")
    if not 0 < s <= 1:
        raise ValueError("s must lie in (0, 1]")
    xs = pts.coords()
    pref = prefix_weights(pts)
    total = pref[-1]
    entries = []
    for r in sorted(float(t) for t in thresholds):
        r_adm = r * (1.0 - THRESHOLD_TOL)
        best = -np.inf
        best_count = 0
        best_pair = None
        for i in range(len(xs)):
            # every admissible interval from i has value <= remaining / r_adm^s
            if (total - pref[i]) / r_adm**s <= best:
                break
            j0 = np.searchsorted(xs, xs[i] + r_adm, side="left")
            if j0 >= len(xs):
                continue
            counts = pref[j0 + 1 :] - pref[i]
            lengths = xs[j0:] - xs[i]
            values = counts / lengths**s
            j = int(np.argmax(values))
            if values[j] > best:
                best = float(values[j])
                best_count = int(counts[j])
                best_pair = (float(xs[i]), float(xs[j0 + j]))
        if best_pair is not None:
            entries.append(
                SDensityEntry(
                    threshold=r,
                    sup_value=best,
                    sup_count=best_count,
                    argmax=best_pair,
                )
            )
    return SDensityEstimate(
        s=s,
        entries=tuple(entries),
        level=level,
        max_multiplicity=int(pts.weights.max()),
    )


def hausdorff_from_sdensity(profile: SDensityEstimate) -> MeasureResult:
    """Reciprocal of the sup s-density at the largest threshold.

    Divergence mirrors the window-density case: a collision certifies an
    infinite s-density (multiplicities amplify without bound), and a growing
    tail of sup values is flagged as well.
    """
    if not profile.entries:
        raise ValueError("profile has no entries")
    values = [e.sup_value for e in profile.entries]
    if profile.max_multiplicity >= 2 or trend_divergent(values):
        return MeasureResult(value=0.0, divergent=True)
    return MeasureResult(value=1.0 / values[-1], divergent=False)


def discrete_convolve(a: WeightedPointSet, b: WeightedPointSet) -> WeightedPointSet:
    """Convolution of discrete measures: all pairwise sums, weights multiplied."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"operand dimensions {a.dim} and {b.dim} differ")
    pts = (a.points[:, None, :] + b.points[None, :, :]).reshape(-1, a.dim)
    w = (a.weights[:, None] * b.weights[None, :]).reshape(-1)
    pts, w = _canonicalize(pts, w)
    return WeightedPointSet._from_canonical(pts, w)


_BLOCK = 128


def _chaos_game_1d(binv: float, digits: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """All iterates of x -> binv * (x + d) from x0 = 0, evaluated blockwise.

    After t steps x_t = binv^t x_0 + sum_u binv^(t-u) d_u, so within a block
    of length L the iterates are one lower-triangular matrix-vector product
    plus a carry term from the incoming state.
    """
    steps = len(idx)
    t = np.arange(1, _BLOCK + 1)
    u = np.arange(_BLOCK)
    expo = t[:, None] - u[None, :]
    tri = np.where(expo >= 1, binv ** np.clip(expo, 1, None), 0.0)
    pows = binv**t
    out = np.empty(steps)
    x = 0.0
    d = digits[idx]
    for start in range(0, steps, _BLOCK):
        blk = d[start : start + _BLOCK]
        L = len(blk)
        vals = tri[:L, :L] @ blk + pows[:L] * x
        out[start : start + L] = vals
        x = vals[-1]
    return out


def sample_self_similar_measure(
    pair: SelfAffinePair,
    count: int,
    seed: int,
    burn_in: int = 64,
) -> MeasureSample:
    """Chaos-game sampler for the normalized invariant measure.

    Iterates x -> B^-1 (x + d) from the origin with digits drawn uniformly
    at random, discards ``burn_in`` iterates, and keeps the next ``count``.
    Randomness comes from numpy's PCG64 generator seeded explicitly, which
    produces identical streams across platforms, so identical
    (seed, count, burn_in) yield identical samples bit for bit.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if burn_in < 0:
        raise ValueError("burn_in must be nonnegative")
    rng = np.random.default_rng(seed)
    steps = burn_in + count
    idx = rng.integers(0, pair.m, size=steps)
    if pair.dim == 1:
        binv = float(pair.matrix.inverse[0, 0])
        digits = pair.digits.vectors[:, 0]
        xs = _chaos_game_1d(binv, digits, idx)[burn_in:]
        points = xs[:, None].copy()
    else:
        binv = pair.matrix.inverse
        shifts = pair.digits.vectors @ binv.T
        x = np.zeros(pair.dim)
        points = np.empty((count, pair.dim))
        for t in range(steps):
            x = binv @ x + shifts[idx[t]]
            if t >= burn_in:
                points[t - burn_in] = x
    points.flags.writeable = False
    return MeasureSample(points=points, seed=seed, count=count)


def _in_box(points: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return np.all((points >= lo) & (points <= hi), axis=1)


def check_renormalization(
    pair: SelfAffinePair,
    window,
    n_steps: int,
    sample: MeasureSample,
    cap: int = DEFAULT_CAP,
) -> RenormCheck:
    """Monte Carlo check of the exact renormalization identity.

    The invariant measure sigma satisfies
    sigma(B^-N W) = m^-N * sum over level-N expansion points p of
    sigma(W - p), counted with multiplicity.  Both sides are estimated on
    the same sample; ``stderr`` is the paired standard error of their
    difference.  ``window`` is an axis box given as (lo, hi) vectors (plain
    floats in dimension 1).
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    if sample.dim != pair.dim:
        raise DimensionMismatch("sample dimension differs from pair dimension")
    if pair.m**n_steps > cap:
        raise BudgetExceeded(f"level {n_steps} enumeration exceeds cap {cap}")
    lo, hi = window
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if np.any(hi <= lo):
        raise ValueError("window must have positive extent on every axis")

    mu = expand_level(pair, n_steps, cap)
    x = sample.points
    bn = np.linalg.matrix_power(pair.matrix.entries, n_steps)
    lhs_ind = _in_box(x @ bn.T, lo, hi).astype(float)
    f = np.zeros(len(x))
    for p, w in zip(mu.points, mu.weights):
        f += w * _in_box(x + p, lo, hi)
    f /= float(pair.m**n_steps)
    diff = lhs_ind - f
    stderr = float(np.std(diff, ddof=1) / np.sqrt(len(x)))
    return RenormCheck(lhs=float(lhs_ind.mean()), rhs=float(f.mean()), stderr=stderr)

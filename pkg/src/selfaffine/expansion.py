"""Finite digit expansions and their collision structure.

Level-k expansions are all sums  l_0 + B l_1 + ... + B^(k-1) l_(k-1)  with
digits l_j.  The level-k measure places one unit of mass per digit string,
so a point's weight is its number of representations.  Everything here is
exact enumeration; the mass cap keeps it at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import BudgetExceeded, NotACollision
from .pairs import SelfAffinePair
from .pointset import MERGE_TOL, WeightedPointSet, _canonicalize

#: Default cap on total mass m**k of an enumeration.
DEFAULT_CAP = 2**24


@dataclass(frozen=True)
class ExpansionReport:
    level: int
    distinct_count: int
    has_collision: bool
    max_multiplicity: int
    min_separation: float


@dataclass(frozen=True)
class CollisionWitness:
    """An amplified collision: point with certified multiplicity >= 2**copies."""

    point: np.ndarray
    level: int
    copies: int
    bound: int
    verified: bool
    observed_multiplicity: int | None


def _check_budget(m: int, k: int, cap: int) -> None:
    if m**k > cap:
        raise BudgetExceeded(f"mass {m}**{k} exceeds cap {cap}")


def expand_level(pair: SelfAffinePair, k: int, cap: int = DEFAULT_CAP) -> WeightedPointSet:
    """Enumerate the level-k expansion measure of a pair.

    Builds incrementally: the level-j set is the level-(j-1) set translated
    by B^(j-1) d for every digit d, merging coincident sums so weights count
    representations.  Total mass is exactly m**k.
    """
    if k < 1:
        raise ValueError("level must be at least 1")
    m = pair.m
    _check_budget(m, k, cap)
    digits = pair.digits.vectors
    b = pair.matrix.entries
    # digit sets are stored sorted and distinct, so level 1 is already canonical
    pts = digits.copy()
    w = np.ones(len(digits), dtype=np.int64)
    power = np.eye(pair.dim)
    for _ in range(1, k):
        power = b @ power
        shifts = digits @ power.T
        new_pts = (pts[:, None, :] + shifts[None, :, :]).reshape(-1, pair.dim)
        new_w = np.repeat(w, m)
        pts, w = _canonicalize(new_pts, new_w)
    return WeightedPointSet._from_canonical(pts, w)


def _min_separation(pts: WeightedPointSet) -> float:
    if len(pts) < 2:
        return float("inf")
    if pts.dim == 1:
        return float(np.diff(pts.coords()).min())
    tree = cKDTree(pts.points)
    dists, _ = tree.query(pts.points, k=2)
    return float(dists[:, 1].min())


def analyze_expansion(pts: WeightedPointSet, m: int, k: int) -> ExpansionReport:
    """Summarize a level-k expansion: distinct count, collisions, min gap.

    ``min_separation`` is the smallest pairwise Euclidean distance between
    distinct points (infinite for a single point).
    """
    max_mult = int(pts.weights.max())
    return ExpansionReport(
        level=k,
        distinct_count=len(pts),
        has_collision=max_mult >= 2,
        max_multiplicity=max_mult,
        min_separation=_min_separation(pts),
    )


def collision_witness(
    pair: SelfAffinePair,
    point,
    k: int,
    copies: int,
    cap: int = DEFAULT_CAP,
) -> CollisionWitness:
    """Amplify a level-k collision into a point of multiplicity >= 2**copies.

    ``point`` must have multiplicity at least 2 in the level-k expansion.
    The witness is  sum_{j<copies} B^(k j) a ; concatenating either
    representation of ``point`` in each of the ``copies`` blocks yields
    2**copies distinct digit strings for it.  When the level copies*k
    enumeration fits the cap the bound is verified by direct lookup;
    otherwise the witness is returned unverified.
    """
    if copies < 1:
        raise ValueError("copies must be at least 1")
    a = np.atleast_1d(np.asarray(point, dtype=float))
    mu_k = expand_level(pair, k, cap)
    if mu_k.weight_at(a) < 2:
        raise NotACollision(f"point {a} has multiplicity < 2 at level {k}")

    b = pair.matrix.entries
    block = np.linalg.matrix_power(b, k)
    z = np.zeros(pair.dim)
    power = np.eye(pair.dim)
    for _ in range(copies):
        z = z + power @ a
        power = power @ block
    bound = 2**copies

    level = copies * k
    try:
        _check_budget(pair.m, level, cap)
    except BudgetExceeded:
        return CollisionWitness(
            point=z,
            level=level,
            copies=copies,
            bound=bound,
            verified=False,
            observed_multiplicity=None,
        )
    observed = expand_level(pair, level, cap).weight_at(z)
    return CollisionWitness(
        point=z,
        level=level,
        copies=copies,
        bound=bound,
        verified=observed >= bound,
        observed_multiplicity=observed,
    )

"""Headline guarantees, one test per criterion, at their stated tolerances.

Each test prints a single ``criterion N: PASS/FAIL (...)`` line with the
measured numbers (visible with ``pytest -s`` and on any failure); the
pytest verdicts themselves give the per-criterion pass/fail record.
"""
import itertools

import numpy as np
import pytest

from selfaffine import (
    LABEL_BOUNDARY,
    LABEL_INTERIOR,
    CantorPair,
    WeightedPointSet,
    WindowSchedule,
    cantor_hausdorff,
    cantor_sdensity_sequence,
    check_renormalization,
    classify_origin,
    collision_witness,
    count_upto,
    expand_level,
    hausdorff_from_sdensity,
    lebesgue_from_density,
    lower_density_profile,
    natural_schedule,
    natural_thresholds,
    raster_attractor,
    rescale_points,
    sample_self_similar_measure,
    translation_dominance_check,
    upper_density_profile,
    upper_s_density_profile,
    validate_pair,
)


def _finish(n, checks):
    ok = all(flag for flag, _ in checks)
    detail = "; ".join(d for _, d in checks)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


@pytest.fixture(scope="module")
def doubling():
    return validate_pair([[2.0]], [[0.0], [1.0]])


@pytest.fixture(scope="module")
def negative_doubling():
    return validate_pair([[-2.0]], [[0.0], [1.0]])


@pytest.fixture(scope="module")
def collider():
    return validate_pair([[4.0]], [[0.0], [1.0], [2.0], [8.0]])


@pytest.fixture(scope="module")
def overfull():
    return validate_pair([[1.5]], [[0.0], [1.0]])


@pytest.fixture(scope="module")
def cantor32():
    return validate_pair([[3.0]], [[0.0], [2.0]])


@pytest.fixture(scope="module")
def doubling_profiles(doubling):
    pts = expand_level(doubling, 16)
    nxt = expand_level(doubling, 17)
    schedule = natural_schedule(pts)
    return {
        "upper_natural": upper_density_profile(pts, schedule, level=16),
        "lower_natural": lower_density_profile(pts, schedule, nxt, level=16),
        "upper_geo": upper_density_profile(
            pts, WindowSchedule.geometric(16.0, 4096.0, 9), level=16
        ),
    }


@pytest.fixture(scope="module")
def negative_profiles(negative_doubling):
    pts = expand_level(negative_doubling, 16)
    nxt = expand_level(negative_doubling, 17)
    schedule = natural_schedule(pts)
    return {
        "upper_natural": upper_density_profile(pts, schedule, level=16),
        "lower_natural": lower_density_profile(pts, schedule, nxt, level=16),
    }


def test_criterion_01_unit_tiles(doubling, negative_doubling, doubling_profiles, negative_profiles):
    checks = []

    upper = doubling_profiles["upper_geo"]
    at4096 = next(e for e in upper.entries if e.size == 4096.0)
    checks.append(
        (1.0 <= at4096.sup_value <= 1.0005, f"doubling upper@4096={at4096.sup_value:.8f}")
    )
    lebesgue = lebesgue_from_density(upper)
    checks.append(
        (
            0.9995 <= lebesgue.value <= 1.0 and not lebesgue.divergent,
            f"doubling lebesgue={lebesgue.value:.8f}",
        )
    )
    _, estimate = raster_attractor(doubling, 4096)
    checks.append((1.0 <= estimate.outer <= 1.01, f"doubling raster={estimate.outer:.8f}"))

    upper_n = negative_profiles["upper_natural"]
    top = upper_n.entries[-1]
    checks.append((0.99 <= top.sup_value <= 1.011, f"negative upper={top.sup_value:.8f}"))
    trusted = [e for e in negative_profiles["lower_natural"].entries if e.trusted]
    low = trusted[-1]
    checks.append((0.99 <= low.inf_value <= 1.011, f"negative lower={low.inf_value:.8f}"))
    lebesgue_n = lebesgue_from_density(upper_n)
    checks.append(
        (abs(lebesgue_n.value - 1.0) <= 0.01, f"negative lebesgue={lebesgue_n.value:.8f}")
    )
    _, estimate_n = raster_attractor(negative_doubling, 4096)
    checks.append(
        (1.0 <= estimate_n.outer <= 1.01, f"negative raster={estimate_n.outer:.8f}")
    )
    _finish(1, checks)


def test_criterion_02_origin_classification(
    doubling, negative_doubling, doubling_profiles, negative_profiles
):
    lebesgue = lebesgue_from_density(doubling_profiles["upper_natural"])
    report = classify_origin(
        doubling,
        doubling_profiles["upper_natural"],
        doubling_profiles["lower_natural"],
        lebesgue.value,
    )
    checks = [(report.label == LABEL_BOUNDARY, f"doubling label={report.label}")]

    lebesgue_n = lebesgue_from_density(negative_profiles["upper_natural"])
    report_n = classify_origin(
        negative_doubling,
        negative_profiles["upper_natural"],
        negative_profiles["lower_natural"],
        lebesgue_n.value,
    )
    checks.append((report_n.label == LABEL_INTERIOR, f"negative label={report_n.label}"))
    _finish(2, checks)


def test_criterion_03_collision_amplification_and_overfull_growth(collider, overfull):
    checks = []
    witness = collision_witness(collider, np.array([8.0]), 2, copies=4)
    checks.append(
        (
            witness.verified and witness.observed_multiplicity >= 16,
            f"witness observed={witness.observed_multiplicity} bound={witness.bound}",
        )
    )
    pts = expand_level(collider, 8)
    lebesgue = lebesgue_from_density(
        upper_density_profile(pts, natural_schedule(pts), level=8)
    )
    checks.append(
        (
            lebesgue.value == 0.0 and lebesgue.divergent,
            f"collider lebesgue={lebesgue.value} divergent={lebesgue.divergent}",
        )
    )

    pts20 = expand_level(overfull, 20)
    profile = upper_density_profile(pts20, natural_schedule(pts20), level=20)
    top = profile.entries[-1]
    checks.append((top.sup_value >= 150.0, f"overfull top sup={top.sup_value:.3f}"))
    _, estimate = raster_attractor(overfull, 4096)
    checks.append((2.0 <= estimate.outer <= 2.02, f"overfull raster={estimate.outer:.8f}"))
    _finish(3, checks)


def test_criterion_04_exact_hausdorff_values():
    one = cantor_hausdorff(CantorPair(3, 2))
    checks = [(abs(one - 1.0) <= 1e-12, f"measure(3,2)={one:.15f}")]

    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(50):
        cp = CantorPair(float(rng.uniform(3.0, 10.0)), float(rng.uniform(0.1, 10.0)))
        _, limit = cantor_sdensity_sequence(cp, 1)
        worst = max(worst, abs(cantor_hausdorff(cp) * limit - 1.0))
    checks.append((worst <= 1e-12, f"worst reciprocal defect={worst:.3e}"))
    _finish(4, checks)


def test_criterion_05_counting_formula_is_exact():
    rng = np.random.default_rng(505)
    mismatches = 0
    for _ in range(200):
        N = float(rng.choice([3.0, 4.0, 5.0]))
        d = float(rng.choice([0.5, 1.0, 2.0]))
        m = int(rng.integers(1, 11))
        coeffs = [float(rng.choice([0.0, d])) for _ in range(m)]
        b = sum(r * N**j for j, r in enumerate(coeffs))
        want = sum(
            1
            for eps in itertools.product((0.0, d), repeat=m)
            if sum(r * N**j for j, r in enumerate(eps)) <= b
        )
        if count_upto(CantorPair(N, d), coeffs) != want:
            mismatches += 1
    _finish(5, [(mismatches == 0, f"mismatches={mismatches}/200")])


def test_criterion_06_translation_dominance_exhaustive():
    violations = []
    for N in (3.0, 4.0):
        for d in (1.0, 2.0):
            for k in range(1, 9):
                holds, counterexample = translation_dominance_check(CantorPair(N, d), k)
                if not holds:
                    violations.append((N, d, k, counterexample))
    _finish(6, [(not violations, f"violations={violations or 'none'}")])


def test_criterion_07_cantor_density_scan(cantor32):
    cp = CantorPair(3, 2)
    pts = expand_level(cantor32, 12)
    thresholds = natural_thresholds(pts)
    profile = upper_s_density_profile(pts, cp.s, thresholds, level=12)
    top = profile.entries[-1]
    checks = [(thresholds[-1] >= 1000.0, f"top threshold={thresholds[-1]:.0f}")]
    checks.append((1.0 <= top.sup_value <= 1.01, f"sup={top.sup_value:.10f}"))
    measure = hausdorff_from_sdensity(profile)
    checks.append((0.99 <= measure.value <= 1.0, f"hausdorff={measure.value:.10f}"))

    ladder = [float(3**m - 1) for m in range(1, 13)]
    scan = upper_s_density_profile(pts, cp.s, ladder, level=12)
    by_threshold = {e.threshold: e.sup_value for e in scan.entries}
    values, _ = cantor_sdensity_sequence(cp, 12)
    worst = max(abs(by_threshold[float(3**m - 1)] - v) for m, v in values)
    checks.append((worst <= 1e-9, f"closed-form defect={worst:.3e}"))
    _finish(7, checks)


def test_criterion_08_window_scaling_law():
    rng = np.random.default_rng(808)
    failures = 0
    for _ in range(100):
        n = int(rng.integers(2, 201))
        xs = np.unique(rng.integers(0, 1_000_000, size=n)).astype(float)
        pts = WeightedPointSet(xs)
        sizes = np.unique(rng.integers(1, 1_000_000, size=4)).astype(float)
        base = upper_density_profile(pts, WindowSchedule(tuple(sizes)))
        for c in (0.5, 2.0, 3.0):
            scaled_pts = rescale_points(pts, [[c]])
            scaled = upper_density_profile(scaled_pts, WindowSchedule(tuple(c * sizes)))
            for eb, es in zip(base.entries, scaled.entries):
                if es.sup_count != eb.sup_count:
                    failures += 1
                elif abs(c * es.sup_value - eb.sup_value) > 1e-12 * eb.sup_value:
                    failures += 1
    _finish(8, [(failures == 0, f"failures={failures}")])


def _brute_1d(pts, size):
    xs = pts.points[:, 0]
    pad = 1e-12 * size
    inside = (xs[None, :] >= xs[:, None]) & (xs[None, :] <= xs[:, None] + size + pad)
    return int((inside * pts.weights[None, :]).sum(axis=1).max())


def _brute_2d(pts, size):
    xs = pts.points[:, 0]
    ys = pts.points[:, 1]
    pad = 1e-12 * size
    best = 0
    for x in np.unique(xs):
        in_x = (xs >= x) & (xs <= x + size + pad)
        counts = (
            (ys[None, :] >= ys[:, None])
            & (ys[None, :] <= ys[:, None] + size + pad)
            & in_x[None, :]
        ) * pts.weights[None, :]
        best = max(best, int(counts.sum(axis=1).max()))
    return best


def test_criterion_09_scans_match_exhaustive_search():
    rng = np.random.default_rng(909)
    mismatches = 0
    for _ in range(100):
        n = int(rng.integers(2, 201))
        pts = WeightedPointSet(rng.uniform(0, 100, size=n), rng.integers(1, 4, size=n))
        size = float(rng.uniform(0.5, 60.0))
        entry = upper_density_profile(pts, WindowSchedule((size,))).entries[0]
        if entry.sup_count != _brute_1d(pts, size):
            mismatches += 1
    for _ in range(100):
        n = int(rng.integers(2, 201))
        pts = WeightedPointSet(
            rng.uniform(0, 50, size=(n, 2)), rng.integers(1, 4, size=n)
        )
        size = float(rng.uniform(0.5, 30.0))
        entry = upper_density_profile(pts, WindowSchedule((size,))).entries[0]
        if entry.sup_count != _brute_2d(pts, size):
            mismatches += 1
    _finish(9, [(mismatches == 0, f"mismatches={mismatches}/200")])


def test_criterion_10_renormalization_identity(cantor32, doubling):
    checks = []
    for label, pair, window, steps, base_seed in (
        ("cantor", cantor32, (0.0, 2.0), 1, 1000),
        ("doubling", doubling, (0.0, 1.0), 2, 2000),
    ):
        hits = 0
        for i in range(100):
            sample = sample_self_similar_measure(pair, 100_000, seed=base_seed + i)
            check = check_renormalization(pair, window, steps, sample)
            if abs(check.lhs - check.rhs) <= 3 * check.stderr:
                hits += 1
        checks.append((hits >= 95, f"{label} within 3 stderr {hits}/100"))
    _finish(10, checks)


def test_criterion_11_cylinder_masses(cantor32):
    sample = sample_self_similar_measure(cantor32, 100_000, seed=7)
    xs = sample.points[:, 0]
    n = len(xs)
    checks = []
    for hi, p in ((2.0 / 3.0, 0.5), (2.0 / 9.0, 0.25)):
        frac = float(np.mean((xs >= -1e-12) & (xs <= hi + 1e-12)))
        sigma = (p * (1.0 - p) / n) ** 0.5
        checks.append(
            (abs(frac - p) <= 3 * sigma, f"mass[0,{hi:.6g}]={frac:.5f} target={p}")
        )
    _finish(11, checks)

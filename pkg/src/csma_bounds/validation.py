"""Randomised check of the bounds against sequential-inhibition covers.

Random interferer sets come from a dense candidate scatter thinned by
sequential inhibition: repeatedly keep a uniformly chosen surviving
candidate and delete every candidate closer than ``d1`` to it. Each random
set is compared with the bound at every grid distance.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import (BoundCurve, Scenario, bound_curve, bound_no_fading, check_grid,
                     default_grid, rows_to_csv)
from .channel import fading_gain, make_rng, mean_power
from .geometry import InterferenceSetCover, RadioEnvironment

DEFAULT_EXPECTED_CANDIDATES = 1000
DEFAULT_TRIALS = 1000
DEFAULT_ENDPOINT_SETS = 500
DEFAULT_POINTS_PER_METER = 10.0
DEFAULT_FLOW_COUNT = 3

REPORT_COLUMNS = ("d_m", "p_below_mean", "p_below_mean_minus_std",
                  "p_below_ratio_of_means", "dominance_violations")

Segment = tuple[tuple[float, float], tuple[float, float]]


def generate_random_cover(env: RadioEnvironment, candidate_points, rng) -> InterferenceSetCover:
    """Thin ``candidate_points`` by sequential inhibition at radius ``d1``.

    Visiting candidates in a uniformly random order and keeping each one
    that survives is the same as repeatedly picking a uniform survivor.
    """
    rng = make_rng(rng)
    pts = np.asarray(candidate_points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        return InterferenceSetCover("Random", pts, env)
    pts = pts[rng.permutation(pts.shape[0])]
    alive = np.ones(pts.shape[0], dtype=bool)
    d1_sq = env.d1 * env.d1
    chosen = []
    while True:
        i = int(alive.argmax())
        if not alive[i]:
            break
        chosen.append(i)
        delta = pts - pts[i]
        alive &= np.einsum("ij,ij->i", delta, delta) >= d1_sq
        alive[i] = False
    return InterferenceSetCover("Random", pts[chosen], env)


def dense_candidates(env: RadioEnvironment, density: float | None = None, rng=None,
                     expected_count: float | None = None) -> np.ndarray:
    """Uniform Poisson scatter over the annulus ``[d1, d2]``.

    Give either ``density`` (points per square meter) or ``expected_count``;
    the default expects :data:`DEFAULT_EXPECTED_CANDIDATES` points.
    """
    rng = make_rng(rng)
    if density is None:
        lam = DEFAULT_EXPECTED_CANDIDATES if expected_count is None else expected_count
    else:
        if not density > 0:
            raise ValueError(f"density must be > 0, got {density}")
        lam = density * env.annulus_area
    count = rng.poisson(lam)
    r = np.sqrt(rng.uniform(env.d1**2, env.d2**2, count))
    theta = rng.uniform(0.0, 2.0 * math.pi, count)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def own_flow_segment(env: RadioEnvironment) -> Segment:
    """The transmitter's flow line, the x-axis across the whole disk."""
    return ((-env.d2, 0.0), (env.d2, 0.0))


def random_flow_segments(env: RadioEnvironment, count: int, rng) -> list[Segment]:
    """Chords between endpoint pairs drawn uniformly on the ``d2`` circle."""
    rng = make_rng(rng)
    theta = rng.uniform(0.0, 2.0 * math.pi, size=(count, 2))
    xy = env.d2 * np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return [(tuple(a), tuple(b)) for a, b in xy]


def flow_candidates(env: RadioEnvironment, flow_lines: Sequence[Segment],
                    points_per_meter: float = DEFAULT_POINTS_PER_METER, rng=None) -> np.ndarray:
    """Uniform points along each segment, clipped to the annulus."""
    rng = make_rng(rng)
    out = []
    for (x0, y0), (x1, y1) in flow_lines:
        length = math.hypot(x1 - x0, y1 - y0)
        k = int(round(length * points_per_meter))
        if k == 0:
            continue
        t = rng.uniform(0.0, 1.0, k)
        pts = np.column_stack([x0 + t * (x1 - x0), y0 + t * (y1 - y0)])
        r = np.hypot(pts[:, 0], pts[:, 1])
        out.append(pts[(r >= env.d1) & (r <= env.d2)])
    if not out:
        return np.empty((0, 2))
    return np.vstack(out)


@dataclass(frozen=True)
class ValidationPoint:
    d: float
    violation_prob_mean: float
    violation_prob_mean_minus_std: float
    violation_prob_ratio_of_means: float
    dominance_violations: int
    mean_cover_size: float


@dataclass(frozen=True)
class ValidationReport:
    scenario: Scenario
    trials: int
    per_d: tuple[ValidationPoint, ...]
    seed: int | None
    meta: dict = field(default_factory=dict)

    @property
    def total_dominance_violations(self) -> int:
        return sum(p.dominance_violations for p in self.per_d)

    def average(self, attr: str) -> float:
        return float(np.mean([getattr(p, attr) for p in self.per_d]))

    def rows(self) -> list[dict]:
        return [{
            "d_m": p.d,
            "p_below_mean": p.violation_prob_mean,
            "p_below_mean_minus_std": p.violation_prob_mean_minus_std,
            "p_below_ratio_of_means": p.violation_prob_ratio_of_means,
            "dominance_violations": p.dominance_violations,
        } for p in self.per_d]

    def to_csv(self) -> str:
        return rows_to_csv(self.rows(), REPORT_COLUMNS)

    def to_dict(self) -> dict:
        return {
            "scenario": str(self.scenario),
            "trials": self.trials,
            "seed": self.seed,
            **self.meta,
            "per_d": [
                {**row, "mean_cover_size": p.mean_cover_size}
                for row, p in zip(self.rows(), self.per_d)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _sir_samples(d: float, cover: InterferenceSetCover, rng, n: int) -> np.ndarray:
    env = cover.env
    p = mean_power(cover.distances_to(d), env)
    signal = mean_power(d, env) * fading_gain(env.sigma, rng, n)
    interference = (fading_gain(env.sigma, rng, (n, p.size)) * p).sum(axis=1)
    return 10.0 * np.log10(signal / interference)


def _candidate_sets(env, scenario, rng, endpoint_sets, density, expected_count,
                    points_per_meter):
    """Yield callables that draw one fresh candidate scatter each."""
    if scenario.kind == "dense":
        yield lambda: dense_candidates(env, density, rng, expected_count)
        return
    own = own_flow_segment(env)
    for _ in range(endpoint_sets):
        segs = [own] + random_flow_segments(env, scenario.m_flows - 1, rng)
        yield lambda segs=segs: flow_candidates(env, segs, points_per_meter, rng)


def run_validation(env: RadioEnvironment, scenario: Scenario = Scenario(), d_grid=None,
                   trials: int = DEFAULT_TRIALS, rng=None, n_samples: int = 2000, *,
                   n_bound: int = 50_000, n_max: int | None = None,
                   density: float | None = None, expected_count: float | None = None,
                   endpoint_sets: int = DEFAULT_ENDPOINT_SETS,
                   points_per_meter: float = DEFAULT_POINTS_PER_METER,
                   curve: BoundCurve | None = None) -> ValidationReport:
    """Compare random covers against the scenario bound at each grid distance.

    For every ``d``, ``trials`` random covers are drawn (for flow scenarios,
    ``trials`` per random endpoint set). Each cover is checked for
    deterministic dominance (its mean interference must not exceed the
    bound's, its SIR must not fall below it). With fading, ``n_samples``
    SIR draws per cover estimate how often the actual SIR falls below the
    bound mean, the mean minus one standard deviation, and the
    ratio-of-means SIR. Random covers use no correction factor.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    grid = check_grid(default_grid(env) if d_grid is None else d_grid, env)
    root = make_rng(rng)
    curve_rng, trial_rng = root.spawn(2)
    fading = env.sigma > 0 and n_samples > 0
    if curve is None:
        curve = bound_curve(env, scenario, grid, curve_rng, n_bound if fading else 1, n_max)
    elif not np.array_equal(curve.d_grid, grid):
        raise ValueError("supplied bound curve does not match the grid")
    streams = trial_rng.spawn(grid.size)

    points = []
    for i, (d, stream) in enumerate(zip(grid, streams)):
        d = float(d)
        i_bound, sir_bound = bound_no_fading(env, scenario, d, n_max)
        mu, sd = curve.sir[i].mean, curve.sir[i].std
        rom = float(curve.ratio_of_means_db[i])
        below = np.zeros(3)
        n_cov = 0
        violations = 0
        sizes = 0
        for draw in _candidate_sets(env, scenario, stream, endpoint_sets, density,
                                    expected_count, points_per_meter):
            for _ in range(trials):
                cover = generate_random_cover(env, draw(), stream)
                n_cov += 1
                sizes += len(cover)
                if len(cover) == 0:
                    continue
                i_rand = float(mean_power(cover.distances_to(d), env).sum())
                sir_rand = 10.0 * math.log10(mean_power(d, env) / i_rand)
                tol = 1e-12 * i_bound
                if i_rand > i_bound + tol or sir_rand < sir_bound - 1e-9:
                    violations += 1
                if fading:
                    x = _sir_samples(d, cover, stream, n_samples)
                    below += [(x < mu).mean(), (x < mu - sd).mean(), (x < rom).mean()]
        below /= max(n_cov, 1)
        points.append(ValidationPoint(d, float(below[0]), float(below[1]), float(below[2]),
                                      violations, sizes / max(n_cov, 1)))

    meta = {
        "sigma_db": env.sigma,
        "d1_m": env.d1,
        "d2_m": env.d2,
        "eta": env.eta,
        "p_t": env.p_t,
        "n_samples": n_samples if fading else 0,
        "n_bound": n_bound if fading else 0,
        "n_max": curve.n_max,
    }
    if scenario.kind == "flow":
        meta.update(endpoint_sets=endpoint_sets, points_per_meter=points_per_meter)
    else:
        if density is not None:
            expected_count = density * env.annulus_area
        elif expected_count is None:
            expected_count = DEFAULT_EXPECTED_CANDIDATES
        meta.update(expected_candidates=expected_count)
    return ValidationReport(scenario, trials, tuple(points),
                            int(seed) if seed is not None else None, meta)

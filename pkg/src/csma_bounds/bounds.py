"""Monte Carlo interference and SIR bounds as a function of link length.

For a receiver at ``(d, 0)`` the bound interference is the faded power sum
over a worst-case cover, inflated by the correction factor ``zeta``. When
several covers compete (Configurations 1 and 2, or the two inter-flow
classes), each draw keeps the largest interference sample among them,
i.e. the lowest SIR.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geometry
from .channel import fading_gain, make_rng, mean_power
from .geometry import InterferenceSetCover, RadioEnvironment

DEFAULT_SAMPLES = 50_000
DEFAULT_STEP = 0.1


class NonMonotoneOutageWarning(UserWarning):
    """The outage probability is not monotone in ``d`` over the grid."""


@dataclass(frozen=True)
class Scenario:
    """Which family of worst-case covers bounds the interference.

    ``kind`` is ``"dense"`` (arbitrary node placement) or ``"flow"``
    (``m_flows`` concurrent straight-line robot flows).
    """

    kind: str = "dense"
    m_flows: int = 1

    def __post_init__(self):
        if self.kind not in ("dense", "flow"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if int(self.m_flows) != self.m_flows or self.m_flows < 1:
            raise ValueError(f"m_flows must be a positive integer, got {self.m_flows!r}")

    @classmethod
    def dense(cls) -> "Scenario":
        return cls("dense")

    @classmethod
    def flow(cls, m_flows: int) -> "Scenario":
        return cls("flow", m_flows)

    @classmethod
    def parse(cls, text: str) -> "Scenario":
        """Parse ``"dense"``, ``"flow"`` or ``"flow:M"``."""
        kind, _, m = text.strip().lower().partition(":")
        return cls(kind, int(m) if m else 1)

    def __str__(self):
        return "dense" if self.kind == "dense" else f"flow:{self.m_flows}"

    @property
    def cover_labels(self) -> tuple[str, str]:
        if self.kind == "dense":
            return ("Config1", "Config2")
        return ("InterFlowClass1", "InterFlowClass2")


@dataclass(frozen=True, eq=False)
class SirDistribution:
    """Empirical SIR distribution in dB.

    ``samples`` is stored sorted and doubles as the empirical CDF.
    ``interference_free_fraction`` is the share of draws that saw no
    interference at all; those draws carry no SIR value and are not in
    ``samples``.
    """

    samples: np.ndarray
    mean: float
    std: float
    sample_count: int
    interference_free_fraction: float = 0.0

    @classmethod
    def from_samples(cls, samples, interference_free_fraction: float = 0.0) -> "SirDistribution":
        arr = np.sort(np.asarray(samples, dtype=float).ravel())
        if arr.size == 0:
            if interference_free_fraction <= 0:
                raise ValueError("an SIR distribution needs at least one sample")
            mean = std = math.nan
        else:
            mean, std = float(arr.mean()), float(arr.std())
        arr.setflags(write=False)
        return cls(arr, mean, std, int(arr.size), float(interference_free_fraction))

    def cdf(self, x: float) -> float:
        """Empirical ``P(SIR < x)`` (strict)."""
        if self.sample_count == 0:
            return 0.0
        return float(np.searchsorted(self.samples, x, side="left")) / self.sample_count

    def quantile(self, q):
        return np.quantile(self.samples, q)


@dataclass(frozen=True, eq=False)
class BoundCurve:
    """Per-``d`` bound statistics over a distance grid."""

    d_grid: np.ndarray
    interference_mean: np.ndarray
    signal_mean: np.ndarray
    sir: tuple[SirDistribution, ...]
    env: RadioEnvironment
    scenario: Scenario
    cover_labels: tuple[str, ...]
    n_max: int
    meta: dict = field(default_factory=dict)

    @property
    def sir_mean(self) -> np.ndarray:
        return np.array([s.mean for s in self.sir])

    @property
    def sir_std(self) -> np.ndarray:
        return np.array([s.std for s in self.sir])

    def sir_quantile(self, q: float) -> np.ndarray:
        return np.array([s.quantile(q) for s in self.sir])

    def outage(self, sir_th: float) -> np.ndarray:
        """``P(SIR(d) < sir_th)`` at every grid point."""
        return np.array([s.cdf(sir_th) for s in self.sir])

    @property
    def ratio_of_means_db(self) -> np.ndarray:
        """``10 log10(E[signal] / E[interference])``, generally not ``E[SIR]``."""
        return 10.0 * np.log10(self.signal_mean / self.interference_mean)

    def rows(self, sir_th: float | None = None) -> list[dict]:
        q10 = self.sir_quantile(0.10)
        q50 = self.sir_quantile(0.50)
        out = []
        for i, d in enumerate(self.d_grid):
            row = {
                "d_m": d,
                "p_int_mean_linear": self.interference_mean[i],
                "sir_mean_db": self.sir[i].mean,
                "sir_std_db": self.sir[i].std,
                "sir_q10_db": q10[i],
                "sir_q50_db": q50[i],
            }
            if sir_th is not None:
                row["outage_prob_at_threshold"] = self.sir[i].cdf(sir_th)
            out.append(row)
        return out

    def to_csv(self, sir_th: float | None = None) -> str:
        return rows_to_csv(self.rows(sir_th))


def rows_to_csv(rows: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    return str(v)


def make_grid(d_min: float, d_max: float, step: float = DEFAULT_STEP) -> np.ndarray:
    """Inclusive grid ``d_min, d_min + step, ...`` not exceeding ``d_max``."""
    if step <= 0:
        raise ValueError(f"grid step must be > 0, got {step}")
    if d_max < d_min:
        raise ValueError(f"grid upper end {d_max} is below lower end {d_min}")
    n = int(math.floor((d_max - d_min) / step + 1e-9)) + 1
    return np.round(d_min + step * np.arange(n), 12)


def default_grid(env: RadioEnvironment, step: float = DEFAULT_STEP) -> np.ndarray:
    """``1 m`` to ``d1 - 1 m``, the sweep used for the headline figures."""
    return make_grid(1.0, env.d1 - 1.0, step)


def _check_d(d: float, env: RadioEnvironment) -> None:
    if not 0 < d < env.d1:
        raise ValueError(f"link length d={d} must lie in (0, d1={env.d1})")


def check_grid(d_grid, env: RadioEnvironment) -> np.ndarray:
    grid = np.asarray(d_grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("distance grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("distance grid must be strictly increasing")
    if grid[0] <= 0 or grid[-1] >= env.d1:
        raise ValueError(f"distance grid must lie inside (0, d1={env.d1})")
    return grid


def correction_factor(cover_size: int, n_max: int) -> float:
    """``max(1, n_max / cover_size)``."""
    if cover_size < 1 or n_max < 1:
        raise ValueError("cover_size and n_max must both be positive")
    return max(1.0, n_max / cover_size)


def interference_no_fading(d: float, cover: InterferenceSetCover, zeta: float = 1.0) -> float:
    """Total mean interference at ``(d, 0)``, scaled by ``zeta``."""
    _check_d(d, cover.env)
    if len(cover) == 0:
        return 0.0
    return float(zeta * mean_power(cover.distances_to(d), cover.env).sum())


def _zetas(zeta, n: int) -> list[float]:
    if np.ndim(zeta) == 0:
        return [float(zeta)] * n
    z = [float(v) for v in zeta]
    if len(z) != n:
        raise ValueError("need one zeta per cover")
    return z


def _unique(covers: Sequence[InterferenceSetCover], zetas: list[float]):
    """Drop covers that repeat an earlier node set with the same zeta."""
    seen = set()
    out = []
    for c, z in zip(covers, zetas):
        key = (c.point_set(), z)
        if key not in seen:
            seen.add(key)
            out.append((c, z))
    return out


def _draw_interference(d, cover, zeta, rng, n, tx_codes=None, n_codes=1):
    """``n`` faded interference sums, optionally masked by code collisions."""
    env = cover.env
    if len(cover) == 0:
        return np.zeros(n)
    p = mean_power(cover.distances_to(d), env)
    if env.sigma == 0:
        per_node = np.broadcast_to(p, (n, p.size))
    else:
        per_node = fading_gain(env.sigma, rng, (n, p.size)) * p
    if tx_codes is not None:
        codes = rng.integers(0, n_codes, size=(n, p.size))
        per_node = per_node * (codes == tx_codes[:, None])
    return zeta * per_node.sum(axis=1)


def draw_bound(d: float, covers: Sequence[InterferenceSetCover], zeta, rng, n: int,
               n_codes: int = 1):
    """Paired signal and worst-cover interference draws.

    Returns ``(signal, interference)`` arrays of length ``n``. The signal
    draw is shared by all covers within a draw; each cover gets its own
    fading (and code) variates. Covers with identical node sets are merged
    first so that duplicates do not bias the maximum.
    """
    if not covers:
        raise ValueError("need at least one cover")
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    env = covers[0].env
    _check_d(d, env)
    signal = mean_power(d, env) * fading_gain(env.sigma, rng, n)
    tx_codes = rng.integers(0, n_codes, size=n) if n_codes > 1 else None
    interference = np.zeros(n)
    for cover, z in _unique(covers, _zetas(zeta, len(covers))):
        np.maximum(interference,
                   _draw_interference(d, cover, z, rng, n, tx_codes, n_codes),
                   out=interference)
    return signal, interference


def sample_interference(d: float, cover: InterferenceSetCover, zeta: float,
                        rng, n: int) -> np.ndarray:
    """``n`` i.i.d. faded interference sums at ``(d, 0)`` (linear power)."""
    _check_d(d, cover.env)
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    return _draw_interference(d, cover, zeta, make_rng(rng), n)


def sample_sir(d: float, covers: Sequence[InterferenceSetCover], zeta, rng,
               n: int = DEFAULT_SAMPLES) -> SirDistribution:
    """Sample the bound SIR at ``d``, keeping the lowest SIR across covers per draw.

    ``zeta`` is a scalar or one value per cover. Raises ``ValueError`` if
    every cover is empty, since the SIR would be infinite.
    """
    if not covers or all(len(c) == 0 for c in covers):
        raise ValueError("sample_sir needs at least one non-empty cover")
    signal, interference = draw_bound(d, covers, zeta, make_rng(rng), n)
    return SirDistribution.from_samples(10.0 * np.log10(signal / interference))


def scenario_n_max(env: RadioEnvironment, scenario: Scenario,
                   n_max: int | None = None) -> int:
    """Interferer count behind the correction factor for ``scenario``.

    Dense: the hexagonal estimate unless ``n_max`` overrides it. Flow: the
    largest cover any ``m_flows`` straight flows can form, so a single-flow
    network is not inflated to dense-network density.
    """
    if scenario.kind == "dense":
        return geometry.max_interferer_count(env, n_max)
    if n_max is not None:
        return geometry.max_interferer_count(env, n_max)
    return geometry.flow_interferer_count(env, scenario.m_flows)


def scenario_covers(env: RadioEnvironment, scenario: Scenario, d: float,
                    n_max: int | None = None):
    """Covers and correction factors bounding ``scenario`` at ``d``.

    A single factor, set by the largest cover, scales every cover, so a
    smaller cover is never inflated past the one that already reaches the
    interferer count.
    """
    covers = geometry.covers_for(env, scenario.cover_labels, scenario.m_flows, d)
    n = scenario_n_max(env, scenario, n_max)
    zeta = correction_factor(max(len(c) for c in covers), n)
    return covers, [zeta] * len(covers)


def bound_no_fading(env: RadioEnvironment, scenario: Scenario, d: float,
                    n_max: int | None = None) -> tuple[float, float]:
    """Deterministic ``(interference, SIR dB)`` bound at ``d``."""
    covers, zetas = scenario_covers(env, scenario, d, n_max)
    interference = max(interference_no_fading(d, c, z) for c, z in zip(covers, zetas))
    return interference, 10.0 * math.log10(mean_power(d, env) / interference)


def bound_curve(env: RadioEnvironment, scenario: Scenario = Scenario(),
                d_grid=None, rng=None, n: int = DEFAULT_SAMPLES,
                n_max: int | None = None, n_codes: int = 1) -> BoundCurve:
    """Bound statistics at each grid distance.

    Every grid point draws from its own child stream spawned from ``rng``
    (seed or Generator), so a point's samples do not depend on how many
    points precede it. With ``n_codes > 1`` interferers only count when
    they share the transmitter's random code; interference-free draws are
    kept out of the SIR samples.
    """
    grid = check_grid(default_grid(env) if d_grid is None else d_grid, env)
    streams = make_rng(rng).spawn(grid.size)
    sirs, i_mean, s_mean = [], [], []
    for d, stream in zip(grid, streams):
        covers, zetas = scenario_covers(env, scenario, float(d), n_max)
        signal, interference = draw_bound(float(d), covers, zetas, stream, n, n_codes)
        hit = interference > 0
        sirs.append(SirDistribution.from_samples(
            10.0 * np.log10(signal[hit] / interference[hit]), 1.0 - hit.mean()))
        i_mean.append(interference.mean())
        s_mean.append(signal.mean())
    return BoundCurve(
        d_grid=grid,
        interference_mean=np.array(i_mean),
        signal_mean=np.array(s_mean),
        sir=tuple(sirs),
        env=env,
        scenario=scenario,
        cover_labels=scenario.cover_labels,
        n_max=scenario_n_max(env, scenario, n_max),
        meta={"n_codes": n_codes},
    )


def select_dmax(curve: BoundCurve, sir_th: float, gamma: float) -> float | None:
    """Largest grid ``d`` whose empirical outage ``P(SIR < sir_th)`` is below ``gamma``.

    Returns ``None`` when no grid point qualifies. The outage is checked
    pointwise; if the qualifying points are not a prefix of the grid a
    :class:`NonMonotoneOutageWarning` is issued.
    """
    if not 0 < gamma <= 0.5:
        raise ValueError(f"gamma must lie in (0, 0.5], got {gamma}")
    ok = curve.outage(sir_th) < gamma
    if not ok.any():
        return None
    last = int(np.flatnonzero(ok)[-1])
    if not ok[: last + 1].all():
        warnings.warn(
            f"outage at SIR_th={sir_th} dB is not monotone in d; "
            f"returning the largest qualifying d", NonMonotoneOutageWarning, stacklevel=2)
    return float(curve.d_grid[last])

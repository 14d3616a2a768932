"""Relay-robot counts from the link-spacing limit ``d_max``.

A flow between two static endpoints is covered by a straight chain of
relays spaced at most ``d_max`` apart. Endpoints are infrastructure and are
not counted.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .bounds import (DEFAULT_SAMPLES, BoundCurve, Scenario, bound_curve,
                     rows_to_csv, select_dmax)
from .channel import make_rng
from .geometry import NodePosition, RadioEnvironment

RELAY_CONVENTION = "ceil(length / d_max) - 1 intermediate relays; endpoints excluded"

COMPARISON_COLUMNS = ("sir_th_db", "dmax_dense_m", "dmax_flow_m",
                      "robots_dense", "robots_flow", "saving_fraction")


class InfeasibleError(ValueError):
    """No grid spacing meets the outage target."""


@dataclass(frozen=True)
class FlowSpec:
    source: NodePosition
    sink: NodePosition

    def __post_init__(self):
        object.__setattr__(self, "source", NodePosition(*map(float, self.source)))
        object.__setattr__(self, "sink", NodePosition(*map(float, self.sink)))
        if not self.length > 0:
            raise ValueError("flow endpoints must be distinct")

    @property
    def length(self) -> float:
        return math.hypot(self.sink.x - self.source.x, self.sink.y - self.source.y)

    def to_dict(self) -> dict:
        return {"source": list(self.source), "sink": list(self.sink), "length_m": self.length}


@dataclass(frozen=True)
class FlowAllocation:
    flow: FlowSpec
    d_max: float
    robots: int


@dataclass(frozen=True)
class DeploymentPlan:
    per_flow: tuple[FlowAllocation, ...]
    total: int
    convention: str = RELAY_CONVENTION

    def to_dict(self) -> dict:
        return {
            "per_flow": [
                {**a.flow.to_dict(), "d_max_m": a.d_max, "robots": a.robots}
                for a in self.per_flow
            ],
            "total": self.total,
            "convention": self.convention,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def robots_for_flow(length: float, d_max: float) -> int:
    """Intermediate relays needed to span ``length`` with hops of at most ``d_max``."""
    if not d_max > 0:
        raise ValueError(f"d_max must be > 0, got {d_max}")
    if not length > 0:
        raise ValueError(f"flow length must be > 0, got {length}")
    # guard against 100/10 landing a hair above 10
    hops = math.ceil(round(length / d_max, 9))
    return max(hops - 1, 0)


def compare_curves(dense: BoundCurve, flow: BoundCurve, sir_th_grid: Sequence[float],
                   gamma: float, path_length: float) -> list[dict]:
    """Dense vs flow ``d_max`` and robot counts at each threshold.

    The dense bound holds for any placement, so the flow spacing is never
    taken below the dense one. Thresholds that no grid point meets give
    ``None`` entries.
    """
    if len(sir_th_grid) == 0:
        raise ValueError("sir_th_grid must not be empty")
    rows = []
    for th in sir_th_grid:
        dd = select_dmax(dense, th, gamma)
        df = select_dmax(flow, th, gamma)
        if dd is not None and (df is None or df < dd):
            df = dd
        nd = robots_for_flow(path_length, dd) if dd is not None else None
        nf = robots_for_flow(path_length, df) if df is not None else None
        if nd is None or nf is None:
            saving = None
        else:
            saving = (nd - nf) / nd if nd > 0 else 0.0
        rows.append({
            "sir_th_db": float(th),
            "dmax_dense_m": dd,
            "dmax_flow_m": df,
            "robots_dense": nd,
            "robots_flow": nf,
            "saving_fraction": saving,
        })
    return rows


def compare_bounds(env: RadioEnvironment, sir_th_grid: Sequence[float], gamma: float,
                   path_length: float, m_flows: int, rng=None, n: int = DEFAULT_SAMPLES,
                   d_grid=None, n_max: int | None = None) -> list[dict]:
    """Robot savings of the flow bound over the dense bound for each ``sir_th``."""
    if len(sir_th_grid) == 0:
        raise ValueError("sir_th_grid must not be empty")
    a, b = make_rng(rng).spawn(2)
    dense = bound_curve(env, Scenario.dense(), d_grid, a, n, n_max)
    flow = bound_curve(env, Scenario.flow(m_flows), d_grid, b, n)
    return compare_curves(dense, flow, sir_th_grid, gamma, path_length)


def comparison_csv(rows: Sequence[dict]) -> str:
    """CSV of :func:`compare_bounds` rows; missing values read ``infeasible``."""
    marked = [{k: ("infeasible" if v is None else v) for k, v in r.items()} for r in rows]
    return rows_to_csv(marked, COMPARISON_COLUMNS)


def plan_deployment(flows: Sequence[FlowSpec], env: RadioEnvironment, sir_th: float,
                    gamma: float, rng=None, n: int = DEFAULT_SAMPLES,
                    d_grid=None) -> DeploymentPlan:
    """Per-flow relay counts using the ``len(flows)``-flow bound."""
    if not flows:
        raise ValueError("need at least one flow")
    curve = bound_curve(env, Scenario.flow(len(flows)), d_grid, rng, n)
    d_max = select_dmax(curve, sir_th, gamma)
    if d_max is None:
        raise InfeasibleError(
            f"no link length in [{curve.d_grid[0]:g}, {curve.d_grid[-1]:g}] m keeps "
            f"P(SIR < {sir_th:g} dB) below gamma={gamma:g} with {len(flows)} flows")
    return plan_from_dmax(flows, d_max)


def plan_from_dmax(flows: Sequence[FlowSpec], d_max: float) -> DeploymentPlan:
    alloc = tuple(FlowAllocation(f, d_max, robots_for_flow(f.length, d_max)) for f in flows)
    return DeploymentPlan(alloc, sum(a.robots for a in alloc))

"""Worst-case interferer layouts around a CSMA transmitter.

The transmitter sits at the origin and the receiver on the positive x-axis
at ``(d, 0)``. A node inside the contention disk of radius ``d1`` is silenced
by carrier sensing; nodes in the closed annulus ``[d1, d2]`` may transmit
concurrently as long as they are pairwise at least ``d1`` apart. Such a set
of concurrent interferers is an :class:`InterferenceSetCover`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

SQRT3_2 = math.sqrt(3.0) / 2.0

#: Relative tolerance (in units of ``d1``) for boundary and spacing checks.
REL_TOL = 1e-9

COVER_LABELS = (
    "Config1",
    "Config2",
    "IntraFlow",
    "InterFlowClass1",
    "InterFlowClass2",
    "Random",
)


@dataclass(frozen=True)
class RadioEnvironment:
    """Physical parameters of the link budget.

    Parameters
    ----------
    p_t : float
        Transmit power, linear units.
    eta : float
        Path-loss exponent, within ``[2, 6]``.
    sigma : float
        Standard deviation of the log-normal shadowing, in dB.
    d1 : float
        Contention-region radius in meters.
    d2 : float
        Outer radius of the transition region in meters.
    """

    p_t: float = 1.0
    eta: float = 2.2
    sigma: float = 2.0
    d1: float = 6.0
    d2: float = 18.0

    def __post_init__(self):
        vals = (self.p_t, self.eta, self.sigma, self.d1, self.d2)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite radio parameter in {self!r}")
        if self.p_t <= 0:
            raise ValueError(f"p_t must be > 0, got {self.p_t}")
        if not 2.0 <= self.eta <= 6.0:
            raise ValueError(f"eta must lie in [2, 6], got {self.eta}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not 0 < self.d1 < self.d2:
            raise ValueError(f"need 0 < d1 < d2, got d1={self.d1}, d2={self.d2}")

    @property
    def ratio(self) -> float:
        return self.d2 / self.d1

    @property
    def annulus_area(self) -> float:
        return math.pi * (self.d2**2 - self.d1**2)

    def with_sigma(self, sigma: float) -> "RadioEnvironment":
        return RadioEnvironment(self.p_t, self.eta, sigma, self.d1, self.d2)


class NodePosition(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class InterferenceSetCover:
    """A labelled set of interferer positions built for one environment.

    ``nodes`` is an ``(N, 2)`` read-only float array. Iterating yields
    :class:`NodePosition` tuples.
    """

    label: str
    nodes: np.ndarray
    env: RadioEnvironment
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        arr = np.array(self.nodes, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(arr)):
            raise ValueError("node coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "nodes", arr)

    def __len__(self) -> int:
        return self.nodes.shape[0]

    def __iter__(self) -> Iterator[NodePosition]:
        for x, y in self.nodes:
            yield NodePosition(float(x), float(y))

    def point_set(self, ndigits: int = 9) -> frozenset:
        """Node coordinates rounded to ``ndigits`` as a hashable set."""
        return frozenset(_key(x, y, ndigits) for x, y in self.nodes)

    def distances_to(self, x: float, y: float = 0.0) -> np.ndarray:
        return np.hypot(self.nodes[:, 0] - x, self.nodes[:, 1] - y)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "d1": float(f"{self.env.d1:.9g}"),
            "d2": float(f"{self.env.d2:.9g}"),
            "nodes": [[float(f"{x:.9g}"), float(f"{y:.9g}")] for x, y in self.nodes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict, env: RadioEnvironment | None = None) -> "InterferenceSetCover":
        if env is None:
            env = RadioEnvironment(d1=data["d1"], d2=data["d2"])
        elif not (math.isclose(env.d1, data["d1"], rel_tol=1e-8)
                  and math.isclose(env.d2, data["d2"], rel_tol=1e-8)):
            raise ValueError("cover radii do not match the supplied environment")
        return cls(data["label"], np.array(data["nodes"], dtype=float).reshape(-1, 2), env)

    @classmethod
    def from_json(cls, text: str, env: RadioEnvironment | None = None) -> "InterferenceSetCover":
        return cls.from_dict(json.loads(text), env)


def _key(x: float, y: float, ndigits: int = 9) -> tuple:
    # normalises -0.0 so mirrored zero coordinates collapse
    return (round(float(x), ndigits) + 0.0, round(float(y), ndigits) + 0.0)


def _dedupe_clip(points: Iterable[tuple], env: RadioEnvironment) -> np.ndarray:
    """Drop duplicate points and anything outside the closed annulus."""
    tol = REL_TOL * env.d1
    seen = set()
    out = []
    for x, y in points:
        k = _key(x, y)
        if k in seen:
            continue
        seen.add(k)
        r = math.hypot(x, y)
        if env.d1 - tol <= r <= env.d2 + tol:
            out.append((x + 0.0, y + 0.0))
    return np.array(out, dtype=float).reshape(-1, 2)


def _n_rows(env: RadioEnvironment) -> int:
    return math.floor(2.0 * env.d2 / (math.sqrt(3.0) * env.d1))


def _axis_line(env: RadioEnvironment) -> list[tuple]:
    n0 = math.floor((env.d2 - env.d1) / env.d1)
    return [(s * j * env.d1, 0.0) for j in range(1, n0 + 2) for s in (1.0, -1.0)]


def _hex_row(env: RadioEnvironment, k: int, sign: float) -> list[tuple]:
    """Points of row ``l_k`` (``sign=+1``) or ``l'_k`` (``sign=-1``)."""
    d1, d2 = env.d1, env.d2
    radicand = d2**2 - 0.75 * k * k * d1 * d1
    if radicand < 0:
        return []
    n_k = math.floor(math.sqrt(radicand) / d1)
    y = sign * SQRT3_2 * k * d1
    pts = []
    for j in range(n_k + 1):
        x = d1 * (1 + 2 * j) / 2.0 if k % 2 else j * d1
        pts.append((x, y))
        pts.append((-x, y))
    return pts


def _hex_rows(env: RadioEnvironment) -> list[np.ndarray]:
    """Rows ``[l_1, l'_1, l_2, l'_2, ...]`` of Configuration 1, clipped."""
    rows = []
    for k in range(1, _n_rows(env) + 1):
        for sign in (1.0, -1.0):
            rows.append(_dedupe_clip(_hex_row(env, k, sign), env))
    return rows


def build_config1(env: RadioEnvironment) -> InterferenceSetCover:
    """Hexagonal layout whose nearest interferer sits at ``(d1, 0)``."""
    pts = list(_axis_line(env))
    for k in range(1, _n_rows(env) + 1):
        pts += _hex_row(env, k, 1.0)
        pts += _hex_row(env, k, -1.0)
    return InterferenceSetCover("Config1", _dedupe_clip(pts, env), env)


def build_config2(env: RadioEnvironment) -> InterferenceSetCover:
    """Configuration 1 with x and y swapped.

    The two interferers closest to the receiver are ``d1`` from the
    transmitter and from each other.
    """
    c1 = build_config1(env)
    return InterferenceSetCover("Config2", c1.nodes[:, ::-1].copy(), env)


def build_intraflow(env: RadioEnvironment) -> InterferenceSetCover:
    """Worst-case interferers on the transmitter's own flow line."""
    return InterferenceSetCover("IntraFlow", _dedupe_clip(_axis_line(env), env), env)


def _check_flows(m_flows: int) -> None:
    if int(m_flows) != m_flows or m_flows < 1:
        raise ValueError(f"m_flows must be a positive integer, got {m_flows!r}")


def build_interflow_class1(env: RadioEnvironment, m_flows: int) -> InterferenceSetCover:
    """Intra-flow cover plus the first ``m_flows - 1`` horizontal hex rows."""
    _check_flows(m_flows)
    rows = _hex_rows(env)
    m_prime = min(m_flows - 1, len(rows))
    parts = [build_intraflow(env).nodes] + rows[:m_prime]
    cover = InterferenceSetCover("InterFlowClass1", np.vstack(parts), env)
    cover.meta["lines"] = m_prime
    return cover


def vertical_flow_lines(env: RadioEnvironment) -> list[tuple[float, np.ndarray]]:
    """Candidate interfering flow lines ``l_{W,k}`` and ``l'_{W,k}``.

    Returns ``(x, nodes)`` pairs for the vertical chords at
    ``x = +-(2k+1) d1 / 2``. Each chord carries nodes at
    ``y = +-(sqrt(3)/2 d1 + j d1)``. Chords that cannot hold a node are
    omitted.
    """
    d1, d2 = env.d1, env.d2
    lines = []
    k = 0
    while (2 * k + 1) * d1 / 2.0 <= d2:
        x = (2 * k + 1) * d1 / 2.0
        n_w = math.floor((math.sqrt(d2**2 - x * x) - SQRT3_2 * d1) / d1)
        if n_w >= 0:
            for sx in (1.0, -1.0):
                pts = [(sx * x, sy * (SQRT3_2 * d1 + j * d1))
                       for j in range(n_w + 1) for sy in (1.0, -1.0)]
                lines.append((sx * x, _dedupe_clip(pts, env)))
        k += 1
    return lines


def ordered_flow_lines(env: RadioEnvironment, d: float) -> list[tuple[float, np.ndarray]]:
    """Vertical flow lines sorted by closeness of their seed pair to ``(d, 0)``.

    The seed pair of a line is its two nodes nearest the x-axis. Ties go to
    the smaller ``|x|`` and then to the positive side.
    """
    def sort_key(item):
        x, nodes = item
        seed = np.hypot(x - d, SQRT3_2 * env.d1)
        return (round(seed, 9), abs(x), -x)

    return sorted(vertical_flow_lines(env), key=sort_key)


def build_interflow_class2(env: RadioEnvironment, m_flows: int,
                           d: float | None = None) -> InterferenceSetCover:
    """Intra-flow cover plus the ``m_flows - 1`` vertical flow lines nearest the receiver.

    ``d`` is the receiver offset on the x-axis used for ordering the lines;
    it defaults to ``d1 / 2``.
    """
    _check_flows(m_flows)
    if d is None:
        d = env.d1 / 2.0
    lines = ordered_flow_lines(env, d)
    m_prime = min(m_flows - 1, len(lines))
    parts = [build_intraflow(env).nodes] + [nodes for _, nodes in lines[:m_prime]]
    cover = InterferenceSetCover("InterFlowClass2", np.vstack(parts), env)
    cover.meta["lines"] = [x for x, _ in lines[:m_prime]]
    return cover


def validate_cover(cover: InterferenceSetCover, tol: float = REL_TOL) -> list[str]:
    """List every way ``cover`` breaks the annulus or spacing constraints.

    An empty list means the cover is valid.
    """
    env = cover.env
    eps = tol * env.d1
    problems = []
    pts = cover.nodes
    r = np.hypot(pts[:, 0], pts[:, 1])
    for i in np.flatnonzero((r < env.d1 - eps) | (r > env.d2 + eps)):
        problems.append(
            f"node {i} at ({pts[i, 0]:.6g}, {pts[i, 1]:.6g}) has radius "
            f"{r[i]:.6g} outside [{env.d1:g}, {env.d2:g}]")
    if len(pts) > 1:
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        ii, jj = np.nonzero(np.triu(dist < env.d1 - eps, k=1))
        for i, j in zip(ii, jj):
            problems.append(f"nodes {i} and {j} are {dist[i, j]:.6g} apart (< d1={env.d1:g})")
    return problems


def max_interferer_count(env: RadioEnvironment, override: int | None = None) -> int:
    """Estimate of the largest possible concurrent interferer count.

    Without an override this is the larger of the two hexagonal covers;
    a circle-packing solution can be injected through ``override``.
    """
    if override is not None:
        if int(override) != override or override < 1:
            raise ValueError(f"override must be a positive integer, got {override!r}")
        return int(override)
    return max(len(build_config1(env)), len(build_config2(env)))


def flow_interferer_count(env: RadioEnvironment, m_flows: int) -> int:
    """Largest cover cardinality reachable with ``m_flows`` straight-line flows.

    Own flow plus ``m_flows - 1`` lines drawn from the horizontal hex rows or
    from the vertical flow lines; whichever family holds more nodes.
    """
    _check_flows(m_flows)
    m = m_flows - 1
    base = len(build_intraflow(env))
    rows = sorted((len(r) for r in _hex_rows(env)), reverse=True)
    cols = sorted((len(n) for _, n in vertical_flow_lines(env)), reverse=True)
    return base + max(sum(rows[:m]), sum(cols[:m]))


def chord_length(d_r: float, env: RadioEnvironment) -> float:
    """Length of one annulus piece of a chord at distance ``d_r`` from the centre."""
    if not 0 <= d_r < env.d1:
        raise ValueError(f"chord offset must lie in [0, d1={env.d1}), got {d_r}")
    return math.sqrt(env.d2**2 - d_r**2) - math.sqrt(env.d1**2 - d_r**2)


def covers_for(env: RadioEnvironment, labels: Sequence[str], m_flows: int = 1,
               d: float | None = None) -> list[InterferenceSetCover]:
    """Build covers by label."""
    builders = {
        "Config1": lambda: build_config1(env),
        "Config2": lambda: build_config2(env),
        "IntraFlow": lambda: build_intraflow(env),
        "InterFlowClass1": lambda: build_interflow_class1(env, m_flows),
        "InterFlowClass2": lambda: build_interflow_class2(env, m_flows, d),
    }
    try:
        return [builders[lab]() for lab in labels]
    except KeyError as exc:
        raise ValueError(f"unknown cover label {exc.args[0]!r}") from None

"""Random orthogonal-code assignment on top of CSMA.

Each concurrent node picks one of ``n_codes`` codes uniformly and
independently; only interferers sharing the transmitter's code contribute
interference.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bounds import DEFAULT_SAMPLES, SirDistribution, draw_bound
from .channel import make_rng
from .geometry import InterferenceSetCover


@dataclass(frozen=True)
class CodeConfig:
    n_codes: int
    n_max: int

    def __post_init__(self):
        for name in ("n_codes", "n_max"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")


def _as_list(cover) -> list[InterferenceSetCover]:
    return [cover] if isinstance(cover, InterferenceSetCover) else list(cover)


def sample_interference_with_codes(d: float, cover, zeta, code_config: CodeConfig,
                                   rng, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    """Code-masked interference draws, zeros included.

    ``cover`` may be a single cover or a list; with several covers each
    draw keeps the largest masked interference.
    """
    _, interference = draw_bound(d, _as_list(cover), zeta, make_rng(rng), n,
                                 n_codes=code_config.n_codes)
    return interference


def sample_sir_with_codes(d: float, cover, zeta, code_config: CodeConfig, rng,
                          n: int = DEFAULT_SAMPLES) -> SirDistribution:
    """Bound SIR when only same-code interferers count.

    Draws in which no interferer shares the transmitter's code are counted
    in ``interference_free_fraction`` and left out of the SIR samples. With
    ``n_codes == 1`` no code variates are drawn, so the result matches
    :func:`csma_bounds.bounds.sample_sir` for the same stream.
    """
    covers = _as_list(cover)
    if not covers or all(len(c) == 0 for c in covers):
        raise ValueError("need at least one non-empty cover")
    signal, interference = draw_bound(d, covers, zeta, make_rng(rng), n,
                                      n_codes=code_config.n_codes)
    hit = interference > 0
    sir = 10.0 * np.log10(signal[hit] / interference[hit])
    return SirDistribution.from_samples(sir, interference_free_fraction=1.0 - hit.mean())


def interference_free_lower_bound(code_config: CodeConfig) -> float:
    """``prod_{i=1..n_max} (1 - (i-1)/n_codes)``, valid for ``n_codes >= n_max``.

    This is the chance that ``n_max`` concurrent nodes all pick distinct
    codes, and so bounds the interference-free probability from below for
    any number of active nodes up to ``n_max``.
    """
    n_o, n_max = code_config.n_codes, code_config.n_max
    if n_o < n_max:
        raise ValueError(f"bound needs n_codes >= n_max, got {n_o} < {n_max}")
    return distinct_code_probability(n_max, n_o)


def distinct_code_probability(k: int, n_codes: int) -> float:
    """Probability that ``k`` uniform code picks are pairwise distinct."""
    if k > n_codes:
        return 0.0
    return float(np.prod(1.0 - np.arange(k) / n_codes))


def select_code_count(n_max: int, kappa: float) -> int:
    """Smallest ``n_codes >= n_max`` whose interference-free bound reaches ``kappa``."""
    if not 0.5 <= kappa < 1:
        raise ValueError(f"kappa must lie in [0.5, 1), got {kappa}")
    CodeConfig(n_max, n_max)
    n_o = n_max
    while interference_free_lower_bound(CodeConfig(n_o, n_max)) < kappa:
        n_o += 1
    return n_o


def code_report(n_max: int, kappa: float) -> dict:
    n_o = select_code_count(n_max, kappa)
    return {
        "n_max": int(n_max),
        "kappa": float(kappa),
        "selected_n_codes": int(n_o),
        "bound_at_selection": interference_free_lower_bound(CodeConfig(n_o, n_max)),
    }


def code_report_json(n_max: int, kappa: float) -> str:
    return json.dumps(code_report(n_max, kappa), indent=2) + "\n"


def simulate_distinct_codes(n_active: int, n_codes: int, trials: int, rng) -> float:
    """Empirical share of trials where ``n_active`` nodes all pick distinct codes."""
    rng = make_rng(rng)
    if n_active <= 1:
        return 1.0
    picks = np.sort(rng.integers(0, n_codes, size=(trials, n_active)), axis=1)
    return float(np.all(np.diff(picks, axis=1) != 0, axis=1).mean())


def simulate_interference_free(activation_probs: Sequence[float], n_codes: int,
                               trials: int, rng) -> float:
    """Interference-free share when the number of active nodes is random.

    ``activation_probs[j]`` is ``P(j nodes active)``; each trial draws the
    count, then codes, and succeeds when every active code is distinct.
    """
    rng = make_rng(rng)
    probs = np.asarray(activation_probs, dtype=float)
    if np.any(probs < 0) or not math.isclose(probs.sum(), 1.0, rel_tol=1e-9):
        raise ValueError("activation_probs must be a probability vector")
    counts = rng.choice(probs.size, size=trials, p=probs)
    k_max = max(int(counts.max()), 1)
    picks = rng.integers(0, n_codes, size=(trials, k_max))
    # inactive slots get unique sentinel codes so they never collide
    slots = np.arange(k_max)
    picks = np.where(slots[None, :] < counts[:, None], picks, n_codes + slots[None, :])
    picks.sort(axis=1)
    return float(np.all(np.diff(picks, axis=1) != 0, axis=1).mean())

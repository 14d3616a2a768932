"""Log-normal shadowing channel.

Received power is ``p_t * r**-eta * 10**(psi/10)`` with ``psi ~ N(0, sigma^2)``
in dB. Any constant gain is folded into ``p_t`` because it cancels in every
SIR ratio.
"""
from __future__ import annotations

import numpy as np

from .geometry import RadioEnvironment

LN10_OVER_10 = np.log(10.0) / 10.0


def make_rng(seed=None) -> np.random.Generator:
    """Return a Generator; an existing Generator passes through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Deterministically derived stream for the work unit ``keys`` of ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.default_rng(ss)


def to_db(linear):
    """``10 log10(x)``; rejects non-positive input."""
    arr = np.asarray(linear, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("to_db needs strictly positive input")
    out = 10.0 * np.log10(arr)
    return float(out) if out.ndim == 0 else out


def from_db(db):
    out = np.power(10.0, np.asarray(db, dtype=float) / 10.0)
    return float(out) if out.ndim == 0 else out


def mean_power(distance, env: RadioEnvironment):
    """Path-loss power with no fading, ``p_t * distance**-eta``."""
    r = np.asarray(distance, dtype=float)
    if np.any(~(r > 0)):
        raise ValueError("distance must be > 0")
    out = env.p_t * r ** (-env.eta)
    return float(out) if out.ndim == 0 else out


def fading_gain(sigma: float, rng: np.random.Generator, size=None):
    """Linear shadowing factors ``10**(psi/10)``, ``psi ~ N(0, sigma^2)`` dB."""
    if sigma == 0:
        return np.ones(size) if size is not None else 1.0
    return np.exp(LN10_OVER_10 * sigma * rng.standard_normal(size))


def mean_fading_gain(sigma: float) -> float:
    """``E[10**(psi/10)]`` for ``psi ~ N(0, sigma^2)``."""
    return float(np.exp((sigma * LN10_OVER_10) ** 2 / 2.0))


def sample_power(distance, env: RadioEnvironment, rng: np.random.Generator, size=None):
    """Draw faded received power at ``distance``.

    With ``size=None`` a single float is returned, otherwise an array of
    shape ``size`` (broadcast against ``distance``).
    """
    base = mean_power(distance, env)
    if size is None and np.ndim(base) == 0:
        return base * float(fading_gain(env.sigma, rng))
    shape = size if size is not None else np.shape(base)
    return base * fading_gain(env.sigma, rng, shape)

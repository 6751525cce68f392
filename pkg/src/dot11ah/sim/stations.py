"""Station addressing, grouping and per-period traffic generation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..core import MAX_STATIONS, ConfigError, SignallingConfig, TrafficPattern


@dataclass(frozen=True, order=True)
class Aid:
    page: int
    tim_group: int
    index: int


def assign_stations(n_sta: int, sig: SignallingConfig) -> list[Aid]:
    """Deal stations round-robin over (page, TIM group) pairs.

    The TIM group varies fastest so both the per-group and the per-pair
    populations stay within one station of each other.
    """
    if n_sta > MAX_STATIONS:
        raise ConfigError(f"{n_sta} stations exceed the {MAX_STATIONS}-station AID space")
    if n_sta < 0:
        raise ConfigError("station count cannot be negative")
    pairs = sig.n_tim * sig.n_pages
    aids = []
    for k in range(n_sta):
        slot, index = k % pairs, k // pairs
        aids.append(Aid(page=slot // sig.n_tim, tim_group=slot % sig.n_tim, index=index))
    return aids


def demand_count(alpha: Fraction, n_sta: int) -> int:
    """round(alpha * n_sta), halves rounded up."""
    return math.floor(Fraction(alpha) * n_sta + Fraction(1, 2))


def generate_traffic(pattern: TrafficPattern, n_sta: int,
                     rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Pick the stations that get a downlink and an uplink packet this period.

    Each direction draws its own set of distinct stations; the two sets may
    overlap.
    """
    n_dl = demand_count(pattern.alpha_dl, n_sta)
    n_ul = demand_count(pattern.alpha_ul, n_sta)
    dl = rng.choice(n_sta, size=n_dl, replace=False) if n_dl else np.empty(0, dtype=np.int64)
    ul = rng.choice(n_sta, size=n_ul, replace=False) if n_ul else np.empty(0, dtype=np.int64)
    return np.sort(dl), np.sort(ul)

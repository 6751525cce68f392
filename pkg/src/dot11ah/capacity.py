"""Closed-form packing bound on the number of stations an 802.11ah BSS supports.

Every beacon interval is split into a downlink and an uplink segment in the
ratio of the traffic shares; each segment is charged one full minimum
backoff window and then packed with back-to-back exchanges.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .core import (
    MAX_STATIONS,
    MCS_TABLE,
    ConfigError,
    Exchange,
    McsEntry,
    NetworkConfig,
    SignallingMode,
    TrafficPattern,
)


class Direction(enum.Enum):
    DL = "DL"
    UL = "UL"

    @property
    def exchange(self) -> Exchange:
        return Exchange.DOWNLINK if self is Direction.DL else Exchange.UPLINK


class Interval(enum.Enum):
    FIRST = "first"  # follows the DTIM beacon and the multicast slot
    LATER = "later"  # follows a TIM beacon


def _beta(cfg: NetworkConfig, direction: Direction) -> Fraction:
    return cfg.traffic.beta_dl if direction is Direction.DL else cfg.traffic.beta_ul


def _alpha(cfg: NetworkConfig, direction: Direction) -> Fraction:
    return cfg.traffic.alpha_dl if direction is Direction.DL else cfg.traffic.alpha_ul


def segment_time(segment: Interval, direction: Direction, cfg: NetworkConfig) -> Fraction:
    """Airtime available to one direction in one interval, before the backoff charge."""
    usable = cfg.interval
    if segment is Interval.FIRST:
        usable -= cfg.exchange(Exchange.MULTICAST) + cfg.t_dtim_beacon
    else:
        usable -= cfg.t_tim_beacon
    return usable * _beta(cfg, direction)


def packets_in_dtim_interval(segment: Interval, direction: Direction, cfg: NetworkConfig) -> int:
    budget = segment_time(segment, direction, cfg) - cfg.timing.cw_min * cfg.timing.t_slot
    if budget <= 0:
        return 0
    return math.floor(budget / cfg.exchange(direction.exchange))


def packets_per_dtim_period(direction: Direction, cfg: NetworkConfig) -> int:
    first = packets_in_dtim_interval(Interval.FIRST, direction, cfg)
    later = packets_in_dtim_interval(Interval.LATER, direction, cfg)
    return first + (cfg.scale - 1) * later


@dataclass(frozen=True)
class CapacityResult:
    n_dl_dtim: int
    n_dl_tim: int
    n_ul_dtim: int
    n_ul_tim: int
    n_dl: int
    n_ul: int
    n_sta_max: Fraction
    binding: str  # "DL", "UL" or "both"

    @property
    def n_sta_floor(self) -> int:
        return math.floor(self.n_sta_max)


def capacity(cfg: NetworkConfig) -> CapacityResult:
    counts = {}
    for d in Direction:
        counts[d] = (packets_in_dtim_interval(Interval.FIRST, d, cfg),
                     packets_in_dtim_interval(Interval.LATER, d, cfg))
    totals = {d: first + (cfg.scale - 1) * later for d, (first, later) in counts.items()}
    n_sta, binding = max_supported_stas(cfg, totals)
    return CapacityResult(
        n_dl_dtim=counts[Direction.DL][0],
        n_dl_tim=counts[Direction.DL][1],
        n_ul_dtim=counts[Direction.UL][0],
        n_ul_tim=counts[Direction.UL][1],
        n_dl=totals[Direction.DL],
        n_ul=totals[Direction.UL],
        n_sta_max=n_sta,
        binding=binding,
    )


def max_supported_stas(cfg: NetworkConfig,
                       totals: dict[Direction, int] | None = None) -> tuple[Fraction, str]:
    """Smallest of N_dir / alpha_dir over the directions that carry traffic.

    Returns the (unfloored) station count and the binding direction.
    """
    if totals is None:
        totals = {d: packets_per_dtim_period(d, cfg) for d in Direction}
    bounds = {d.value: Fraction(totals[d]) / _alpha(cfg, d)
              for d in Direction if _alpha(cfg, d) > 0}
    if not bounds:
        raise ConfigError("at least one of alpha_dl, alpha_ul must be positive")
    best = min(bounds.values())
    tied = [k for k, v in bounds.items() if v == best]
    return best, tied[0] if len(tied) == 1 else "both"


@dataclass(frozen=True)
class SweepRow:
    mode: SignallingMode
    pattern: TrafficPattern
    mcs_index: int | None
    data_rate: Fraction
    result: CapacityResult

    @property
    def n_sta_max(self) -> Fraction:
        return self.result.n_sta_max

    @property
    def exceeds_aid_space(self) -> bool:
        return self.result.n_sta_max >= MAX_STATIONS


def capacity_sweep(modes: Sequence[SignallingMode],
                   patterns: Sequence[TrafficPattern],
                   rates: Iterable[McsEntry | int | Fraction],
                   cfg: NetworkConfig) -> list[SweepRow]:
    """Evaluate every (mode, pattern, rate) combination.

    ``rates`` may mix MCS entries and raw bit rates. Rows come back ordered by
    mode, then pattern, then rate, whatever order the axes were given in.
    """
    rates = list(rates)
    if not (modes and patterns and rates):
        raise ValueError("every sweep axis needs at least one value")
    points = []
    for r in rates:
        if isinstance(r, McsEntry):
            points.append((r.index, Fraction(r.data_rate)))
        else:
            points.append((None, Fraction(r)))
    rows = []
    for mode, pattern, (idx, rate) in product(modes, patterns, points):
        point = cfg.with_mode(mode).with_traffic(pattern.alpha_dl, pattern.alpha_ul).with_rate(rate)
        rows.append(SweepRow(mode, pattern, idx, rate, capacity(point)))
    rows.sort(key=lambda row: (row.mode.value, row.pattern.alpha_dl, row.pattern.alpha_ul,
                               row.data_rate))
    return rows


def fig7_sweep(cfg: NetworkConfig, patterns: Sequence[TrafficPattern]) -> list[SweepRow]:
    return capacity_sweep(list(SignallingMode), patterns, MCS_TABLE, cfg)

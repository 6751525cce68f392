"""Beacon and segment layout of one DTIM period."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from ..core import ConfigError, Exchange, NetworkConfig, SignallingMode


class SlotKind(enum.Enum):
    DTIM_BEACON = "dtim-beacon"
    TIM_BEACON = "tim-beacon"
    MULTICAST = "multicast"
    DOWNLINK = "downlink"
    UPLINK = "uplink"


@dataclass(frozen=True)
class Owner:
    """The stations an interval belongs to. ``page`` is None when all pages share it."""

    page: int | None
    tim_group: int

    def owns(self, page: int, tim_group: int) -> bool:
        return tim_group == self.tim_group and (self.page is None or page == self.page)


@dataclass(frozen=True)
class ScheduleEntry:
    kind: SlotKind
    start: Fraction
    end: Fraction
    interval: int
    owner: Owner | None  # None for broadcast parts (DTIM beacon, multicast)

    @property
    def duration(self) -> Fraction:
        return self.end - self.start


@dataclass(frozen=True)
class SegmentSchedule:
    entries: tuple[ScheduleEntry, ...]
    period: Fraction
    n_intervals: int

    def owners(self) -> list[Owner]:
        seen = {}
        for e in self.entries:
            if e.owner is not None:
                seen.setdefault(e.interval, e.owner)
        return [seen[i] for i in sorted(seen)]

    def segments(self, interval: int) -> dict[SlotKind, ScheduleEntry]:
        return {e.kind: e for e in self.entries if e.interval == interval}


def interval_owner(interval: int, cfg: NetworkConfig) -> Owner:
    sig = cfg.signalling
    if sig.mode is SignallingMode.TIM_OFFSET:
        # pages take turns inside each group's slot of the non-offset layout
        return Owner(page=interval % sig.n_pages, tim_group=interval // sig.n_pages)
    return Owner(page=None, tim_group=interval)


def build_schedule(cfg: NetworkConfig) -> SegmentSchedule:
    """Lay out one DTIM period.

    Interval 0 opens with the DTIM beacon and the one-packet multicast slot;
    every later interval opens with a TIM beacon. The rest of each interval
    is split into a downlink and an uplink segment in the ratio beta_DL:beta_UL.
    """
    span = cfg.interval
    t_mc = cfg.exchange(Exchange.MULTICAST)
    head_first = cfg.t_dtim_beacon + t_mc
    head_later = cfg.t_tim_beacon
    if head_first >= span or head_later >= span:
        raise ConfigError(
            f"beacon interval of {float(span) * 1e3:.3f} ms cannot hold its beacon and "
            f"multicast slot ({float(max(head_first, head_later)) * 1e3:.3f} ms)")
    beta_dl = cfg.traffic.beta_dl
    entries = []
    for i in range(cfg.scale):
        start = i * span
        owner = interval_owner(i, cfg)
        if i == 0:
            t = start + cfg.t_dtim_beacon
            entries.append(ScheduleEntry(SlotKind.DTIM_BEACON, start, t, i, None))
            entries.append(ScheduleEntry(SlotKind.MULTICAST, t, t + t_mc, i, None))
            t += t_mc
        else:
            t = start + head_later
            entries.append(ScheduleEntry(SlotKind.TIM_BEACON, start, t, i, owner))
        end = start + span
        split = t + (end - t) * beta_dl
        if split > t:
            entries.append(ScheduleEntry(SlotKind.DOWNLINK, t, split, i, owner))
        if end > split:
            entries.append(ScheduleEntry(SlotKind.UPLINK, split, end, i, owner))
    return SegmentSchedule(tuple(entries), cfg.timing.t_dtim_period, cfg.scale)

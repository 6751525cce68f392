"""Slotted DCF contention inside one downlink or uplink segment.

Backoff counters are kept as absolute positions on a clock that only ticks
on idle slots, so frozen counters need no bookkeeping: the next station(s)
to transmit are simply the heap minimum.
"""

from __future__ import annotations

import enum
import heapq
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from ..capacity import Direction
from ..core import NetworkConfig

EPS = 1e-12


class OutcomeKind(enum.Enum):
    DELIVERED = "delivered"
    COLLIDED = "collided"
    DROPPED = "dropped"
    DEFERRED = "deferred"


@dataclass(frozen=True)
class DcfParams:
    """Per-direction float timings for the contention loop (seconds)."""

    slot: float
    exchange: float      # full successful exchange incl. trailing DIFS
    collision: float     # failed attempt: frame + response timeout + DIFS
    col_frame: float     # airtime of the colliding PS-Poll / RTS
    difs: float
    own_tx: float        # station's share of a success, trailing DIFS excluded
    own_rx: float
    own_idle: float
    seen_rx: float       # a success as experienced by an overhearing station
    seen_idle: float
    cw_min: int
    cw_max: int
    r_max: int


def dcf_params(direction: Direction, cfg: NetworkConfig) -> DcfParams:
    f, tm, r = cfg.frames, cfg.timing, cfg.data_rate
    sifs, difs = float(tm.t_sifs), float(tm.t_difs)

    def air(bits):
        return float(bits / r)

    if direction is Direction.DL:
        # PS-Poll (STA) / SIFS / DATA (AP) / SIFS / ACK (STA)
        tx, rx, gaps = air(f.l_ps_poll) + air(f.l_ack), air(f.l_data), 2 * sifs
        poll, reply = air(f.l_ps_poll), air(f.l_ack)
    else:
        # RTS (STA) / SIFS / CTS / SIFS / DATA (STA) / SIFS / ACK
        tx, rx, gaps = air(f.l_rts) + air(f.l_data), air(f.l_cts) + air(f.l_ack), 3 * sifs
        poll, reply = air(f.l_rts), air(f.l_cts)
    return DcfParams(
        slot=float(tm.t_slot),
        exchange=float(cfg.exchange(direction.exchange)),
        collision=poll + sifs + reply + difs,
        col_frame=poll,
        difs=difs,
        own_tx=tx,
        own_rx=rx,
        own_idle=gaps,
        seen_rx=tx + rx,
        seen_idle=gaps + difs,
        cw_min=tm.cw_min,
        cw_max=tm.cw_max,
        r_max=tm.r_max,
    )


class ExchangeOutcome(NamedTuple):
    kind: OutcomeKind
    direction: Direction
    station: int
    start: float
    end: float
    backoff_slots: int

    @property
    def airtime(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class StationTimes:
    """How a contender spent its time from segment start until it went back to sleep."""

    tx: float
    rx: float
    idle: float
    leave: float


@dataclass
class SegmentResult:
    outcomes: list[ExchangeOutcome]
    times: dict[int, StationTimes]
    collisions: int = 0

    def of_kind(self, kind: OutcomeKind) -> list[ExchangeOutcome]:
        return [o for o in self.outcomes if o.kind is kind]


def run_dcf_segment(contenders: Sequence[int], start: float, end: float,
                    direction: Direction, params: DcfParams,
                    rng: random.Random) -> SegmentResult:
    """Contend for the channel between ``start`` and ``end``.

    Every contender wakes at ``start`` holding one packet. A station whose
    counter expires transmits only if a whole exchange still fits before
    ``end``; otherwise it defers its packet and goes back to sleep when its
    counter runs out (or the segment closes).
    """
    p = params
    draw = rng.random   # int(u * cw): uniform on [0, cw) to float resolution
    outcomes: list[ExchangeOutcome] = []
    times: dict[int, StationTimes] = {}
    if not contenders:
        return SegmentResult(outcomes, times)

    cw = {}
    retries = {}
    drawn_at = {}      # idle-clock position where the current countdown began
    tx_own = {}
    rx_fix = {}        # own collided frames were counted as overheard rx
    heap = []
    for sid in contenders:
        cw[sid] = p.cw_min
        retries[sid] = 0
        drawn_at[sid] = 0
        tx_own[sid] = rx_fix[sid] = 0.0
        heap.append((int(draw() * p.cw_min), sid))
    heapq.heapify(heap)

    t = start
    v = 0              # idle slots elapsed
    seen_rx = 0.0      # channel time an awake bystander spends receiving
    seen_idle = 0.0    # ... and idle
    collisions = 0
    while heap:
        v_next = heap[0][0]
        t_next = t + (v_next - v) * p.slot
        if t_next + p.exchange > end + EPS:
            # nothing can complete any more; everyone left defers
            for v_exp, sid in sorted(heap):
                leave = min(end, t + (v_exp - v) * p.slot)
                times[sid] = StationTimes(
                    tx=tx_own[sid], rx=seen_rx + rx_fix[sid],
                    idle=seen_idle + (leave - t), leave=leave)
                outcomes.append(ExchangeOutcome(OutcomeKind.DEFERRED, direction, sid,
                                                leave, leave, v_exp - drawn_at[sid]))
            break
        seen_idle += t_next - t
        t, v = t_next, v_next
        firing = []
        while heap and heap[0][0] == v:
            firing.append(heapq.heappop(heap)[1])

        if len(firing) == 1:
            sid = firing[0]
            done = t + p.exchange - p.difs
            outcomes.append(ExchangeOutcome(OutcomeKind.DELIVERED, direction, sid,
                                            t, t + p.exchange, v - drawn_at[sid]))
            times[sid] = StationTimes(
                tx=tx_own[sid] + p.own_tx, rx=seen_rx + rx_fix[sid] + p.own_rx,
                idle=seen_idle + p.own_idle, leave=done)
            seen_rx += p.seen_rx
            seen_idle += p.seen_idle
            t += p.exchange
            continue

        collisions += 1
        t_end = t + p.collision
        for sid in firing:
            outcomes.append(ExchangeOutcome(OutcomeKind.COLLIDED, direction, sid,
                                            t, t_end, v - drawn_at[sid]))
            tx_own[sid] += p.col_frame
            rx_fix[sid] -= p.col_frame
            retries[sid] += 1
            if retries[sid] > p.r_max:
                leave = t_end - p.difs
                times[sid] = StationTimes(
                    tx=tx_own[sid], rx=seen_rx + p.col_frame + rx_fix[sid],
                    idle=seen_idle + (p.collision - p.col_frame - p.difs),
                    leave=leave)
                outcomes.append(ExchangeOutcome(OutcomeKind.DROPPED, direction, sid,
                                                leave, leave, 0))
                continue
            cw[sid] = min(2 * cw[sid], p.cw_max)
            drawn_at[sid] = v
            heapq.heappush(heap, (v + int(draw() * cw[sid]), sid))
        seen_rx += p.col_frame
        seen_idle += p.collision - p.col_frame
        t = t_end
    return SegmentResult(outcomes, times, collisions)

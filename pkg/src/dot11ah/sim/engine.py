"""Period-by-period simulation of a hierarchical-TIM 802.11ah BSS."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from ..capacity import Direction, capacity
from ..core import ConfigError, NetworkConfig
from ..metrics import (
    RunMetrics,
    StateLedger,
    channel_capacity,
    energy_per_node,
)
from .dcf import OutcomeKind, dcf_params, run_dcf_segment
from .schedule import SegmentSchedule, SlotKind, build_schedule
from .stations import Aid, assign_stations, generate_traffic


@dataclass(frozen=True)
class Station:
    """Snapshot of one simulated node."""

    aid: Aid
    dl_pending: int
    ul_pending: int
    ledger: StateLedger


@dataclass(frozen=True)
class ChannelEvent:
    start: float
    end: float
    kind: str                 # slot kind or outcome kind
    interval: int
    stations: tuple[int, ...] = ()


@dataclass
class Trace:
    """Channel activity of a run, for invariant checking on small configs."""

    events: list[ChannelEvent] = field(default_factory=list)
    segments: list[tuple[float, float, SlotKind, int]] = field(default_factory=list)


def _owner_members(schedule: SegmentSchedule, aids: list[Aid]) -> list[np.ndarray]:
    members = []
    for owner in schedule.owners():
        idx = [k for k, a in enumerate(aids) if owner.owns(a.page, a.tim_group)]
        members.append(np.asarray(idx, dtype=np.int64))
    return members


def _rngs(seed: int) -> tuple[np.random.Generator, random.Random]:
    traffic_seq, backoff_seq = np.random.SeedSequence(seed).spawn(2)
    backoff = random.Random(int(backoff_seq.generate_state(1, dtype=np.uint64)[0]))
    return np.random.default_rng(traffic_seq), backoff


class Simulation:
    """One seeded run. ``run()`` may be called once."""

    def __init__(self, cfg: NetworkConfig, n_sta: int, seed: int = 0, *,
                 n_dtim: int | None = None, trace: bool = False):
        if n_sta < 1:
            raise ConfigError("need at least one station")
        self.cfg = cfg
        self.n_sta = n_sta
        self.seed = seed
        self.n_dtim = cfg.timing.n_dtim if n_dtim is None else n_dtim
        self.schedule = build_schedule(cfg)
        self.aids = assign_stations(n_sta, cfg.signalling)
        self.members = _owner_members(self.schedule, self.aids)
        self.owner_of = np.empty(n_sta, dtype=np.int64)
        for i, m in enumerate(self.members):
            self.owner_of[m] = i
        self.trace = Trace() if trace else None

        self.dl_q = np.zeros(n_sta, dtype=np.int64)
        self.ul_q = np.zeros(n_sta, dtype=np.int64)
        self.tx = np.zeros(n_sta)
        self.rx = np.zeros(n_sta)
        self.idle = np.zeros(n_sta)
        self.awake = np.zeros(n_sta)
        self.counts = {k: 0 for k in ("gen_dl", "gen_ul", "del_dl", "del_ul",
                                      "drop_dl", "drop_ul", "deferred", "collisions")}
        self._traffic_rng, self._backoff_rng = _rngs(seed)
        self._params = {d: dcf_params(d, cfg) for d in Direction}
        self._done = False

    def station(self, k: int) -> Station:
        return Station(self.aids[k], int(self.dl_q[k]), int(self.ul_q[k]), self._ledger()[k])

    def _ledger(self):
        duration = self.n_dtim * float(self.cfg.timing.t_dtim_period)
        sleep = duration - self.awake
        return _LedgerView(self.tx, self.rx, self.idle, sleep)

    def run(self) -> RunMetrics:
        if self._done:
            raise RuntimeError("simulation already run")
        self._done = True
        period = float(self.cfg.timing.t_dtim_period)
        for d in range(self.n_dtim):
            self._period(d, d * period)

        duration = self.n_dtim * period
        ledger = StateLedger(self.tx.copy(), self.rx.copy(), self.idle.copy(),
                             duration - self.awake)
        cap = capacity(self.cfg)
        c = self.counts
        return RunMetrics(
            seed=self.seed,
            n_sta=self.n_sta,
            generated_dl=c["gen_dl"],
            generated_ul=c["gen_ul"],
            delivered_dl=c["del_dl"],
            delivered_ul=c["del_ul"],
            dropped_dl=c["drop_dl"],
            dropped_ul=c["drop_ul"],
            queued_dl=int(self.dl_q.sum()),
            queued_ul=int(self.ul_q.sum()),
            deferred=c["deferred"],
            collisions=c["collisions"],
            capacity_dl=channel_capacity(cap.n_dl, self.n_dtim),
            capacity_ul=channel_capacity(cap.n_ul, self.n_dtim),
            duration=duration,
            ledger=ledger,
            energy=energy_per_node(ledger, self.cfg.power),
            group_of=self.owner_of.copy(),
        )

    def _period(self, d: int, base: float) -> None:
        cfg = self.cfg
        dl_sel, ul_sel = generate_traffic(cfg.traffic, self.n_sta, self._traffic_rng)
        np.add.at(self.dl_q, dl_sel, 1)
        np.add.at(self.ul_q, ul_sel, 1)
        self.counts["gen_dl"] += len(dl_sel)
        self.counts["gen_ul"] += len(ul_sel)

        for entry in self.schedule.entries:
            start, end = base + float(entry.start), base + float(entry.end)
            kind = entry.kind
            if self.trace is not None:
                self.trace.segments.append((start, end, kind, entry.interval))
            if kind is SlotKind.DTIM_BEACON:
                # every associated station listens to every DTIM
                self.rx += end - start
                self.awake += end - start
                self._log(start, end, kind.value, entry.interval)
            elif kind is SlotKind.MULTICAST:
                airtime = float(cfg.frames.l_data / cfg.data_rate)
                if cfg.mc_listen:
                    self.rx += airtime
                    self.awake += airtime
                self._log(start, start + airtime, kind.value, entry.interval)
            elif kind is SlotKind.TIM_BEACON:
                members = self.members[entry.interval]
                busy = members[(self.dl_q[members] > 0) | (self.ul_q[members] > 0)]
                self.rx[busy] += end - start
                self.awake[busy] += end - start
                self._log(start, end, kind.value, entry.interval)
            else:
                direction = Direction.DL if kind is SlotKind.DOWNLINK else Direction.UL
                self._segment(entry.interval, start, end, direction)

    def _segment(self, interval: int, start: float, end: float, direction: Direction) -> None:
        members = self.members[interval]
        queue = self.dl_q if direction is Direction.DL else self.ul_q
        contenders = members[queue[members] > 0].tolist()
        if not contenders:
            return
        res = run_dcf_segment(contenders, start, end, direction,
                              self._params[direction], self._backoff_rng)
        for sid, st in res.times.items():
            self.tx[sid] += st.tx
            self.rx[sid] += st.rx
            self.idle[sid] += st.idle
            self.awake[sid] += st.leave - start
        tag = direction.value.lower()
        c = self.counts
        c["collisions"] += res.collisions
        for o in res.outcomes:
            if o.kind is OutcomeKind.DELIVERED:
                queue[o.station] -= 1
                c["del_" + tag] += 1
            elif o.kind is OutcomeKind.DROPPED:
                queue[o.station] -= 1
                c["drop_" + tag] += 1
            elif o.kind is OutcomeKind.DEFERRED:
                c["deferred"] += 1
        if self.trace is not None:
            self._trace_outcomes(res.outcomes, interval)

    def _log(self, start, end, kind, interval, stations=()):
        if self.trace is not None:
            self.trace.events.append(ChannelEvent(start, end, kind, interval, tuple(stations)))

    def _trace_outcomes(self, outcomes, interval):
        spans: dict[tuple[float, float], list] = {}
        for o in outcomes:
            if o.kind in (OutcomeKind.DELIVERED, OutcomeKind.COLLIDED):
                spans.setdefault((o.start, o.end, o.kind.value), []).append(o.station)
        for (start, end, kind), who in spans.items():
            self._log(start, end, kind, interval, who)


@dataclass(frozen=True)
class _LedgerView:
    tx: np.ndarray
    rx: np.ndarray
    idle: np.ndarray
    sleep: np.ndarray

    def __getitem__(self, k) -> StateLedger:
        return StateLedger(float(self.tx[k]), float(self.rx[k]), float(self.idle[k]),
                           float(self.sleep[k]))


def simulate(cfg: NetworkConfig, n_sta: int, seed: int = 0, *,
             n_dtim: int | None = None) -> RunMetrics:
    return Simulation(cfg, n_sta, seed, n_dtim=n_dtim).run()

"""Figures of merit: delivery ratio, channel capacity, efficiency and energy."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

POWER_STATES = ("tx", "rx", "idle", "sleep")


@dataclass(frozen=True)
class PowerProfile:
    """Radio power draw per state, in watts."""

    p_tx: float = 1.4
    p_rx: float = 0.9
    p_idle: float = 0.7
    p_sleep: float = 0.06

    def __post_init__(self):
        if min(self.p_tx, self.p_rx, self.p_idle, self.p_sleep) < 0:
            raise ValueError("power draw cannot be negative")


@dataclass(frozen=True)
class StateLedger:
    """Seconds spent in each power state. Fields may be scalars or arrays."""

    tx: float | np.ndarray = 0.0
    rx: float | np.ndarray = 0.0
    idle: float | np.ndarray = 0.0
    sleep: float | np.ndarray = 0.0

    @property
    def total(self):
        return self.tx + self.rx + self.idle + self.sleep

    def scaled(self, k: float) -> "StateLedger":
        return StateLedger(self.tx * k, self.rx * k, self.idle * k, self.sleep * k)


@dataclass(frozen=True)
class EnergyBreakdown:
    tx: float | np.ndarray
    rx: float | np.ndarray
    idle: float | np.ndarray
    sleep: float | np.ndarray

    @property
    def total(self):
        return self.tx + self.rx + self.idle + self.sleep


@dataclass
class RunMetrics:
    """Outcome of one simulation run."""

    seed: int
    n_sta: int
    generated_dl: int
    generated_ul: int
    delivered_dl: int
    delivered_ul: int
    dropped_dl: int
    dropped_ul: int
    queued_dl: int
    queued_ul: int
    deferred: int
    collisions: int
    capacity_dl: int
    capacity_ul: int
    duration: float
    ledger: StateLedger
    energy: EnergyBreakdown
    group_of: np.ndarray = field(repr=False)

    @property
    def pdr_dl(self) -> float:
        return pdr(self.delivered_dl, self.generated_dl)

    @property
    def pdr_ul(self) -> float:
        return pdr(self.delivered_ul, self.generated_ul)

    @property
    def pdr_total(self) -> float:
        return pdr(self.delivered_dl + self.delivered_ul, self.generated_dl + self.generated_ul)

    @property
    def efficiency_dl(self) -> float:
        return efficiency(self.delivered_dl, self.capacity_dl) if self.capacity_dl else 0.0

    @property
    def efficiency_ul(self) -> float:
        return efficiency(self.delivered_ul, self.capacity_ul) if self.capacity_ul else 0.0

    @property
    def drops(self) -> int:
        return self.dropped_dl + self.dropped_ul

    @property
    def sleep_fraction(self) -> np.ndarray:
        """Per-station share of the run spent asleep."""
        return self.ledger.sleep / self.duration

    @property
    def energy_per_node(self) -> float:
        return float(np.mean(self.energy.total))

    def mean_energy(self) -> dict[str, float]:
        out = {s: float(np.mean(getattr(self.energy, s))) for s in POWER_STATES}
        out["total"] = self.energy_per_node
        return out

    def energy_quantiles(self, qs=(0.05, 0.5, 0.95)) -> dict[float, float]:
        return dict(zip(qs, np.quantile(self.energy.total, qs).tolist()))

    def group_energy(self) -> dict[int, float]:
        """Mean per-node energy for each (page, group) owner key."""
        totals = np.asarray(self.energy.total)
        return {int(g): float(totals[self.group_of == g].mean())
                for g in np.unique(self.group_of)}


def pdr(delivered: int, generated: int) -> float:
    if delivered < 0 or generated < 0:
        raise ValueError("packet counts cannot be negative")
    if delivered > generated:
        raise ValueError(f"delivered ({delivered}) exceeds generated ({generated})")
    if generated == 0:
        return 1.0
    return delivered / generated


def channel_capacity(n_psi: int, n_dtim: int) -> int:
    """Packets the model says the network could carry over a whole run."""
    if n_psi < 0 or n_dtim < 0:
        raise ValueError("inputs must be nonnegative")
    return n_psi * n_dtim


def efficiency(delivered: int, capacity: int) -> float:
    if capacity <= 0:
        raise ValueError("capacity must be positive")
    return delivered / capacity


def energy_per_node(ledger: StateLedger, profile: PowerProfile = PowerProfile()) -> EnergyBreakdown:
    for state in POWER_STATES:
        if np.any(np.asarray(getattr(ledger, state)) < 0):
            raise ValueError(f"negative time in state {state}")
    return EnergyBreakdown(
        tx=ledger.tx * profile.p_tx,
        rx=ledger.rx * profile.p_rx,
        idle=ledger.idle * profile.p_idle,
        sleep=ledger.sleep * profile.p_sleep,
    )

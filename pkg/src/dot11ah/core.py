"""Protocol constants, parameter tables and derived durations for IEEE 802.11ah.

All frame lengths are held in bits and all durations as exact ``Fraction``
seconds; nothing is rounded until it is printed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .metrics import PowerProfile

MICROSECOND = Fraction(1, 1_000_000)
MAX_STATIONS = 8191  # 13-bit AID space
BITMAP_BITS = 2048


class ConfigError(ValueError):
    """Raised for parameter values that violate a model invariant."""


class SignallingMode(enum.Enum):
    TIM_OFFSET = "tim-offset"
    NON_TIM_OFFSET = "non-tim-offset"

    @classmethod
    def parse(cls, text: str) -> "SignallingMode":
        key = text.strip().lower().replace("_", "-").replace(" ", "-")
        aliases = {
            "tim-offset": cls.TIM_OFFSET,
            "timo": cls.TIM_OFFSET,
            "tim": cls.TIM_OFFSET,
            "non-tim-offset": cls.NON_TIM_OFFSET,
            "non-timo": cls.NON_TIM_OFFSET,
            "nontimoffset": cls.NON_TIM_OFFSET,
            "non-tim": cls.NON_TIM_OFFSET,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ConfigError(f"unknown signalling mode {text!r}") from None


class Exchange(enum.Enum):
    MULTICAST = "multicast"
    DOWNLINK = "downlink"
    UPLINK = "uplink"


@dataclass(frozen=True)
class McsEntry:
    index: int
    modulation: str
    coding_rate: Fraction
    data_rate: int  # bits/s

    def __post_init__(self):
        if self.data_rate <= 0:
            raise ConfigError(f"MCS {self.index}: data rate must be positive")


# 1 MHz channel, one spatial stream.
MCS_TABLE: tuple[McsEntry, ...] = (
    McsEntry(0, "BPSK", Fraction(1, 2), 300_000),
    McsEntry(1, "QPSK", Fraction(1, 2), 600_000),
    McsEntry(2, "QPSK", Fraction(3, 4), 900_000),
    McsEntry(3, "16-QAM", Fraction(1, 2), 1_200_000),
    McsEntry(4, "16-QAM", Fraction(3, 4), 1_800_000),
    McsEntry(5, "64-QAM", Fraction(2, 3), 2_400_000),
    McsEntry(6, "64-QAM", Fraction(3, 4), 2_700_000),
    McsEntry(7, "64-QAM", Fraction(5, 6), 3_000_000),
    McsEntry(8, "256-QAM", Fraction(3, 4), 3_600_000),
    McsEntry(9, "256-QAM", Fraction(5, 6), 4_000_000),
    McsEntry(10, "BPSK", Fraction(1, 4), 150_000),
)


def mcs_rate(index: int, table: tuple[McsEntry, ...] = MCS_TABLE) -> int:
    for entry in table:
        if entry.index == index:
            return entry.data_rate
    raise ConfigError(f"no MCS entry with index {index}")


def override_mcs_rates(overrides: dict[int, int],
                       table: tuple[McsEntry, ...] = MCS_TABLE) -> tuple[McsEntry, ...]:
    """Return a copy of ``table`` with selected data rates replaced."""
    known = {e.index for e in table}
    unknown = set(overrides) - known
    if unknown:
        raise ConfigError(f"unknown MCS index in override: {sorted(unknown)}")
    return tuple(replace(e, data_rate=overrides[e.index]) if e.index in overrides else e
                 for e in table)


@dataclass(frozen=True)
class TimingParams:
    t_slot: Fraction = 9 * MICROSECOND
    t_sifs: Fraction = 16 * MICROSECOND
    t_difs: Fraction = 34 * MICROSECOND
    cw_min: int = 16
    cw_max: int = 1024
    r_max: int = 7
    t_dtim_period: Fraction = Fraction(8, 5)  # T
    n_dtim: int = 100

    def __post_init__(self):
        for name in ("t_slot", "t_sifs", "t_difs", "t_dtim_period"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.cw_min <= self.cw_max:
            raise ConfigError("cw_min/cw_max: need 0 < cw_min <= cw_max")
        ratio, rem = divmod(self.cw_max, self.cw_min)
        if rem or ratio & (ratio - 1):
            raise ConfigError("cw_max must be cw_min times a power of two")
        if self.r_max < 0:
            raise ConfigError("r_max must be nonnegative")
        if self.n_dtim < 0:
            raise ConfigError("n_dtim must be nonnegative")


@dataclass(frozen=True)
class FrameLengths:
    l_data: int = 800
    l_ps_poll: int = 112
    l_ack: int = 112
    l_rts: int = 160
    l_cts: int = 112
    l_sbf: int = 200

    def __post_init__(self):
        for name, value in vars(self).items():
            if value <= 0:
                raise ConfigError(f"{name} must be positive")


@dataclass(frozen=True)
class SignallingConfig:
    mode: SignallingMode = SignallingMode.NON_TIM_OFFSET
    n_tim: int = 8
    n_pages: int = 4

    def __post_init__(self):
        if self.n_tim < 1:
            raise ConfigError("n_tim must be >= 1")
        if self.n_pages < 1:
            raise ConfigError("n_pages must be >= 1")
        if BITMAP_BITS % self.n_tim:
            raise ConfigError(f"n_tim={self.n_tim} does not divide {BITMAP_BITS}")


@dataclass(frozen=True)
class TrafficPattern:
    alpha_dl: Fraction = Fraction(15, 100)
    alpha_ul: Fraction = Fraction(15, 100)

    def __post_init__(self):
        for name in ("alpha_dl", "alpha_ul"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.alpha_dl + self.alpha_ul <= 0:
            raise ConfigError("alpha_dl + alpha_ul must be positive")

    @property
    def beta_dl(self) -> Fraction:
        return Fraction(self.alpha_dl) / (self.alpha_dl + self.alpha_ul)

    @property
    def beta_ul(self) -> Fraction:
        return 1 - self.beta_dl


@dataclass(frozen=True)
class BeaconLengths:
    l_dtim: int
    l_tim: int
    l_dtim_ie: int
    l_tim_ie: int
    l_raw_ie: int


@dataclass(frozen=True)
class NetworkConfig:
    """Everything needed to evaluate or simulate one scenario."""

    timing: TimingParams = field(default_factory=TimingParams)
    frames: FrameLengths = field(default_factory=FrameLengths)
    signalling: SignallingConfig = field(default_factory=SignallingConfig)
    traffic: TrafficPattern = field(default_factory=TrafficPattern)
    data_rate: Fraction = Fraction(1_800_000)
    power: PowerProfile = field(default_factory=PowerProfile)
    mc_listen: bool = False

    def __post_init__(self):
        if self.data_rate <= 0:
            raise ConfigError("data_rate_bps must be positive")

    @property
    def mode(self) -> SignallingMode:
        return self.signalling.mode

    def with_mode(self, mode: SignallingMode) -> "NetworkConfig":
        return replace(self, signalling=replace(self.signalling, mode=mode))

    def with_traffic(self, alpha_dl, alpha_ul) -> "NetworkConfig":
        return replace(self, traffic=TrafficPattern(Fraction(alpha_dl), Fraction(alpha_ul)))

    def with_rate(self, rate) -> "NetworkConfig":
        return replace(self, data_rate=Fraction(rate))

    # derived quantities used by both the model and the simulator

    @property
    def scale(self) -> int:
        return scale_factor(self.signalling)

    @property
    def beacons(self) -> BeaconLengths:
        return beacon_lengths(self.signalling, self.frames)

    @property
    def interval(self) -> Fraction:
        """Length of one beacon interval, T / M."""
        return self.timing.t_dtim_period / self.scale

    @property
    def t_dtim_beacon(self) -> Fraction:
        return beacon_airtime(self.beacons.l_dtim, self.data_rate)

    @property
    def t_tim_beacon(self) -> Fraction:
        return beacon_airtime(self.beacons.l_tim, self.data_rate)

    def exchange(self, kind: Exchange) -> Fraction:
        return exchange_time(kind, self.frames, self.timing, self.data_rate)


def paper_defaults() -> NetworkConfig:
    """The 'paper-defaults' preset: 1.6 s DTIM, 8 TIM groups, 4 pages, MCS 4."""
    return NetworkConfig()


def scale_factor(sig: SignallingConfig) -> int:
    """Beacon intervals per DTIM period for the signalling mode."""
    if sig.mode is SignallingMode.TIM_OFFSET:
        return sig.n_tim * sig.n_pages
    return sig.n_tim


def beacon_lengths(sig: SignallingConfig, frames: FrameLengths) -> BeaconLengths:
    if BITMAP_BITS % sig.n_tim:
        raise ConfigError(f"n_tim={sig.n_tim} does not divide {BITMAP_BITS}")
    n_tim, n_p = sig.n_tim, sig.n_pages
    dtim_ie = (32 + n_tim + n_tim) * n_p
    tim_ie = 40 + BITMAP_BITS // n_tim
    if sig.mode is SignallingMode.NON_TIM_OFFSET:
        tim_ie *= n_p
    raw_ie = (16 + n_tim * 32) * n_p
    return BeaconLengths(
        l_dtim=frames.l_sbf + dtim_ie + tim_ie + raw_ie,
        l_tim=frames.l_sbf + tim_ie,
        l_dtim_ie=dtim_ie,
        l_tim_ie=tim_ie,
        l_raw_ie=raw_ie,
    )


def _check_rate(rate) -> Fraction:
    rate = Fraction(rate)
    if rate <= 0:
        raise ConfigError("data rate must be positive")
    return rate


def exchange_time(kind: Exchange, frames: FrameLengths, timing: TimingParams, rate) -> Fraction:
    """Airtime of one complete frame exchange, trailing DIFS included."""
    rate = _check_rate(rate)
    if kind is Exchange.MULTICAST:
        return frames.l_data / rate + timing.t_difs
    if kind is Exchange.DOWNLINK:
        bits = frames.l_ps_poll + frames.l_data + frames.l_ack
        return bits / rate + 2 * timing.t_sifs + timing.t_difs
    if kind is Exchange.UPLINK:
        bits = frames.l_rts + frames.l_cts + frames.l_data + frames.l_ack
        return bits / rate + 3 * timing.t_sifs + timing.t_difs
    raise ValueError(kind)


def beacon_airtime(length: int, rate) -> Fraction:
    rate = _check_rate(rate)
    if length <= 0:
        raise ConfigError("beacon length must be positive")
    return Fraction(length) / rate


def per_station_rate(pattern: TrafficPattern, frames: FrameLengths,
                     timing: TimingParams) -> tuple[Fraction, Fraction]:
    """Mean offered load per station, (downlink, uplink) in bit/s."""
    per_packet = frames.l_data / timing.t_dtim_period
    return pattern.alpha_dl * per_packet, pattern.alpha_ul * per_packet

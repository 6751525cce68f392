from fractions import Fraction

import pytest

from dot11ah.core import (
    MCS_TABLE,
    ConfigError,
    Exchange,
    FrameLengths,
    SignallingConfig,
    SignallingMode,
    TimingParams,
    TrafficPattern,
    beacon_airtime,
    beacon_lengths,
    exchange_time,
    mcs_rate,
    override_mcs_rates,
    per_station_rate,
    scale_factor,
)

TIMO = SignallingMode.TIM_OFFSET
NON = SignallingMode.NON_TIM_OFFSET
US = Fraction(1, 10**6)
FRAMES = FrameLengths()
TIMING = TimingParams()

N_TIMS = (1, 2, 4, 8, 16, 32)
N_PAGES = (1, 2, 4)


def test_mcs_table_rows():
    assert [e.index for e in MCS_TABLE] == list(range(11))
    assert [e.data_rate // 1000 for e in MCS_TABLE] == [
        300, 600, 900, 1200, 1800, 2400, 2700, 3000, 3600, 4000, 150]
    assert MCS_TABLE[9].modulation == "256-QAM" and MCS_TABLE[9].coding_rate == Fraction(5, 6)
    assert MCS_TABLE[10].coding_rate == Fraction(1, 4)
    assert mcs_rate(4) == 1_800_000


def test_mcs_override():
    table = override_mcs_rates({4: 2_000_000})
    assert mcs_rate(4, table) == 2_000_000
    assert mcs_rate(4) == 1_800_000
    with pytest.raises(ConfigError):
        override_mcs_rates({11: 1})


def test_frame_defaults_are_bits():
    assert (FRAMES.l_data, FRAMES.l_ps_poll, FRAMES.l_ack, FRAMES.l_rts, FRAMES.l_cts) == (
        100 * 8, 14 * 8, 14 * 8, 20 * 8, 14 * 8)
    assert FRAMES.l_sbf == 200


@pytest.mark.parametrize("mode, n_tim, n_p, expected", [
    (TIMO, 8, 4, 32),
    (NON, 8, 4, 8),
    (TIMO, 1, 1, 1),
])
def test_scale_factor(mode, n_tim, n_p, expected):
    assert scale_factor(SignallingConfig(mode, n_tim, n_p)) == expected


def test_beacon_lengths_non_offset():
    # (32+8+8)*4 = 192; (40+256)*4 = 1184; (16+256)*4 = 1088; 200+192+1184+1088 = 2664
    b = beacon_lengths(SignallingConfig(NON, 8, 4), FRAMES)
    assert (b.l_dtim_ie, b.l_tim_ie, b.l_raw_ie, b.l_dtim, b.l_tim) == (192, 1184, 1088, 2664, 1384)


def test_beacon_lengths_offset():
    # single-page TIM IE: 40+256 = 296; the DTIM carries that same IE: 200+192+296+1088
    b = beacon_lengths(SignallingConfig(TIMO, 8, 4), FRAMES)
    assert (b.l_tim_ie, b.l_tim) == (296, 496)
    assert b.l_dtim == 1776


def test_beacon_lengths_unit_parameters():
    assert beacon_lengths(SignallingConfig(TIMO, 1, 1), FRAMES).l_tim_ie == 2088


def test_bitmap_must_split_evenly():
    with pytest.raises(ConfigError):
        SignallingConfig(NON, 7, 4)
    with pytest.raises(ConfigError):
        SignallingConfig(NON, 0, 4)


@pytest.mark.parametrize("n_tim", N_TIMS)
@pytest.mark.parametrize("n_p", N_PAGES)
def test_beacon_mode_relation(n_tim, n_p):
    off = beacon_lengths(SignallingConfig(TIMO, n_tim, n_p), FRAMES)
    non = beacon_lengths(SignallingConfig(NON, n_tim, n_p), FRAMES)
    assert non.l_tim_ie == n_p * off.l_tim_ie
    assert non.l_dtim_ie == off.l_dtim_ie
    assert non.l_raw_ie == off.l_raw_ie
    for b in (off, non):
        assert b.l_dtim == FRAMES.l_sbf + b.l_dtim_ie + b.l_tim_ie + b.l_raw_ie
        assert b.l_tim == FRAMES.l_sbf + b.l_tim_ie
    assert non.l_dtim - off.l_dtim == (n_p - 1) * (40 + 2048 // n_tim)


def test_exchange_time_values():
    r = 1_800_000
    dl = exchange_time(Exchange.DOWNLINK, FRAMES, TIMING, r)
    ul = exchange_time(Exchange.UPLINK, FRAMES, TIMING, r)
    assert dl == Fraction(112 + 800 + 112, r) + 2 * 16 * US + 34 * US
    assert ul == Fraction(160 + 112 + 800 + 112, r) + 3 * 16 * US + 34 * US
    assert abs(float(dl) - 634.9e-6) < 0.1e-6
    assert abs(float(ul) - 739.8e-6) < 0.1e-6
    mc = exchange_time(Exchange.MULTICAST, FRAMES, TIMING, 10**15)
    assert abs(mc - 34 * US) < Fraction(1, 10**9)


def test_exchange_time_rejects_bad_rate():
    for bad in (0, -1):
        with pytest.raises(ConfigError):
            exchange_time(Exchange.UPLINK, FRAMES, TIMING, bad)
        with pytest.raises(ConfigError):
            beacon_airtime(100, bad)


@pytest.mark.parametrize("n_tim", N_TIMS)
@pytest.mark.parametrize("n_p", N_PAGES)
def test_exchange_time_monotone_and_additive(n_tim, n_p):
    # n_tim/n_p don't enter exchange_time; they vary the grid of rates checked
    rates = [e.data_rate * n_tim // n_p for e in MCS_TABLE]
    for kind in Exchange:
        values = [exchange_time(kind, FRAMES, TIMING, r) for r in sorted(set(rates))]
        assert all(a > b for a, b in zip(values, values[1:]))
    for r in rates:
        gap = exchange_time(Exchange.UPLINK, FRAMES, TIMING, r) - \
            exchange_time(Exchange.DOWNLINK, FRAMES, TIMING, r)
        assert gap == Fraction(FRAMES.l_rts + FRAMES.l_cts - FRAMES.l_ps_poll, r) + TIMING.t_sifs


def test_beacon_airtime():
    assert beacon_airtime(2664, 1_800_000) == Fraction(148, 100_000)  # 1.48 ms
    assert abs(float(beacon_airtime(1384, 1_800_000)) - 768.9e-6) < 0.05e-6
    assert beacon_airtime(12345, 12345) == 1


@pytest.mark.parametrize("alphas, expected", [
    ((Fraction(15, 100), Fraction(15, 100)), (75, 75)),
    ((Fraction(15, 100), Fraction(45, 100)), (75, 225)),
    ((Fraction(0), Fraction(30, 100)), (0, 150)),
])
def test_per_station_rate(alphas, expected):
    assert per_station_rate(TrafficPattern(*alphas), FRAMES, TIMING) == expected


def test_traffic_shares():
    p = TrafficPattern(Fraction(15, 100), Fraction(45, 100))
    assert (p.beta_dl, p.beta_ul) == (Fraction(1, 4), Fraction(3, 4))
    with pytest.raises(ConfigError):
        TrafficPattern(Fraction(0), Fraction(0))
    with pytest.raises(ConfigError):
        TrafficPattern(Fraction(-1, 10), Fraction(1, 2))


def test_timing_validation():
    with pytest.raises(ConfigError):
        TimingParams(cw_min=16, cw_max=1000)
    with pytest.raises(ConfigError):
        TimingParams(cw_min=32, cw_max=16)
    with pytest.raises(ConfigError):
        TimingParams(t_slot=Fraction(0))
    assert TimingParams(cw_min=15, cw_max=15 * 64).cw_max == 960

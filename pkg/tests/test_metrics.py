import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dot11ah.metrics import (
    PowerProfile,
    StateLedger,
    channel_capacity,
    efficiency,
    energy_per_node,
    pdr,
)


def test_pdr_values():
    assert pdr(90, 100) == 0.9
    assert pdr(0, 0) == 1.0
    with pytest.raises(ValueError):
        pdr(101, 100)
    with pytest.raises(ValueError):
        pdr(-1, 5)


def test_channel_capacity_and_efficiency():
    assert channel_capacity(1071, 100) == 107_100
    assert efficiency(96_390, 107_100) == pytest.approx(0.9)
    with pytest.raises(ValueError):
        efficiency(1, 0)
    with pytest.raises(ValueError):
        channel_capacity(-1, 3)


def test_energy_of_a_known_ledger():
    # 1 ms tx, 2 ms rx, 3 ms idle, rest of 1 s asleep
    led = StateLedger(1e-3, 2e-3, 3e-3, 1 - 6e-3)
    e = energy_per_node(led)
    assert e.tx == pytest.approx(1.4e-3)
    assert e.rx == pytest.approx(1.8e-3)
    assert e.idle == pytest.approx(2.1e-3)
    assert e.sleep == pytest.approx(0.06 * 0.994)
    assert e.total == pytest.approx(1.4e-3 + 1.8e-3 + 2.1e-3 + 0.05964)


def test_energy_vectorised_and_custom_profile():
    led = StateLedger(np.array([0.0, 1.0]), np.zeros(2), np.zeros(2), np.array([1.0, 0.0]))
    e = energy_per_node(led, PowerProfile(p_tx=2.0, p_sleep=0.5))
    assert np.allclose(e.total, [0.5, 2.0])


def test_energy_rejects_negative_time():
    with pytest.raises(ValueError):
        energy_per_node(StateLedger(tx=-1.0))
    with pytest.raises(ValueError):
        PowerProfile(p_rx=-0.1)


def test_all_asleep_costs_sleep_power():
    assert energy_per_node(StateLedger(sleep=160.0)).total == pytest.approx(9.6)


@given(st.lists(st.floats(0, 10), min_size=4, max_size=4), st.floats(0.1, 10))
def test_energy_is_linear_in_time(times, k):
    led = StateLedger(*times)
    assert energy_per_node(led.scaled(k)).total == pytest.approx(k * energy_per_node(led).total)
    assert led.scaled(k).total == pytest.approx(k * led.total)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_pdr_bounded(a, b):
    lo, hi = sorted((a, b))
    assert 0 <= pdr(lo, hi) <= 1

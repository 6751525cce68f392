"""Flat key-value configuration files, scenario presets and run manifests.

A config file is a list of ``key = value`` lines; ``#`` starts a comment.
Every key that carries a unit has it in its name. Absent keys take the
``paper-defaults`` values. Recognised keys::

    preset              paper-defaults (the only preset; optional)
    t_dtim_period_s     DTIM period T                       1.6
    t_slot_us           slot time                           9
    t_sifs_us           SIFS                                16
    t_difs_us           DIFS                                34
    cw_min, cw_max      contention window bounds (slots)    16, 1024
    r_max               retransmission limit                7
    n_dtim              DTIM periods per simulation run     100
    l_data_bytes        data frame                          100
    l_ps_poll_bytes     PS-Poll                             14
    l_ack_bytes         ACK                                 14
    l_rts_bytes         RTS                                 20
    l_cts_bytes         CTS                                 14
    l_sbf_bits          short beacon frame                  200
    mode                tim-offset | non-tim-offset         non-tim-offset
    n_tim               TIM groups per page (divides 2048)  8
    n_pages             pages                               4
    scenario            A | B | C (sets alpha_dl, alpha_ul)  A
    alpha_dl, alpha_ul  share of stations with DL/UL data
    mcs_index           row of the MCS table to use         4
    data_rate_bps       explicit PHY rate (wins over mcs_index)
    mcs<i>_data_rate_bps  replace the rate of MCS table row i
    p_tx_mw, p_rx_mw, p_idle_mw, p_sleep_mw   power draw    1400, 900, 700, 60
    mc_listen           stations receive the multicast slot  false
"""

from __future__ import annotations

import configparser
import hashlib
import json
import re
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .core import (
    MCS_TABLE,
    MICROSECOND,
    ConfigError,
    NetworkConfig,
    SignallingMode,
    TrafficPattern,
    mcs_rate,
    override_mcs_rates,
    paper_defaults,
)
from .metrics import PowerProfile

PRESETS = ("paper-defaults",)


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    alpha_dl: Fraction
    alpha_ul: Fraction

    @property
    def pattern(self) -> TrafficPattern:
        return TrafficPattern(self.alpha_dl, self.alpha_ul)


SCENARIOS: dict[str, ScenarioPreset] = {
    "A": ScenarioPreset("A", Fraction(15, 100), Fraction(15, 100)),
    "B": ScenarioPreset("B", Fraction(15, 100), Fraction(30, 100)),
    "C": ScenarioPreset("C", Fraction(15, 100), Fraction(45, 100)),
}


def scenario(name: str) -> ScenarioPreset:
    try:
        return SCENARIOS[name.strip().upper()]
    except KeyError:
        raise ConfigError(f"unknown scenario {name!r} (expected A, B or C)") from None


class ConfigKeyError(ConfigError):
    """A config value failed validation; ``key`` names the culprit."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _number(key: str, text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigKeyError(key, f"not a number: {text!r}") from None


def _integer(key: str, text: str) -> int:
    value = _number(key, text)
    if value.denominator != 1:
        raise ConfigKeyError(key, f"expected an integer, got {text!r}")
    return int(value)


def _boolean(key: str, text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigKeyError(key, f"expected a boolean, got {text!r}")


_TIMING = {
    "t_dtim_period_s": ("t_dtim_period", lambda k, v: _number(k, v)),
    "t_slot_us": ("t_slot", lambda k, v: _number(k, v) * MICROSECOND),
    "t_sifs_us": ("t_sifs", lambda k, v: _number(k, v) * MICROSECOND),
    "t_difs_us": ("t_difs", lambda k, v: _number(k, v) * MICROSECOND),
    "cw_min": ("cw_min", _integer),
    "cw_max": ("cw_max", _integer),
    "r_max": ("r_max", _integer),
    "n_dtim": ("n_dtim", _integer),
}
_FRAMES = {
    "l_data_bytes": "l_data",
    "l_ps_poll_bytes": "l_ps_poll",
    "l_ack_bytes": "l_ack",
    "l_rts_bytes": "l_rts",
    "l_cts_bytes": "l_cts",
}
_POWER = {"p_tx_mw": "p_tx", "p_rx_mw": "p_rx", "p_idle_mw": "p_idle", "p_sleep_mw": "p_sleep"}
_MCS_OVERRIDE = re.compile(r"^mcs(\d+)_data_rate_bps$")
_OTHER = {"preset", "mode", "n_tim", "n_pages", "scenario", "alpha_dl", "alpha_ul",
          "mcs_index", "data_rate_bps", "mc_listen", "l_sbf_bits"}


def parse_config(text: str) -> NetworkConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",),
                                       comment_prefixes=("#", ";"))
    try:
        parser.read_string("[config]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    return config_from_mapping(dict(parser["config"]))


def config_from_mapping(values: dict[str, str]) -> NetworkConfig:
    values = {k.strip().lower(): str(v) for k, v in values.items()}
    for key in values:
        if key not in _TIMING and key not in _FRAMES and key not in _POWER \
                and key not in _OTHER and not _MCS_OVERRIDE.match(key):
            raise ConfigKeyError(key, "unknown key")

    base = paper_defaults()
    preset = values.get("preset", "paper-defaults").strip()
    if preset not in PRESETS:
        raise ConfigKeyError("preset", f"unknown preset {preset!r}")

    def build(keys, fn):
        """Run a constructor; on failure blame whichever key its message mentions."""
        if isinstance(keys, str):
            keys = {keys: keys}
        try:
            return fn()
        except ConfigKeyError:
            raise
        except ConfigError as exc:
            msg = str(exc)
            blamed = [key for attr, key in keys.items() if attr in msg] or list(keys.values())
            raise ConfigKeyError(blamed[0] if blamed else "config", msg) from None

    timing_kw, timing_keys = {}, {}
    for key, (attr, conv) in _TIMING.items():
        if key in values:
            timing_kw[attr] = conv(key, values[key])
            timing_keys[attr] = key
    timing = build(timing_keys, lambda: replace(base.timing, **timing_kw))

    frame_kw, frame_keys = {}, {}
    for key, attr in _FRAMES.items():
        if key in values:
            frame_kw[attr] = _integer(key, values[key]) * 8
            frame_keys[attr] = key
    if "l_sbf_bits" in values:
        frame_kw["l_sbf"] = _integer("l_sbf_bits", values["l_sbf_bits"])
        frame_keys["l_sbf"] = "l_sbf_bits"
    frames = build(frame_keys, lambda: replace(base.frames, **frame_kw))

    sig_kw = {}
    if "mode" in values:
        sig_kw["mode"] = build("mode", lambda: SignallingMode.parse(values["mode"]))
    for key in ("n_tim", "n_pages"):
        if key in values:
            sig_kw[key] = _integer(key, values[key])
    signalling = build({k: k for k in sig_kw if k != "mode"},
                       lambda: replace(base.signalling, **sig_kw))

    traffic = base.traffic
    if "scenario" in values:
        traffic = build("scenario", lambda: scenario(values["scenario"]).pattern)
    alpha = {k: _number(k, values[k]) for k in ("alpha_dl", "alpha_ul") if k in values}
    if alpha:
        traffic = build({k: k for k in alpha}, lambda: replace(traffic, **alpha))

    overrides = {}
    for key, text in values.items():
        m = _MCS_OVERRIDE.match(key)
        if m:
            overrides[int(m.group(1))] = _integer(key, text)
            build(key, lambda: override_mcs_rates({int(m.group(1)): overrides[int(m.group(1))]}))
    table = override_mcs_rates(overrides) if overrides else MCS_TABLE
    rate = base.data_rate
    if "mcs_index" in values:
        idx = _integer("mcs_index", values["mcs_index"])
        rate = Fraction(build("mcs_index", lambda: mcs_rate(idx, table)))
    if "data_rate_bps" in values:
        rate = _number("data_rate_bps", values["data_rate_bps"])
        if rate <= 0:
            raise ConfigKeyError("data_rate_bps", "must be positive")

    power_kw, power_keys = {}, {}
    for key, attr in _POWER.items():
        if key in values:
            power_kw[attr] = float(_number(key, values[key])) / 1000
            power_keys[attr] = key
    power = build(power_keys, lambda: PowerProfile(**power_kw))
    mc_listen = _boolean("mc_listen", values["mc_listen"]) if "mc_listen" in values else False

    return NetworkConfig(timing=timing, frames=frames, signalling=signalling, traffic=traffic,
                         data_rate=rate, power=power, mc_listen=mc_listen)


def load_config(path: str | Path | None) -> NetworkConfig:
    if path is None:
        return paper_defaults()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


def config_snapshot(cfg: NetworkConfig) -> dict[str, Any]:
    """JSON-ready view of a config, in config-file units."""
    t, f, s, tr, p = cfg.timing, cfg.frames, cfg.signalling, cfg.traffic, cfg.power
    us = lambda x: str(x / MICROSECOND)  # noqa: E731
    return {
        "t_dtim_period_s": str(t.t_dtim_period),
        "t_slot_us": us(t.t_slot),
        "t_sifs_us": us(t.t_sifs),
        "t_difs_us": us(t.t_difs),
        "cw_min": t.cw_min,
        "cw_max": t.cw_max,
        "r_max": t.r_max,
        "n_dtim": t.n_dtim,
        "l_data_bytes": str(Fraction(f.l_data, 8)),
        "l_ps_poll_bytes": str(Fraction(f.l_ps_poll, 8)),
        "l_ack_bytes": str(Fraction(f.l_ack, 8)),
        "l_rts_bytes": str(Fraction(f.l_rts, 8)),
        "l_cts_bytes": str(Fraction(f.l_cts, 8)),
        "l_sbf_bits": f.l_sbf,
        "mode": s.mode.value,
        "n_tim": s.n_tim,
        "n_pages": s.n_pages,
        "alpha_dl": str(tr.alpha_dl),
        "alpha_ul": str(tr.alpha_ul),
        "data_rate_bps": str(cfg.data_rate),
        "p_tx_mw": p.p_tx * 1000,
        "p_rx_mw": p.p_rx * 1000,
        "p_idle_mw": p.p_idle * 1000,
        "p_sleep_mw": p.p_sleep * 1000,
        "mc_listen": cfg.mc_listen,
    }


@dataclass
class RunManifest:
    """What produced a set of output files."""

    command: str
    config: dict[str, Any]
    seeds: list[int] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)
    version: str = __version__
    outputs: list[str] = field(default_factory=list)

    @property
    def digest(self) -> str:
        # outputs are excluded so the hash only depends on what was computed
        payload = {k: v for k, v in asdict(self).items() if k != "outputs"}
        blob = json.dumps(payload, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def write(self, path: str | Path) -> None:
        body = asdict(self)
        body["digest"] = self.digest
        Path(path).write_text(json.dumps(body, indent=2, sort_keys=True, default=str) + "\n")

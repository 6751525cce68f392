"""Batch runs and the tables behind the capacity, delivery and energy figures."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .capacity import SweepRow, capacity, capacity_sweep
from .config import SCENARIOS, RunManifest, config_snapshot
from .core import MAX_STATIONS, MCS_TABLE, NetworkConfig, SignallingMode
from .metrics import RunMetrics
from .sim import simulate

# Station counts at which the non-offset mode saturates for r = 1.8 Mb/s.
OPERATING_POINTS = {"A": 7140, "B": 4770, "C": 3571}
OPERATING_RATE = 1_800_000
DEFAULT_SEEDS = tuple(range(10))

CAPACITY_COLUMNS = ["mode", "alpha_dl", "alpha_ul", "mcs_index", "data_rate_bps", "n_dl", "n_ul",
                    "n_sta_max_raw", "n_sta_max_floor", "binding_direction", "exceeds_8191"]
RUN_COLUMNS = ["seed", "pdr_dl", "pdr_ul", "efficiency_dl", "efficiency_ul", "drops", "defers",
               "collisions", "sleep_fraction", "sleep_fraction_min", "energy_mj_per_node",
               "energy_tx_mj", "energy_rx_mj", "energy_idle_mj", "energy_sleep_mj"]


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def write_table(rows: Sequence[dict], columns: Sequence[str], path: str | Path | None,
                digest: str, json_path: str | Path | None = None) -> None:
    """Write rows as CSV (stdout when ``path`` is None), tagging each with the manifest digest."""
    header = list(columns) + ["manifest"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns] + [digest])
    if path is None or str(path) == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(path).write_text(buf.getvalue())
    if json_path is not None:
        mirror = [{**{c: row[c] for c in columns}, "manifest": digest} for row in rows]
        Path(json_path).write_text(json.dumps(mirror, indent=1, default=_fmt) + "\n")


def capacity_rows(rows: Iterable[SweepRow]) -> list[dict]:
    out = []
    for r in rows:
        out.append({
            "mode": r.mode.value,
            "alpha_dl": float(r.pattern.alpha_dl),
            "alpha_ul": float(r.pattern.alpha_ul),
            "mcs_index": "" if r.mcs_index is None else r.mcs_index,
            "data_rate_bps": int(r.data_rate) if r.data_rate.denominator == 1 else float(r.data_rate),
            "n_dl": r.result.n_dl,
            "n_ul": r.result.n_ul,
            "n_sta_max_raw": float(r.result.n_sta_max),
            "n_sta_max_floor": r.result.n_sta_floor,
            "binding_direction": r.result.binding,
            "exceeds_8191": r.exceeds_aid_space,
        })
    return out


def fig7_rows(cfg: NetworkConfig) -> list[dict]:
    patterns = [s.pattern for s in SCENARIOS.values()]
    return capacity_rows(capacity_sweep(list(SignallingMode), patterns, MCS_TABLE, cfg))


def run_row(m: RunMetrics) -> dict:
    e = m.mean_energy()
    return {
        "seed": m.seed,
        "pdr_dl": m.pdr_dl,
        "pdr_ul": m.pdr_ul,
        "efficiency_dl": m.efficiency_dl,
        "efficiency_ul": m.efficiency_ul,
        "drops": m.drops,
        "defers": m.deferred,
        "collisions": m.collisions,
        "sleep_fraction": float(np.mean(m.sleep_fraction)),
        "sleep_fraction_min": float(np.min(m.sleep_fraction)),
        "energy_mj_per_node": e["total"] * 1e3,
        "energy_tx_mj": e["tx"] * 1e3,
        "energy_rx_mj": e["rx"] * 1e3,
        "energy_idle_mj": e["idle"] * 1e3,
        "energy_sleep_mj": e["sleep"] * 1e3,
    }


def aggregate(rows: Sequence[dict], columns: Sequence[str]) -> dict:
    """Mean and sample standard deviation of each column."""
    out = {"runs": len(rows)}
    for c in columns:
        values = np.array([r[c] for r in rows], dtype=float)
        out[c + "_mean"] = float(values.mean())
        out[c + "_std"] = float(values.std(ddof=1)) if len(values) > 1 else 0.0
    return out


def _one(args) -> RunMetrics:
    cfg, n_sta, seed, n_dtim = args
    return simulate(cfg, n_sta, seed, n_dtim=n_dtim)


def run_seeds(cfg: NetworkConfig, n_sta: int, seeds: Sequence[int], *,
              n_dtim: int | None = None, jobs: int = 1) -> list[RunMetrics]:
    """Independent runs, one per seed, returned in seed order."""
    work = [(cfg, n_sta, s, n_dtim) for s in seeds]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one, work))
    else:
        results = [_one(w) for w in work]
    return sorted(results, key=lambda m: m.seed)


def operating_point(cfg: NetworkConfig, name: str, mode: SignallingMode) -> NetworkConfig:
    s = SCENARIOS[name]
    return cfg.with_traffic(s.alpha_dl, s.alpha_ul).with_mode(mode).with_rate(OPERATING_RATE)


def run_operating_points(cfg: NetworkConfig, seeds: Sequence[int] = DEFAULT_SEEDS, *,
                         n_dtim: int | None = None, jobs: int = 1,
                         scenarios: Sequence[str] = tuple(OPERATING_POINTS),
                         ) -> dict[tuple[str, SignallingMode], list[RunMetrics]]:
    runs = {}
    for name in scenarios:
        for mode in SignallingMode:
            point = operating_point(cfg, name, mode)
            runs[name, mode] = run_seeds(point, OPERATING_POINTS[name], seeds,
                                         n_dtim=n_dtim, jobs=jobs)
    return runs


FIG8_COLUMNS = ["pdr_dl", "pdr_ul", "efficiency_dl", "efficiency_ul", "drops", "collisions"]
FIG9_COLUMNS = ["energy_mj_per_node", "energy_tx_mj", "energy_rx_mj", "energy_idle_mj",
                "energy_sleep_mj", "sleep_fraction", "sleep_fraction_min"]


def _point_rows(runs, columns) -> list[dict]:
    out = []
    for (name, mode), metrics in sorted(runs.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        agg = aggregate([run_row(m) for m in metrics], columns)
        out.append({"scenario": name, "mode": mode.value, "n_sta": OPERATING_POINTS[name],
                    "data_rate_bps": OPERATING_RATE, **agg})
    return out


def fig8_rows(runs) -> list[dict]:
    return _point_rows(runs, FIG8_COLUMNS)


def fig9_rows(runs) -> list[dict]:
    rows = _point_rows(runs, FIG9_COLUMNS)
    by_key = {(r["scenario"], r["mode"]): r for r in rows}
    for r in rows:
        ref = by_key.get((r["scenario"], SignallingMode.NON_TIM_OFFSET.value))
        r["reduction_vs_non_tim_pct"] = (
            100 * (1 - r["energy_mj_per_node_mean"] / ref["energy_mj_per_node_mean"])
            if ref else math.nan)
    return rows


def point_columns(columns: Sequence[str]) -> list[str]:
    cols = ["scenario", "mode", "n_sta", "data_rate_bps", "runs"]
    for c in columns:
        cols += [c + "_mean", c + "_std"]
    return cols


def reproduce(which: Sequence[str], cfg: NetworkConfig, out_dir: str | Path,
              seeds: Sequence[int] = DEFAULT_SEEDS, *, n_dtim: int | None = None,
              jobs: int = 1, write_json: bool = False) -> list[Path]:
    """Write the requested figure tables into ``out_dir``; returns the CSV paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    which = sorted(set(which))
    manifest = RunManifest(command="reproduce " + " ".join(which), config=config_snapshot(cfg),
                           seeds=list(seeds), extra={"n_dtim": n_dtim})
    digest = manifest.digest
    written = []

    def emit(name, rows, columns):
        path = out_dir / f"{name}.csv"
        write_table(rows, columns, path, digest,
                    out_dir / f"{name}.json" if write_json else None)
        written.append(path)

    if "fig7" in which:
        emit("fig7", fig7_rows(cfg), CAPACITY_COLUMNS)
    if "fig8" in which or "fig9" in which:
        runs = run_operating_points(cfg, seeds, n_dtim=n_dtim, jobs=jobs)
        if "fig8" in which:
            emit("fig8", fig8_rows(runs), point_columns(FIG8_COLUMNS))
        if "fig9" in which:
            emit("fig9", fig9_rows(runs),
                 point_columns(FIG9_COLUMNS) + ["reduction_vs_non_tim_pct"])
    manifest.outputs = [p.name for p in written]
    manifest.write(out_dir / "manifest.json")
    return written


def default_station_count(cfg: NetworkConfig) -> int:
    return min(capacity(cfg).n_sta_floor, MAX_STATIONS)

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)

RUN_COLUMNS = [
    "instance", "n", "density", "gamma", "budget", "algo", "method",
    "objective", "deviation", "wall_ms", "sweep_ms", "seed", "timed_out",
]
SORT_KEYS = ["instance", "budget", "algo"]
# прочерк в таблицах: алгоритм не дал решения
MISSING = "--"


@dataclass
class RunRecord:
    instance: str
    n: int
    density: float
    gamma: float | None
    budget: int
    algo: str
    method: str | None = None
    objective: int | None = None
    deviation: float | None = None
    wall_ms: float | None = None
    sweep_ms: float | None = None
    seed: int | None = None
    timed_out: bool = False

    @classmethod
    def from_result(cls, result, *, instance: str, n: int, density: float, algo: str,
                    gamma: float | None = None, seed: int | None = None, wall_ms: float | None = None):
        sweep_ms = result.sweep_seconds * 1000 if algo == "qkbp" else None
        if wall_ms is None:
            wall_ms = result.repair_seconds * 1000
        return cls(
            instance=instance, n=n, density=density, gamma=gamma, budget=result.budget,
            algo=algo, method=str(result.method), objective=result.objective,
            wall_ms=wall_ms, sweep_ms=sweep_ms, seed=seed, timed_out=result.timed_out,
        )

    @classmethod
    def missing(cls, *, instance: str, n: int, density: float, budget: int, algo: str,
                gamma: float | None = None, seed: int | None = None):
        return cls(instance=instance, n=n, density=density, gamma=gamma, budget=budget, algo=algo, seed=seed)


def deviation(best, obj) -> float:
    """100·(best - obj)/best; при best = 0 отклонение 0, если obj тоже 0."""
    if obj is None or (isinstance(obj, float) and math.isnan(obj)):
        return math.nan
    if best == 0:
        return 0.0 if obj == 0 else 100.0
    return 100.0 * (best - obj) / abs(best)


def runs_frame(records) -> pd.DataFrame:
    """Таблица прогонов с отклонением от лучшего в группе (экземпляр, бюджет)."""
    df = pd.DataFrame([asdict(r) for r in records], columns=RUN_COLUMNS)
    if df.empty:
        return df
    for column in ("objective", "wall_ms", "sweep_ms"):
        df[column] = pd.to_numeric(df[column], errors="coerce")
    best = df.groupby(["instance", "budget"])["objective"].transform("max")
    df["deviation"] = [deviation(b, o) for b, o in zip(best, df["objective"])]
    df["objective"] = df["objective"].astype("Int64")
    return df.sort_values(SORT_KEYS, kind="mergesort").reset_index(drop=True)


def summarize(runs: pd.DataFrame, by=("n", "density")) -> pd.DataFrame:
    """Средние, минимальные и максимальные отклонения и суммарное время
    по группам и алгоритмам; последняя группа "all": по всем прогонам.

    wall_ms у QKBP: только достройка; время огибающей (sweep_ms) одно на
    экземпляр и в sweep_sum_ms считается один раз."""
    by = list(by)
    columns = by + [
        "algo", "runs", "missing", "timed_out", "dev_avg", "dev_min", "dev_max",
        "time_sum_ms", "time_avg_ms", "sweep_sum_ms",
    ]
    if runs.empty:
        return pd.DataFrame(columns=columns)

    def aggregate(frame: pd.DataFrame, keys: list[str]) -> pd.DataFrame:
        grouped = frame.groupby(keys, sort=True, dropna=False)
        per_instance = frame.drop_duplicates(list(dict.fromkeys(keys + ["instance"])))
        sweeps = per_instance.groupby(keys, sort=True, dropna=False)["sweep_ms"].sum(min_count=1)
        return pd.DataFrame({
            "runs": grouped.size(),
            "missing": grouped["objective"].apply(lambda s: int(s.isna().sum())),
            "timed_out": grouped["timed_out"].sum().astype(int),
            "dev_avg": grouped["deviation"].mean(),
            "dev_min": grouped["deviation"].min(),
            "dev_max": grouped["deviation"].max(),
            "time_sum_ms": grouped["wall_ms"].sum(),
            "time_avg_ms": grouped["wall_ms"].mean(),
            "sweep_sum_ms": sweeps,
        }).reset_index()

    per_group = aggregate(runs, by + ["algo"])
    overall = aggregate(runs, ["algo"])
    for key in by:
        overall[key] = "all"
    summary = pd.concat([per_group, overall[columns]], ignore_index=True)
    return summary[columns]


def write_csv(frame: pd.DataFrame, path: str | Path):
    frame.to_csv(path, index=False, na_rep=MISSING, lineterminator="\n")
    logger.info("Записан %s (%d строк)", path, len(frame))


def write_xlsx(sheets: dict[str, pd.DataFrame], path: str | Path):
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        for name, frame in sheets.items():
            frame.to_excel(writer, sheet_name=name, index=False, na_rep=MISSING)
    logger.info("Записан %s", path)

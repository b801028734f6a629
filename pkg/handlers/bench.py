"""Прогон алгоритмов по коллекции манифестов и сводные таблицы отклонений."""
import glob
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import config
from errors import InvariantViolationError, ParseError, QkbpError, UsageError
from handlers import load_target, split_list
from handlers.solve import ALGORITHMS, run_algorithm
from instance import density
from reporting import RunRecord, runs_frame, summarize, write_csv, write_xlsx

logger = logging.getLogger(__name__)


def run_cell(path: str, algo: str, p: int, time_limit: float) -> list[RunRecord]:
    """Один экземпляр x один алгоритм; отказ или ошибка дают пустые записи,
    нечитаемый файл пропускается."""
    try:
        inst, budgets, spec = load_target(path)
    except (ParseError, OSError) as e:
        logger.error("%s пропущен: %s", path, e)
        return []
    name = inst.name or Path(path).stem
    nominal = spec.get("density")
    common = dict(
        instance=name,
        n=inst.n,
        density=nominal if nominal is not None else round(100 * density(inst), 2),
        algo=algo,
        seed=spec.get("seed"),
    )
    try:
        outcome = run_algorithm(inst, budgets, algo, p, time_limit)
    except InvariantViolationError:
        raise
    except QkbpError as e:
        logger.warning("%s / %s: нет решения (%s)", name, algo, e)
        return [RunRecord.missing(budget=b.value, gamma=b.gamma, **common) for b in budgets]
    logger.info("%s / %s: %d бюджетов", name, algo, len(budgets))
    return [
        RunRecord.from_result(result, gamma=b.gamma, wall_ms=wall_ms, **common)
        for b, (result, wall_ms) in zip(budgets, outcome)
    ]


def run_cells(cells, p: int, time_limit: float, threads: int) -> list[RunRecord]:
    # RG с конечным лимитом идёт последовательно, чтобы время не делилось с соседями
    timed = [c for c in cells if c[1] == "rg" and math.isfinite(time_limit)]
    free = [c for c in cells if c not in timed]
    records = []
    if threads > 1 and len(free) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run_cell, path, algo, p, time_limit) for path, algo in free]
            for future in futures:
                records.extend(future.result())
    else:
        for path, algo in free:
            records.extend(run_cell(path, algo, p, time_limit))
    for path, algo in timed:
        records.extend(run_cell(path, algo, p, time_limit))
    return records


def cmd_bench(args) -> int:
    algos = split_list(args.algos)
    unknown = [a for a in algos if a not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithms: {', '.join(unknown)}")
    group_by = split_list(args.group_by)
    bad = [key for key in group_by if key not in ("n", "density", "instance", "gamma", "budget")]
    if bad:
        raise UsageError(f"cannot group by: {', '.join(bad)}")
    paths = sorted({path for pattern in args.manifests for path in glob.glob(pattern)})
    if not paths:
        raise UsageError("no manifests match the given patterns")
    threads = args.threads if args.threads is not None else config.THREADS
    if threads < 1:
        raise UsageError(f"--threads must be positive, got {threads}")
    p = args.p if args.p is not None else config.GRID_SIZE
    time_limit = args.time_limit if args.time_limit is not None else config.TIME_LIMIT

    cells = [(path, algo) for path in paths for algo in algos]
    records = run_cells(cells, p, time_limit, threads)

    runs = runs_frame(records)
    summary = summarize(runs, by=group_by)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(runs, out / "runs.csv")
    write_csv(summary, out / "summary.csv")
    if args.xlsx:
        write_xlsx({"runs": runs, "summary": summary}, out / "summary.xlsx")
    return 0


def register(sub):
    cmd = sub.add_parser("bench", help="прогнать алгоритмы по манифестам и свести отклонения")
    cmd.add_argument("manifests", nargs="+", help="glob-шаблоны манифестов *.json")
    cmd.add_argument("--algos", default="qkbp,rg,wsort")
    cmd.add_argument("--p", type=int, default=None)
    cmd.add_argument("--time-limit", type=float, default=None)
    cmd.add_argument("--threads", type=int, default=None)
    cmd.add_argument("--group-by", default="n,density")
    cmd.add_argument("--out", default=".")
    cmd.add_argument("--xlsx", action="store_true")
    cmd.set_defaults(handler=cmd_bench)

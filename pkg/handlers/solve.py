import json
import logging
import time
from pathlib import Path

import config
from baselines import brute_force_result, rg_heuristic, weight_sort_greedy
from handlers import FORMATS, load_target, resolve_budgets
from instance import density
from qkbp import SolveResult, solve_instance
from reporting import RunRecord, runs_frame, write_csv

logger = logging.getLogger(__name__)

ALGORITHMS = ("qkbp", "rg", "wsort", "brute")


def run_algorithm(inst, budgets, algo: str, p: int, time_limit: float) -> list[tuple[SolveResult, float]]:
    """Результаты в порядке бюджетов и время на бюджет в мс."""
    if algo == "qkbp":
        results = solve_instance(inst, budgets, p)
        # время огибающей идёт в sweep_ms один раз на экземпляр
        return [(r, r.repair_seconds * 1000) for r in results]
    runners = {
        "rg": lambda b: rg_heuristic(inst, b, time_limit),
        "wsort": lambda b: weight_sort_greedy(inst, b),
        "brute": lambda b: brute_force_result(inst, b),
    }
    out = []
    for b in budgets:
        started = time.perf_counter()
        result = runners[algo](b)
        out.append((result, (time.perf_counter() - started) * 1000))
    return out


def output_path(prefix: Path, suffix: str) -> Path:
    return prefix.parent / f"{prefix.name}{suffix}"


def solution_payload(inst, algo: str, budgets, results) -> dict:
    return {
        "instance": inst.name,
        "algo": algo,
        "solutions": [
            {
                "budget": r.budget,
                "gamma": b.gamma,
                "objective": r.objective,
                "cost": r.cost,
                "method": str(r.method),
                "upper_bound": None if r.upper_bound is None else str(r.upper_bound),
                "timed_out": r.timed_out,
                "nodes": sorted(r.nodes),
            }
            for b, r in zip(budgets, results)
        ],
    }


def cmd_solve(args) -> int:
    inst, stored, spec = load_target(args.instance, args.fmt)
    budgets = resolve_budgets(inst, stored, args.budgets, args.gammas)
    p = args.p if args.p is not None else config.GRID_SIZE
    time_limit = args.time_limit if args.time_limit is not None else config.TIME_LIMIT

    outcome = run_algorithm(inst, budgets, args.algo, p, time_limit)
    name = inst.name or Path(args.instance).stem
    records = [
        RunRecord.from_result(
            result, instance=name, n=inst.n, density=round(100 * density(inst), 2),
            algo=args.algo, gamma=b.gamma, seed=spec.get("seed"), wall_ms=wall_ms,
        )
        for b, (result, wall_ms) in zip(budgets, outcome)
    ]
    results = [result for result, _ in outcome]
    source = Path(args.instance)
    prefix = Path(args.out) if args.out else source.with_name(f"{source.stem}.{args.algo}")
    write_csv(runs_frame(records), output_path(prefix, ".csv"))
    payload = solution_payload(inst, args.algo, budgets, results)
    output_path(prefix, ".json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    for r in results:
        logger.info("B=%d: %s = %d (%s)", r.budget, args.algo, r.objective, r.method)
    return 0


def register(sub):
    cmd = sub.add_parser("solve", help="решить экземпляр для набора бюджетов")
    cmd.add_argument("instance", help="файл экземпляра или манифест *.json")
    cmd.add_argument("--format", dest="fmt", choices=FORMATS, default="canonical")
    cmd.add_argument("--budgets", help="бюджеты через запятую")
    cmd.add_argument("--gammas", help="доли Σq через запятую")
    cmd.add_argument("--p", type=int, default=None)
    cmd.add_argument("--algo", choices=ALGORITHMS, default="qkbp")
    cmd.add_argument("--time-limit", type=float, default=None)
    cmd.add_argument("--out", default=None, help="префикс выходных файлов")
    cmd.set_defaults(handler=cmd_solve)

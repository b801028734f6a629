import logging
from pathlib import Path

import pandas as pd

import config
from envelope import build_envelope, write_envelope_csv, write_envelope_json
from handlers import FORMATS, load_target, resolve_budgets
from handlers.solve import output_path
from qkbp import solve

logger = logging.getLogger(__name__)


def cmd_envelope(args) -> int:
    inst, stored, _ = load_target(args.instance, args.fmt)
    p = args.p if args.p is not None else config.GRID_SIZE
    env = build_envelope(inst, p)

    source = Path(args.instance)
    prefix = Path(args.out) if args.out else source.with_name(f"{source.stem}.envelope")
    write_envelope_csv(env, output_path(prefix, ".csv"))
    write_envelope_json(env, output_path(prefix, ".json"))

    # отметки решений для долей бюджета, если бюджеты известны
    if args.budgets or args.gammas or stored:
        budgets = resolve_budgets(inst, stored, args.budgets, args.gammas)
        results = solve(inst, env, budgets)
        markers = pd.DataFrame(
            [
                {"gamma": b.gamma, "budget": r.budget, "objective": r.objective,
                 "upper_bound": float(r.upper_bound), "method": str(r.method)}
                for b, r in zip(budgets, results)
            ],
            columns=["gamma", "budget", "objective", "upper_bound", "method"],
        )
        markers.to_csv(output_path(prefix, ".markers.csv"), index=False, lineterminator="\n")
    logger.info("Огибающая записана в %s.csv", prefix)
    return 0


def register(sub):
    cmd = sub.add_parser("envelope", help="огибающая: точки излома и решения для долей бюджета")
    cmd.add_argument("instance")
    cmd.add_argument("--format", dest="fmt", choices=FORMATS, default="canonical")
    cmd.add_argument("--p", type=int, default=None)
    cmd.add_argument("--budgets")
    cmd.add_argument("--gammas")
    cmd.add_argument("--out", default=None, help="префикс выходных файлов")
    cmd.set_defaults(handler=cmd_envelope)

import logging
from pathlib import Path

from errors import UsageError
from formats import write_instance, write_manifest
from generators import Family, GeneratorSpec, Strategy, generate
from handlers import split_list

logger = logging.getLogger(__name__)

BERNOULLI_FAMILIES = (Family.STANDARD, Family.LARGE, Family.DISPERSION)
TEAM_FAMILIES = (Family.TEAMFORMATION1, Family.TEAMFORMATION2)


def build_spec(args, seed: int) -> GeneratorSpec:
    family = Family(args.family)
    if family in BERNOULLI_FAMILIES and args.density is None:
        raise UsageError(f"{family} needs --density")
    if family not in BERNOULLI_FAMILIES and args.density is not None:
        raise UsageError(f"--density does not apply to {family}")
    if (family == Family.DISPERSION) != (args.strategy is not None):
        raise UsageError("--strategy is required for dispersion and only for dispersion")
    if family not in TEAM_FAMILIES and args.projects is not None:
        raise UsageError("--projects applies to team formation families only")
    gammas = tuple(split_list(args.gammas, float)) if args.gammas is not None else None
    return GeneratorSpec(
        family=family,
        n=args.n,
        seed=seed,
        density=args.density,
        strategy=args.strategy,
        projects=args.projects,
        gammas=gammas,
        lognormal=args.lognormal,
    )


def cmd_generate(args) -> int:
    if args.count < 1:
        raise UsageError(f"--count must be positive, got {args.count}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        spec = build_spec(args, args.seed + k)
        inst, budgets = generate(spec)
        instance_file = f"{spec.name}.qkp"
        write_instance(inst, out / instance_file, budgets)
        write_manifest(out / f"{spec.name}.json", instance_file, spec.to_dict(), budgets)
        logger.info("Записан %s (%d бюджетов)", out / instance_file, len(budgets))
    return 0


def register(sub):
    cmd = sub.add_parser("generate", help="сгенерировать экземпляры и манифесты")
    cmd.add_argument("family", choices=[f.value for f in Family])
    cmd.add_argument("--n", type=int, required=True)
    cmd.add_argument("--density", type=float)
    cmd.add_argument("--strategy", choices=[s.value for s in Strategy])
    cmd.add_argument("--projects", type=int)
    cmd.add_argument("--gammas", help="доли бюджета через запятую")
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--count", type=int, default=1)
    cmd.add_argument("--lognormal", choices=["log", "moments"], default="log")
    cmd.add_argument("--out", default=".")
    cmd.set_defaults(handler=cmd_generate)

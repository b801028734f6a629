"""Подкоманды CLI: каждый модуль handlers/* добавляет свой подпарсер в
register(sub) и ставит обработчик через set_defaults(handler=...)."""
from __future__ import annotations

from errors import UsageError
from formats import READERS, load, read_manifest
from instance import Budget, total_cost

FORMATS = sorted(READERS)


def split_list(raw: str | None, cast=str) -> list:
    """'0.1,0.25' -> [0.1, 0.25]."""
    if raw is None:
        return []
    items = [item.strip() for item in raw.split(",")]
    try:
        if "" in items:
            raise ValueError(raw)
        return [cast(item) for item in items]
    except ValueError:
        raise UsageError(f"cannot parse list {raw!r}") from None


def load_target(path: str, fmt: str = "canonical"):
    """Экземпляр, его бюджеты и spec генератора; *.json читается как манифест."""
    if path.endswith(".json"):
        instance_path, budgets, spec = read_manifest(path)
        inst, _ = load(instance_path, "canonical")
        return inst, budgets, spec
    inst, budgets = load(path, fmt)
    return inst, budgets, {}


def resolve_budgets(inst, stored, budgets_flag: str | None, gammas_flag: str | None):
    explicit = [Budget(b) for b in split_list(budgets_flag, int)]
    total = total_cost(inst)
    explicit += [Budget.from_gamma(g, total) for g in split_list(gammas_flag, float)]
    if explicit:
        return explicit
    if stored:
        return list(stored)
    raise UsageError("no budgets: pass --budgets or --gammas, or a file that carries them")

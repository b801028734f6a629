"""Файловые форматы экземпляров.

Канонический формат (построчный, LF, одиночные пробелы, индексы с нуля)::

    qkp 1
    name <слово>            (необязательно)
    n <int>
    m <int>
    costs <q_0> ... <q_{n-1}>
    singletons <u_00> ... <u_{n-1,n-1}>
    e <i> <j> <u_ij>        (ровно m строк, i < j, u_ij > 0, без повторов)
    budget <int>            (ноль или больше строк)

Формат soutif (опубликованные Standard-QKP файлы), индексы неявные::

    <имя>
    <n>
    <n линейных коэффициентов u_ii>
    <n-1 строк: строка i содержит u_ij для j = i+1..n-1>
    <пустая строка>
    <флаг типа ограничения, 0 = "<=">
    <вместимость>
    <n весов q_i>

Читатель soutif разбирает поток чисел, а не строки, поэтому переносы
внутри секций допускаются; нулевые u_ij дуг не дают.

Формат team (эксперт и его проекты) только читается: по нему строится граф
сходства Жаккара, как для синтетических team formation коллекций.
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from errors import ParameterError, ParseError
from generators import teamformation_from_projects
from instance import Budget, QkpInstance

FORMAT_VERSION = "1"
_INT = re.compile(r"-?\d+")


def _int(token: str, line_no: int, what: str) -> int:
    if not _INT.fullmatch(token):
        raise ParseError(line_no, f"{what}: expected an integer, got {token!r}")
    return int(token)


def _lines(text: str) -> list[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _read_text(path: str | Path) -> str:
    raw = Path(path).read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(raw.count(b"\n", 0, e.start) + 1, f"invalid UTF-8 byte 0x{raw[e.start]:02x}") from None


# ────────────────────────────────────────────────
# Канонический формат
# ────────────────────────────────────────────────

class _Cursor:
    def __init__(self, text: str):
        if "\r" in text:
            raise ParseError(text[: text.index("\r")].count("\n") + 1, "CR line endings are not allowed")
        self.lines = _lines(text)
        self.pos = 0

    @property
    def line_no(self) -> int:
        return self.pos + 1

    def peek_key(self) -> str | None:
        if self.pos >= len(self.lines):
            return None
        return self.lines[self.pos].split(" ", 1)[0]

    def take(self, key: str, section: str) -> list[str]:
        if self.pos >= len(self.lines):
            raise ParseError(self.line_no, f"expected {section} section, got end of file")
        line = self.lines[self.pos]
        tokens = line.split(" ")
        if tokens[0] != key:
            raise ParseError(self.line_no, f"expected {section} section, got {line!r}")
        if "" in tokens:
            raise ParseError(self.line_no, "fields must be separated by single spaces")
        self.pos += 1
        return tokens[1:]


def parse_instance(text: str) -> tuple[QkpInstance, list[Budget]]:
    cur = _Cursor(text)
    header = cur.take("qkp", "'qkp' header")
    if header != [FORMAT_VERSION]:
        raise ParseError(1, f"unsupported format version {' '.join(header)!r}")

    name = ""
    if cur.peek_key() == "name":
        fields = cur.take("name", "'name'")
        if len(fields) != 1:
            raise ParseError(cur.line_no - 1, "name must be a single word")
        name = fields[0]

    def scalar(key: str) -> int:
        fields = cur.take(key, f"'{key}'")
        if len(fields) != 1:
            raise ParseError(cur.line_no - 1, f"'{key}' takes one integer")
        value = _int(fields[0], cur.line_no - 1, key)
        if value < 0:
            raise ParseError(cur.line_no - 1, f"'{key}' must be non-negative, got {value}")
        return value

    n = scalar("n")
    m = scalar("m")

    def vector(key: str) -> list[int]:
        fields = cur.take(key, f"'{key}'")
        line_no = cur.line_no - 1
        if len(fields) != n:
            raise ParseError(line_no, f"'{key}' needs {n} values, got {len(fields)}")
        return [_int(tok, line_no, key) for tok in fields]

    costs = vector("costs")
    for i, q in enumerate(costs):
        if q < 0:
            raise ParseError(cur.line_no - 1, f"negative cost {q} at node {i}")
    singles = vector("singletons")

    arcs = []
    seen = set()
    for k in range(m):
        if cur.peek_key() != "e":
            raise ParseError(cur.line_no, f"expected {m} edge lines, got {k}")
        fields = cur.take("e", "'e'")
        line_no = cur.line_no - 1
        if len(fields) != 3:
            raise ParseError(line_no, "edge line needs 'e i j u'")
        i, j, u = (_int(tok, line_no, "edge") for tok in fields)
        if i == j:
            raise ParseError(line_no, f"self-loop arc at node {i}")
        if i > j:
            raise ParseError(line_no, f"arc endpoints not ascending: {i} {j}")
        if i < 0 or j >= n:
            raise ParseError(line_no, f"arc ({i}, {j}) outside [0, {n})")
        if u <= 0:
            raise ParseError(line_no, f"arc ({i}, {j}) has non-positive utility {u}")
        if (i, j) in seen:
            raise ParseError(line_no, f"duplicate edge ({i}, {j})")
        seen.add((i, j))
        arcs.append((i, j, u))

    budgets = []
    while cur.peek_key() == "budget":
        budgets.append(Budget(scalar("budget")))
    if cur.pos < len(cur.lines):
        raise ParseError(cur.line_no, f"unexpected line {cur.lines[cur.pos]!r}")

    return QkpInstance(n, tuple(costs), tuple(singles), tuple(sorted(arcs)), name), budgets


def format_instance(inst: QkpInstance, budgets=()) -> str:
    lines = [f"qkp {FORMAT_VERSION}"]
    if inst.name:
        if any(ch.isspace() for ch in inst.name):
            raise ParameterError(f"instance name {inst.name!r} must be a single word")
        lines.append(f"name {inst.name}")
    lines.append(f"n {inst.n}")
    lines.append(f"m {inst.m}")
    lines.append(" ".join(["costs", *map(str, inst.costs)]))
    lines.append(" ".join(["singletons", *map(str, inst.singleton_utilities)]))
    lines.extend(f"e {i} {j} {u}" for i, j, u in inst.arcs)
    lines.extend(f"budget {b.value if isinstance(b, Budget) else int(b)}" for b in budgets)
    return "\n".join(lines) + "\n"


def read_instance(path: str | Path) -> tuple[QkpInstance, list[Budget]]:
    return parse_instance(_read_text(path))


def write_instance(inst: QkpInstance, path: str | Path, budgets=()):
    Path(path).write_text(format_instance(inst, budgets), encoding="utf-8", newline="\n")


# ────────────────────────────────────────────────
# Формат soutif
# ────────────────────────────────────────────────

def parse_soutif(text: str) -> tuple[QkpInstance, list[Budget]]:
    lines = _lines(text.replace("\r\n", "\n"))
    start = next((k for k, line in enumerate(lines) if line.strip()), None)
    if start is None:
        raise ParseError(1, "expected instance name, got end of file")
    name = lines[start].strip()
    tokens = iter([
        (tok, k + 1)
        for k, line in enumerate(lines[start + 1:], start=start + 1)
        for tok in line.split()
    ])
    eof = current = len(lines) + 1

    def take(what: str, minimum: int | None = 0) -> int:
        nonlocal current
        tok, line_no = next(tokens, (None, eof))
        current = line_no
        if tok is None:
            raise ParseError(eof, f"expected {what}, got end of file")
        value = _int(tok, line_no, what)
        if minimum is not None and value < minimum:
            raise ParseError(line_no, f"{what} must be >= {minimum}, got {value}")
        return value

    n = take("node count")
    singles = [take("linear coefficient", minimum=None) for _ in range(n)]
    arcs = []
    for i in range(n - 1):
        for j in range(i + 1, n):
            u = take(f"quadratic coefficient ({i}, {j})")
            if u:
                arcs.append((i, j, u))
    if take("constraint flag") != 0:
        raise ParseError(current, "only '<=' constraints (flag 0) are supported")
    capacity = take("capacity")
    costs = [take("weight") for _ in range(n)]
    tok, line_no = next(tokens, (None, eof))
    if tok is not None:
        raise ParseError(line_no, f"unexpected trailing token {tok!r}")
    return QkpInstance(n, tuple(costs), tuple(singles), tuple(arcs), name), [Budget(capacity)]


def format_soutif(inst: QkpInstance, budget) -> str:
    capacity = budget.value if isinstance(budget, Budget) else int(budget)
    weights = {(i, j): u for i, j, u in inst.arcs}
    lines = [inst.name or "qkp", str(inst.n), " ".join(map(str, inst.singleton_utilities))]
    for i in range(inst.n - 1):
        lines.append(" ".join(str(weights.get((i, j), 0)) for j in range(i + 1, inst.n)))
    lines += ["", "0", str(capacity), " ".join(map(str, inst.costs))]
    return "\n".join(lines) + "\n"


def read_soutif(path: str | Path) -> tuple[QkpInstance, list[Budget]]:
    return parse_soutif(_read_text(path))


def write_soutif(inst: QkpInstance, path: str | Path, budget):
    Path(path).write_text(format_soutif(inst, budget), encoding="utf-8", newline="\n")


# ────────────────────────────────────────────────
# Формат team: эксперты и их проекты (выгрузки IMDB, DBLP и т.п.)
# ────────────────────────────────────────────────

def parse_team(text: str, name: str = "") -> tuple[QkpInstance, list[Budget]]:
    """По строке на эксперта: ``<стоимость> <проект> <проект> ...``.

    Проекты: произвольные слова без пробелов. Пустые строки и строки,
    начинающиеся с '#', пропускаются. Бюджетов в файле нет."""
    costs = []
    project_sets = []
    ids: dict[str, int] = {}
    for line_no, line in enumerate(_lines(text.replace("\r\n", "\n")), start=1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        q = _int(tokens[0], line_no, "expert cost")
        if q < 0:
            raise ParseError(line_no, f"expert cost must be non-negative, got {q}")
        owned = []
        for project in tokens[1:]:
            p = ids.setdefault(project, len(ids))
            if p in owned:
                raise ParseError(line_no, f"project {project!r} listed twice")
            owned.append(p)
        costs.append(q)
        project_sets.append(owned)
    if not costs:
        raise ParseError(1, "no experts in file")
    return teamformation_from_projects(project_sets, costs, name), []


def read_team(path: str | Path) -> tuple[QkpInstance, list[Budget]]:
    return parse_team(_read_text(path), Path(path).stem)


READERS = {"canonical": read_instance, "soutif": read_soutif, "team": read_team}


def load(path: str | Path, fmt: str = "canonical") -> tuple[QkpInstance, list[Budget]]:
    try:
        reader = READERS[fmt]
    except KeyError:
        raise ParameterError(f"unknown instance format {fmt!r}") from None
    return reader(path)


# ────────────────────────────────────────────────
# Манифест генератора
# ────────────────────────────────────────────────

def write_manifest(path: str | Path, instance_file: str, spec: dict, budgets):
    data = {
        "instance": instance_file,
        "spec": spec,
        "budgets": [b.value for b in budgets],
        "gammas": [b.gamma for b in budgets],
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def read_manifest(path: str | Path) -> tuple[Path, list[Budget], dict]:
    """Возвращает путь к экземпляру (относительно манифеста), бюджеты и spec."""
    path = Path(path)
    try:
        data = json.loads(_read_text(path))
        gammas = data.get("gammas") or [None] * len(data["budgets"])
        budgets = [Budget(int(v), g) for v, g in zip(data["budgets"], gammas)]
        instance = path.parent / data["instance"]
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, f"manifest is not valid JSON: {e.msg}") from None
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(1, f"manifest is missing or has a bad field: {e}") from None
    return instance, budgets, data.get("spec", {})

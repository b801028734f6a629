import argparse
import logging
import sys
from functools import partial

from errors import ConfigError, UsageError
from middlewares.exit_codes import EXIT_USAGE, ExitCodeMiddleware
from middlewares.timing import TimingMiddleware

logger = logging.getLogger("qkbp")


# ────────────────────────────────────────────────
# Настройка логирования (терминал + файл)
# ────────────────────────────────────────────────

def setup_logging(level: str = "INFO", log_file: str | None = None):
    handlers = [logging.StreamHandler(sys.stdout)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(
        level=level,
        format="%(asctime)s | %(name)s | %(levelname)s | %(message)s",
        handlers=handlers,
        force=True,
    )


# ────────────────────────────────────────────────
# Подкоманды и middleware
# ────────────────────────────────────────────────

class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    from handlers import bench, envelope, generate, solve

    parser = ArgumentParser(prog="qkbp", description="Quadratic knapsack: эвристика точек излома")
    sub = parser.add_subparsers(dest="command", required=True)
    for module in (generate, solve, envelope, bench):
        module.register(sub)
    return parser


def dispatch(argv, data: dict) -> int:
    args = build_parser().parse_args(argv)
    data["command"] = args.command
    return args.handler(args)


# первый в списке: внешний
MIDDLEWARES = (ExitCodeMiddleware(), TimingMiddleware())


def main(argv=None) -> int:
    try:
        import config
    except ConfigError as e:
        setup_logging()
        logger.error("Ошибка конфигурации: %s", e)
        return EXIT_USAGE
    setup_logging(config.LOG_LEVEL, config.LOG_FILE)
    handler = dispatch
    for middleware in reversed(MIDDLEWARES):
        handler = partial(middleware, handler)
    return handler(argv, {})


if __name__ == "__main__":
    sys.exit(main())

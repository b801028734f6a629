import logging

from errors import (
    ConfigError,
    InvariantViolationError,
    OracleRefusedError,
    ParameterError,
    ParseError,
    QkbpError,
    UsageError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INTERNAL = 3


class ExitCodeMiddleware:
    """Переводит исключения команды в код возврата процесса."""

    def __call__(self, handler, event, data):
        try:
            code = handler(event, data)
        except ParseError as e:
            logger.error("Ошибка разбора: %s", e)
            return EXIT_PARSE
        except OSError as e:
            logger.error("Файл недоступен: %s", e)
            return EXIT_PARSE
        except InvariantViolationError as e:
            logger.error("Нарушен внутренний инвариант: %s", e)
            return EXIT_INTERNAL
        except (UsageError, ParameterError, ConfigError, OracleRefusedError) as e:
            logger.error("%s", e)
            return EXIT_USAGE
        except QkbpError as e:
            logger.error("%s: %s", type(e).__name__, e)
            return EXIT_USAGE
        return EXIT_OK if code is None else code

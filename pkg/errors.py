class QkbpError(Exception):
    """Базовое исключение решателя."""


class InvalidInstanceError(QkbpError):
    pass


class InvalidSetError(QkbpError):
    pass


class DegenerateInstanceError(QkbpError):
    pass


class ParameterError(QkbpError):
    pass


class ContractViolationError(QkbpError):
    pass


class PreconditionError(QkbpError):
    pass


class EnvelopeMismatchError(QkbpError):
    pass


class OracleRefusedError(QkbpError):
    pass


class InvariantViolationError(QkbpError):
    pass


class ConfigError(QkbpError):
    pass


class UsageError(QkbpError):
    pass


class ParseError(QkbpError):
    # Строгий парсер всегда знает номер строки (1-based), 0: конец файла
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        self.message = message
        super().__init__(f"line {line_no}: {message}")

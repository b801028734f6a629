import logging
import time

logger = logging.getLogger(__name__)


class TimingMiddleware:
    def __call__(self, handler, event, data):
        started = time.perf_counter()
        code = handler(event, data)
        data["elapsed"] = time.perf_counter() - started
        logger.info("Команда %s: код %s за %.3f c", data.get("command", "-"), code, data["elapsed"])
        return code

import logging
import os
import time
from contextlib import contextmanager


def setup_logger(level=None):
    level = level or os.getenv("RELCOMP_LOG_LEVEL", "INFO")
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    logging.getLogger("aiosqlite").setLevel(logging.WARNING)
    logging.getLogger("asyncio").setLevel(logging.WARNING)


class PhaseTimer:
    """Wall time per named phase, in milliseconds, in first-seen order."""

    def __init__(self):
        self.phases = {}

    @contextmanager
    def phase(self, name):
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = (time.perf_counter() - start) * 1000.0
            self.phases[name] = self.phases.get(name, 0.0) + elapsed

    @property
    def total(self):
        return sum(self.phases.values())

"""
Module for logging functionality in mtcf.
"""

import os
import sys
import datetime
from typing import Callable, Any, Optional


class MTCFLogger:
    """
    Logger for mtcf with configurable log levels and handlers.
    """

    levels = ["QUIET", "DEBUG", "INFO", "WARNING", "ERROR"]

    def __init__(self, verbose_level: str = "INFO", log_handler: Optional[Callable[[str], None]] = None):
        """
        Initialize the logger.

        Args:
            verbose_level: The minimum log level to display (QUIET, DEBUG, INFO, WARNING, ERROR)
            log_handler: Optional custom log handler function
        """
        self.verbose_level = "INFO"
        self.set_level(verbose_level)
        self.log_handler = log_handler or self.default_handler

    def set_level(self, level: str) -> None:
        level = level.upper()
        self.verbose_level = level if level in self.levels else "INFO"

    def verbose(self, level: str) -> bool:
        """
        Check if a log level should be displayed.
        """
        if self.verbose_level == "QUIET":
            return False
        return self.levels.index(level) >= self.levels.index(self.verbose_level)

    def format(self, *message: Any) -> str:
        return ' '.join(map(str, message))

    def prefix(self, level: str) -> str:
        return f"[{datetime.datetime.now().strftime('%Y-%m-%d %H:%M:%S')}] [{level}]"

    def default_handler(self, content: str) -> None:
        print(content, file=sys.stderr)

    def _emit(self, level: str, message: tuple) -> None:
        if not self.verbose(level):
            return
        self.log_handler(f"{self.prefix(level)} {self.format(*message)}")

    def debug(self, *message: Any) -> None:
        self._emit("DEBUG", message)

    def info(self, *message: Any) -> None:
        self._emit("INFO", message)

    def warning(self, *message: Any) -> None:
        self._emit("WARNING", message)

    def error(self, *message: Any) -> None:
        self._emit("ERROR", message)


# Create a global logger instance
mlog = MTCFLogger(os.getenv("MTCF_LOG_LEVEL", "INFO"))

"""Logging setup and a prefixing adapter over loguru."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Optional, Union

from loguru import logger


class StageLogger:
    """Adapter that forwards standard logging calls to loguru with a fixed prefix."""

    def __init__(self, prefix: str) -> None:
        self.prefix = f"[{prefix}]"

    @staticmethod
    def _format(message: str, *args: Any) -> str:
        if not args:
            return message
        try:
            return message % args
        except Exception:  # noqa: BLE001
            try:
                return message.format(*args)
            except Exception:  # noqa: BLE001
                joined = " ".join(str(arg) for arg in args)
                return f"{message} {joined}"

    def info(self, message: str, *args: Any) -> None:
        logger.opt(depth=1).info(f"{self.prefix} {self._format(message, *args)}")

    def success(self, message: str, *args: Any) -> None:
        logger.opt(depth=1).success(f"{self.prefix} {self._format(message, *args)}")

    def warning(self, message: str, *args: Any) -> None:
        logger.opt(depth=1).warning(f"{self.prefix} {self._format(message, *args)}")

    def error(self, message: str, *args: Any) -> None:
        logger.opt(depth=1).error(f"{self.prefix} {self._format(message, *args)}")

    def debug(self, message: str, *args: Any) -> None:
        logger.opt(depth=1).debug(f"{self.prefix} {self._format(message, *args)}")

    def trace(self, message: str, *args: Any) -> None:
        logger.opt(depth=1).trace(f"{self.prefix} {self._format(message, *args)}")


def setup_logging(
    debug: bool = False,
    trace: bool = False,
    logfile: Optional[Union[str, Path]] = None,
) -> None:
    """Reset loguru sinks: stderr at the chosen level, plus an optional file sink."""
    level = "TRACE" if trace else "DEBUG" if debug else "INFO"
    logger.remove()
    logger.add(
        sys.stderr,
        level=level,
        format="<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | {message}",
    )
    if logfile:
        logger.add(str(logfile), level="DEBUG", rotation="10 MB", retention=3)

"""Centralized logging for the sensing toolkit."""

import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Optional
from contextlib import contextmanager


class ColoredFormatter(logging.Formatter):
    """Colored log formatter for console output."""

    # ANSI color codes
    COLORS = {
        'DEBUG': '\033[36m',      # Cyan
        'INFO': '\033[32m',       # Green
        'WARNING': '\033[33m',    # Yellow
        'ERROR': '\033[31m',      # Red
        'CRITICAL': '\033[35m',   # Magenta
        'RESET': '\033[0m'
    }

    def format(self, record):
        """Format log record with a colored level name."""
        log_color = self.COLORS.get(record.levelname, self.COLORS['RESET'])
        reset = self.COLORS['RESET']
        formatted = super().format(record)
        return formatted.replace(
            record.levelname,
            f"{log_color}{record.levelname}{reset}"
        )


class SimulationLogger:
    """Toolkit logger with timers and section banners.

    Console output goes to stderr so that reports printed on stdout stay
    machine-readable.
    """

    def __init__(
        self,
        name: str = "QSense",
        level: str = "INFO",
        log_dir: Optional[str] = "logs",
        log_file: Optional[str] = None,
    ):
        """Initialize the logger.

        Args:
            name: Logger name
            level: Console level name
            log_dir: Directory for the detailed log file, ``None`` disables it
            log_file: Explicit log file path (overrides ``log_dir`` naming)
        """
        self.logger = logging.getLogger(name)
        self.logger.setLevel(logging.DEBUG)
        self.logger.handlers.clear()
        self.logger.propagate = False

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, level.upper(), logging.INFO))
        console_handler.setFormatter(ColoredFormatter(
            '%(asctime)s | %(levelname)-8s | %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        self.logger.addHandler(console_handler)

        if log_file is None and log_dir is not None:
            directory = Path(log_dir)
            directory.mkdir(parents=True, exist_ok=True)
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            log_file = str(directory / f"qsense_run_{timestamp}.log")

        if log_file is not None:
            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s | %(name)s | %(levelname)-8s | %(funcName)s:%(lineno)d | %(message)s',
                datefmt='%Y-%m-%d %H:%M:%S'
            ))
            self.logger.addHandler(file_handler)

        self.log_file = log_file
        self.timers = {}

        self.debug(f"Logging initialized. Log file: {log_file}")

    def debug(self, message: str):
        """Log debug message."""
        self.logger.debug(message, stacklevel=2)

    def info(self, message: str):
        """Log info message."""
        self.logger.info(message, stacklevel=2)

    def warning(self, message: str):
        """Log warning message."""
        self.logger.warning(message, stacklevel=2)

    def error(self, message: str):
        """Log error message."""
        self.logger.error(message, stacklevel=2)

    def start_timer(self, operation: str):
        """Start a timer for an operation."""
        self.timers[operation] = time.perf_counter()
        self.debug(f"Started: {operation}")

    def stop_timer(self, operation: str, success: bool = True) -> Optional[float]:
        """Stop a timer and log the duration.

        Args:
            operation: Name of the operation
            success: Whether the operation succeeded

        Returns:
            Elapsed seconds, or None if the timer was never started
        """
        if operation not in self.timers:
            self.warning(f"Timer '{operation}' was never started")
            return None

        elapsed = time.perf_counter() - self.timers.pop(operation)
        status = "Completed" if success else "Failed"
        self.info(f"{status}: {operation} (Duration: {elapsed:.2f}s)")
        return elapsed

    @contextmanager
    def timer(self, operation: str):
        """Context manager for timing operations.

        Example:
            with logger.timer("ramp"):
                run_ramp(scenario)
        """
        self.start_timer(operation)
        try:
            yield
            self.stop_timer(operation, success=True)
        except Exception as e:
            self.stop_timer(operation, success=False)
            self.error(f"Error in {operation}: {e}")
            raise

    def log_separator(self, char: str = "=", length: int = 80):
        """Log a separator line."""
        self.info(char * length)

    def log_section(self, title: str):
        """Log a section header."""
        self.log_separator()
        self.info(f"  {title}")
        self.log_separator()


# Global logger instance
_global_logger: Optional[SimulationLogger] = None


def get_logger() -> SimulationLogger:
    """Get or create the global logger instance from settings."""
    global _global_logger
    if _global_logger is None:
        from src.config import get_settings

        settings = get_settings()
        _global_logger = SimulationLogger(
            level=settings.log_level,
            log_dir=settings.log_dir if settings.log_to_file else None,
        )
    return _global_logger


def set_logger(logger: SimulationLogger):
    """Set the global logger instance."""
    global _global_logger
    _global_logger = logger

"""Logging setup shared by the CLI, the smoke run and the experiment runners."""
import logging
from datetime import datetime
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from ..config.settings import LOG_FILE, LOG_LEVEL

FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s'


def setup_logger(name: str = "nonstat", level: Optional[str] = None,
                 log_file: Optional[Path] = LOG_FILE) -> logging.Logger:
    """
    Attach a rich console handler and a DEBUG file handler to a named logger.

    Calling it again for the same name returns the configured logger untouched.

    Args:
        name: Logger name ("nonstat" for the CLI, "src" for library modules)
        level: Logger level, defaulting to LOG_LEVEL
        log_file: Detailed log destination; None disables file logging
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    logger.setLevel(getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO))

    # stderr keeps logs apart from the tables the CLI prints on stdout
    console_handler = RichHandler(console=Console(stderr=True), show_time=False, show_path=False,
                                  markup=False, rich_tracebacks=False)
    console_handler.setLevel(logging.INFO)
    logger.addHandler(console_handler)

    if log_file is not None:
        try:
            log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
            logger.addHandler(file_handler)
        except OSError as e:
            logger.warning(f"Could not set up file logging: {e}")

    return logger


def set_console_level(logger: logging.Logger, level: int) -> None:
    """Change the threshold of a logger's console output (e.g. DEBUG for --verbose)."""
    if level < logger.level:
        logger.setLevel(level)
    for handler in logger.handlers:
        if isinstance(handler, RichHandler):
            handler.setLevel(level)


def log_run_audit(command: str, success: bool, **fields) -> None:
    """
    Log one structured audit line per CLI run.

    Args:
        command: Subcommand name
        success: Whether the run completed
        **fields: Extra key/value pairs (seed, output dir, error, ...); None values are dropped
    """
    entry = {"timestamp": datetime.now().isoformat(), "command": command, "success": success}
    entry.update({k: v for k, v in fields.items() if v is not None})
    logging.getLogger("nonstat.audit").info("AUDIT: " + " | ".join(f"{k}={v}" for k, v in entry.items()))

"""Utility functions."""
from .logger import setup_logger, set_console_level, log_run_audit
from .csv_reader import read_time_series, detect_header

__all__ = [
    'setup_logger',
    'set_console_level',
    'log_run_audit',
    'read_time_series',
    'detect_header',
]

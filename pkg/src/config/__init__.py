"""Configuration management."""
from .settings import *
from .suite_config_loader import SuiteConfig, SuiteConfigLoader, get_suite_config_loader

__all__ = ['SuiteConfig', 'SuiteConfigLoader', 'get_suite_config_loader']

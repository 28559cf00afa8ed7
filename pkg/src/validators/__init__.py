"""Stationarity tests and diagnostics."""
from .stationarity_validator import lr_statistic, dof, chi2_sf, lr_test, select_ds
from .bnise import BniseReport, held_out_losses, bnise_report, bnise

__all__ = [
    'lr_statistic',
    'dof',
    'chi2_sf',
    'lr_test',
    'select_ds',
    'BniseReport',
    'held_out_losses',
    'bnise_report',
    'bnise',
]

"""Shared-volatility AR + GARCH modeling for panels of time series."""

import json

from . import _sharedvol
from ._sharedvol import (
    DegenerateInput,
    FitFailure,
    InvalidArgument,
    PipelineError,
    acf,
    fit_ar,
    garch_log_likelihood,
    generate_panel,
    identify_ar_order,
    li_mak,
    ljung_box,
    mcleod_li,
    pacf,
    qq_normal,
    significance_limit,
    simulate_garch,
    study_presets,
)

__all__ = [
    "DegenerateInput",
    "FitFailure",
    "InvalidArgument",
    "PipelineError",
    "acf",
    "fit_ar",
    "fit_garch",
    "garch_log_likelihood",
    "generate_panel",
    "identify_ar_order",
    "li_mak",
    "ljung_box",
    "mcleod_li",
    "pacf",
    "qq_normal",
    "run_pipeline",
    "run_study",
    "significance_limit",
    "simulate_garch",
    "study_presets",
]


def fit_garch(x, p=1, q=1, seed=20240101):
    """Maximum-likelihood GARCH(p, q) fit; returns the coefficient table as a dict."""
    return json.loads(_sharedvol.fit_garch(list(x), p, q, seed))


def run_pipeline(columns, labels=None, weighting="weighted", alpha=0.05, seed=0,
                 garch_gate="mcleod_li", legacy_baseline=True):
    """Runs the full pipeline on a list of equal-length series; returns the report dict."""
    text = _sharedvol.run_pipeline([list(c) for c in columns], list(labels or []), weighting,
                                   alpha, seed, garch_gate, legacy_baseline)
    return json.loads(text)


def run_study(preset, replications=1, seed=1, threads=0):
    return json.loads(_sharedvol.run_study(preset, replications, seed, threads))

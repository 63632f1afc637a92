"""Bayesian optimization for min-max problems."""

from ._core import (
    GpPosterior,
    InvalidArgument,
    KernelParams,
    Location,
    MinMaxPoint,
    NumericalError,
    Problem,
    aggregate,
    ep_probability,
    es_select,
    grid_minmax,
    kg_acquisition,
    make_problem,
    p_opt,
    posterior_mean_minmax,
    problem_names,
    run_trial,
    worst_case_profile,
)

__all__ = [
    "GpPosterior",
    "InvalidArgument",
    "KernelParams",
    "Location",
    "MinMaxPoint",
    "NumericalError",
    "Problem",
    "aggregate",
    "ep_probability",
    "es_select",
    "grid_minmax",
    "kg_acquisition",
    "make_problem",
    "p_opt",
    "posterior_mean_minmax",
    "problem_names",
    "run_trial",
    "worst_case_profile",
]

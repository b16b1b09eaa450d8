"""Python bindings for the CoRR optimiser and its benchmark functions."""

from ._corr import (
    CallableObjective,
    DiagonalQuadratic,
    NonConvergence,
    Objective,
    TestFunction,
    corr_optimize,
    draw_samples,
    fit_envelope,
    function_names,
    minimize_on_ball,
    nelder_mead,
    random_search,
    run_experiment,
    simulated_annealing,
)

__all__ = [
    "CallableObjective",
    "DiagonalQuadratic",
    "NonConvergence",
    "Objective",
    "TestFunction",
    "corr_optimize",
    "draw_samples",
    "fit_envelope",
    "function_names",
    "minimize_on_ball",
    "nelder_mead",
    "random_search",
    "run_experiment",
    "simulated_annealing",
]

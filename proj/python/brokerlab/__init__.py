"""Online brokerage simulation laboratory: gain-from-trade, exact expected-GFT
functionals, posted-price learners, and seeded regret experiments."""

from ._core import (
    ConfigError,
    FeedbackMismatchError,
    Learner,
    Measure,
    approximation_gap,
    argmax_rho,
    atomic,
    bounded_spike,
    discrete_four,
    discretized_mean_bounds,
    estimate_regret,
    gft,
    make_learner,
    measure_from_json,
    minimax_probe,
    needle_three,
    optimal_benchmark,
    piecewise,
    rate_fit,
    rho,
    rho_bounded_density,
    rho_tilde,
    run_episode,
    uniform,
    verify,
)

__all__ = [
    "ConfigError",
    "FeedbackMismatchError",
    "Learner",
    "Measure",
    "approximation_gap",
    "argmax_rho",
    "atomic",
    "bounded_spike",
    "discrete_four",
    "discretized_mean_bounds",
    "estimate_regret",
    "gft",
    "make_learner",
    "measure_from_json",
    "minimax_probe",
    "needle_three",
    "optimal_benchmark",
    "piecewise",
    "rate_fit",
    "rho",
    "rho_bounded_density",
    "rho_tilde",
    "run_episode",
    "uniform",
    "verify",
]

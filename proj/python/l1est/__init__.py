"""Estimators, lower-bound tools and a Monte Carlo harness for the mean absolute value of a normal mean vector."""

from ._core import (
    BERNSTEIN_CONSTANT,
    ConditioningError,
    ConvergenceError,
    DataError,
    DomainError,
    PreconditionError,
    approx_coefficients,
    best_approx,
    chi_square,
    chi_square_bound_n,
    chi_square_tail_bound,
    estimate,
    hermite,
    hermite_second_moment,
    prior_pair,
    run_config,
    select_K_star,
    select_kn,
    selftest,
    uniform_error,
)

__version__ = "0.1.0"

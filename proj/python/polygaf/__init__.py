"""Zero statistics of hyperbolic Gaussian analytic functions on the polydisk.

Thin Python surface over the C++ core: certified sampling, both linear-
statistic routes, the variance integrals, and the probability experiments.
"""

from ._polygaf import (
    bipotential_variance,
    count_zeros,
    covariance,
    dilog,
    epsilon_mean_value,
    evaluate,
    expected_statistic,
    hole_probability,
    normalized_kernel_abs_sq,
    predicted_variance,
    run_cli,
    sample_zeros,
    statistic_stokes,
    statistic_zeros,
    truncation_degrees,
    version,
    zeta,
)

__all__ = [
    "bipotential_variance",
    "count_zeros",
    "covariance",
    "dilog",
    "epsilon_mean_value",
    "evaluate",
    "expected_statistic",
    "hole_probability",
    "normalized_kernel_abs_sq",
    "predicted_variance",
    "run_cli",
    "sample_zeros",
    "statistic_stokes",
    "statistic_zeros",
    "truncation_degrees",
    "version",
    "zeta",
]

__version__ = version().split()[-1]

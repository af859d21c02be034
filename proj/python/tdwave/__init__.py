"""Blowup laboratory for the damped wave equation with power-law speed.

Thin re-export of the compiled extension; everything substantive lives in
the C++ core. Reports come back as plain dicts/lists so they drop straight
into pandas or json.dump.
"""

from ._core import (
    CoefficientModel,
    ConfigError,
    NumericalError,
    b_star,
    build_m_star,
    check_assumptions,
    exponent_report,
    fit_lifespan_exponent,
    gamma_hwy,
    lifespan_sweep,
    make_power_law,
    p_hwy,
    phi,
    primitive_A,
    primitive_B,
    simulate,
    verify_cutoff_bounds,
    yz_norm_bound,
)

__all__ = [
    "CoefficientModel",
    "ConfigError",
    "NumericalError",
    "b_star",
    "build_m_star",
    "check_assumptions",
    "exponent_report",
    "fit_lifespan_exponent",
    "gamma_hwy",
    "lifespan_sweep",
    "make_power_law",
    "p_hwy",
    "phi",
    "primitive_A",
    "primitive_B",
    "simulate",
    "verify_cutoff_bounds",
    "yz_norm_bound",
]

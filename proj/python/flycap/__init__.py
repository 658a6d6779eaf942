"""Flying-capacitor converter observers (C++ core)."""

from ._core import (
    ConfigError,
    ConverterParams,
    NumericalAbort,
    SosmlParams,
    check_condition16,
    compare,
    derive_inputs,
    dynamics,
    lyapunov_matrices,
    mode_table,
    observability_rank,
    pe_min_eigenvalue,
    simulate,
    simulate_csv,
    z_observable,
)

__all__ = [
    "ConfigError",
    "ConverterParams",
    "NumericalAbort",
    "SosmlParams",
    "check_condition16",
    "compare",
    "derive_inputs",
    "dynamics",
    "lyapunov_matrices",
    "mode_table",
    "observability_rank",
    "pe_min_eigenvalue",
    "simulate",
    "simulate_csv",
    "z_observable",
]

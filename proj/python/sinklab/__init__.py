"""Diffusion in a V-shaped potential with a time-dependent point sink."""

from ._sinklab import (
    AnalyticSolution,
    CheckedInversion,
    ConstantSink,
    ExpDecaySink,
    IltConfig,
    IltMethod,
    InverseTimeSink,
    LinearSink,
    ModelParams,
    NoSink,
    NumericalError,
    SinkSign,
    ValidationError,
    assemble_field,
    cn_solve,
    equilibrium_profile,
    exact_v_green,
    free_drift_green,
    invert_checked,
    law_name,
    literal_green,
    literal_p0_constant,
    mc_solve,
    numeric_laplace,
    origin_green,
    origin_kernel,
    sink_strength,
    solve_origin,
    stehfest,
    survival_from_laplace,
    talbot,
    volterra_p0,
)

__version__ = "0.1.0"

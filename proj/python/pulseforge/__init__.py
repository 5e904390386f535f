"""Shaped-pulse design for robust two-level population inversion.

Thin Python layer over the compiled core. Typical use:

    import pulseforge as pf

    report = pf.solve("area", 3, "a")
    pulse = pf.synthesize(pf.PhaseParameterization("a", report.coefficients),
                          pf.ThetaSchedule())
    p2, infidelity = pf.propagate(pulse, alpha=0.1)
"""

from _pulseforge import (  # noqa: F401
    DomainError,
    IterationLimitError,
    PhaseParameterization,
    PulseShape,
    SolveReport,
    ThetaSchedule,
    ValidationError,
    condition_residuals,
    hierarchy,
    phi_of_theta,
    propagate,
    pulse_area,
    read_pulse_csv,
    scaling_exponent,
    scan,
    second_order,
    solve,
    state_vector,
    synthesize,
    write_pulse_csv,
)

__all__ = [
    "DomainError",
    "IterationLimitError",
    "PhaseParameterization",
    "PulseShape",
    "SolveReport",
    "ThetaSchedule",
    "ValidationError",
    "condition_residuals",
    "hierarchy",
    "phi_of_theta",
    "propagate",
    "pulse_area",
    "read_pulse_csv",
    "scaling_exponent",
    "scan",
    "second_order",
    "solve",
    "state_vector",
    "synthesize",
    "write_pulse_csv",
]

"""Rotor kinetic-energy reserve optimiser and frequency simulator for
wake-coupled wind turbine rows."""

from ._core import (
    CaseRun,
    ConfigError,
    ConvergenceError,
    DegenerateWakeError,
    DomainError,
    FarmSolution,
    InfeasibleError,
    NadirMetrics,
    OperatingPoint,
    SimTrace,
    SimulationError,
    StudyConfig,
    TurbineParams,
    WakeParams,
    WakefcError,
    base_case,
    cp_from_ct,
    cp_surface,
    ct_from_cp,
    default_config,
    deload_curve,
    evaluate_point,
    kinetic_energy,
    load_config,
    mech_power,
    mppt,
    next_wind,
    optimal_tip_speed_ratio,
    parse_config,
    propagate_row,
    run_cases,
    simulate,
    solve_farm,
    sweep,
    thrust,
    tip_speed_ratio,
    zone,
)

__all__ = [name for name in dir() if not name.startswith("_")]

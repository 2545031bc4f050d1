"""Effective capacity of FD/HD heterogeneous cellular networks."""

from ._core import (
    ConvergenceError,
    DuplexMode,
    ECEstimate,
    Error,
    LinkScenario,
    NetworkTopology,
    ScenarioConfig,
    ValidationError,
    build_scenario,
    check_theta_constraint,
    ec_exact_mc,
    ec_lower_bound,
    fd_gain,
    find_crossover,
    g,
    g_concavity_check,
    g_second_derivative,
    load_scenario,
    make_eta_grid_db,
    mean_interference_bs_ue,
    mean_interference_ue_ue,
    mean_pathloss_numeric,
    mean_pathloss_taylor,
    parse_scenario,
    sweep_eta,
    total_mean_interference,
)

__all__ = [name for name in dir() if not name.startswith("_")]

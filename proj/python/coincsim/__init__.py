"""Gated photon-coincidence simulator: scenario runner, estimators and time-tag I/O."""

from ._coincsim import (
    AlphaEstimate,
    ConfigError,
    CountSummary,
    DataError,
    OracleParams,
    PointResult,
    ScenarioConfig,
    ScenarioResult,
    UndefinedEstimate,
    alpha_estimate,
    analyze_timetag,
    expected_alpha_pdc,
    expected_alpha_thermal_shared,
    export_acquisition,
    load_config,
    parse_config,
    parse_timetag,
    run_scenario,
    scenario_oracle,
    sigma_separation,
    weighted_mean,
    write_timetag,
)

__version__ = "0.3.0"

__all__ = [
    "AlphaEstimate",
    "ConfigError",
    "CountSummary",
    "DataError",
    "OracleParams",
    "PointResult",
    "ScenarioConfig",
    "ScenarioResult",
    "UndefinedEstimate",
    "alpha_estimate",
    "analyze_timetag",
    "expected_alpha_pdc",
    "expected_alpha_thermal_shared",
    "export_acquisition",
    "load_config",
    "parse_config",
    "parse_timetag",
    "run_scenario",
    "scenario_oracle",
    "sigma_separation",
    "weighted_mean",
    "write_timetag",
]

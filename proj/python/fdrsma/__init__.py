from ._fdrsma import (  # noqa: F401
    ConfigError,
    LinkSet,
    LinkStats,
    OracleError,
    OutageBreakdown,
    SystemConfig,
    Thresholds,
    analytic_outages,
    build_link_stats,
    dbm_to_linear_snr,
    erlang_cdf,
    erlang_sf,
    load_scenario,
    log_binomial,
    lower_regularized_gamma,
    mc_outages,
    oracle_outage_component,
    perfect_limit,
    run_recipe,
    thresholds_from_rates,
    throughput,
    validate_config,
)

__all__ = [
    "ConfigError",
    "LinkSet",
    "LinkStats",
    "OracleError",
    "OutageBreakdown",
    "SystemConfig",
    "Thresholds",
    "analytic_outages",
    "build_link_stats",
    "dbm_to_linear_snr",
    "erlang_cdf",
    "erlang_sf",
    "load_scenario",
    "log_binomial",
    "lower_regularized_gamma",
    "mc_outages",
    "oracle_outage_component",
    "perfect_limit",
    "run_recipe",
    "thresholds_from_rates",
    "throughput",
    "validate_config",
]

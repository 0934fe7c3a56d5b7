"""Python bindings for the rcpm native core."""

from ._rcpm import (
    ConfigError,
    DataError,
    EmptyLogError,
    Error,
    EventLog,
    ParseError,
    TimeoutError,
    ValidationError,
    case_view,
    count_2grams,
    encode,
    load_event_log,
    mutual_information,
    parse_csv,
    parse_xes,
    prefix_grid,
    profile,
    repetition,
    resource_view,
    run_cli,
    run_experiment,
    run_features,
    specialization,
    synthetic_run_log,
)

__all__ = [
    "ConfigError",
    "DataError",
    "EmptyLogError",
    "Error",
    "EventLog",
    "ParseError",
    "TimeoutError",
    "ValidationError",
    "case_view",
    "count_2grams",
    "encode",
    "load_event_log",
    "mutual_information",
    "parse_csv",
    "parse_xes",
    "prefix_grid",
    "profile",
    "repetition",
    "resource_view",
    "run_cli",
    "run_experiment",
    "run_features",
    "specialization",
    "synthetic_run_log",
]

from .cmapss import EngineRecord, MalformedLine, parse_cmapss, scan_cmapss
from .store import (
    EngineSnapshot,
    EngineStatus,
    Fixture,
    FixtureIncomplete,
    FixtureRulExceedsLife,
    FleetStore,
    Fraction,
    Latest,
    RulReading,
    UnknownEngine,
    UnknownEngineInFixture,
    fleet_metrics,
    fleet_snapshots,
    get_engine_data,
    load_fleet,
    predict_engine_rul,
    set_engine_status,
)

__all__ = [
    "EngineRecord",
    "EngineSnapshot",
    "EngineStatus",
    "Fixture",
    "FixtureIncomplete",
    "FixtureRulExceedsLife",
    "FleetStore",
    "Fraction",
    "Latest",
    "MalformedLine",
    "RulReading",
    "UnknownEngine",
    "UnknownEngineInFixture",
    "fleet_metrics",
    "fleet_snapshots",
    "get_engine_data",
    "load_fleet",
    "parse_cmapss",
    "predict_engine_rul",
    "scan_cmapss",
    "set_engine_status",
]

"""Column schema for CMAPSS-format telemetry files.

Each data line carries 26 whitespace-separated numeric fields: engine id,
cycle, three operational settings, and 21 sensor readings, in the fixed
order below. The snake_case names double as the closed metric vocabulary
used by intent conditions and dynamic target filters.
"""

from __future__ import annotations

SETTING_NAMES: tuple[str, ...] = (
    "speed",
    "altitude",
    "sea_level_temperature",
)

SENSOR_NAMES: tuple[str, ...] = (
    "fan_inlet_temperature",
    "lpc_outlet_temperature",
    "hpc_outlet_temperature",
    "lpt_outlet_temperature",
    "fan_inlet_pressure",
    "bypass_duct_pressure",
    "hpc_outlet_pressure",
    "physical_fan_speed",
    "physical_core_speed",
    "engine_pressure_ratio",
    "hpc_outlet_static_pressure",
    "ratio_of_fuel_flow",
    "corrected_fan_speed",
    "corrected_core_speed",
    "bypass_ratio",
    "burner_fuel_air_ratio",
    "bleed_enthalpy",
    "required_fan_speed",
    "required_fan_conversion_speed",
    "high_pressure_turbines_cool_air_flow",
    "low_pressure_turbines_cool_air_flow",
)

UNITS: dict[str, str] = {
    "rul": "cycles",
    "speed": "Ma",
    "altitude": "feet",
    "sea_level_temperature": "degF",
    "fan_inlet_temperature": "degR",
    "lpc_outlet_temperature": "degR",
    "hpc_outlet_temperature": "degR",
    "lpt_outlet_temperature": "degR",
    "fan_inlet_pressure": "psia",
    "bypass_duct_pressure": "psia",
    "hpc_outlet_pressure": "psia",
    "physical_fan_speed": "rpm",
    "physical_core_speed": "rpm",
    "engine_pressure_ratio": "",
    "hpc_outlet_static_pressure": "psia",
    "ratio_of_fuel_flow": "pps/psia",
    "corrected_fan_speed": "rpm",
    "corrected_core_speed": "rpm",
    "bypass_ratio": "",
    "burner_fuel_air_ratio": "",
    "bleed_enthalpy": "",
    "required_fan_speed": "rpm",
    "required_fan_conversion_speed": "rpm",
    "high_pressure_turbines_cool_air_flow": "lbm/s",
    "low_pressure_turbines_cool_air_flow": "lbm/s",
}

FIELD_COUNT = 2 + len(SETTING_NAMES) + len(SENSOR_NAMES)

# Closed vocabulary for condition subjects and dynamic target filters.
METRIC_VOCABULARY: frozenset[str] = frozenset(("rul",) + SETTING_NAMES + SENSOR_NAMES)


def canonicalize_metric(name: str) -> str:
    """Normalize a metric name to its vocabulary form (e.g. "RUL" -> "rul")."""
    return name.strip().lower().replace(" ", "_").replace("-", "_")

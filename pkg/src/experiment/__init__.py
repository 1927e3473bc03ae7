"""Experiment composition: calibration, ramps, sensitivity extraction."""

from src.experiment.calibration import ChamberCalibration, calibrate_dn, calibration_table
from src.experiment.scenario import (
    RampScenario,
    ScenarioConfig,
    build_scenario,
    load_scenario_config,
)
from src.experiment.sensitivity import (
    budget_estimate,
    confidence_z,
    enhancement,
    enhancement_from_ratio,
    fit_and_extract,
    photon_flux,
    single_coherent_equivalent,
)
from src.experiment.ramp import demo_snapshots, run_ramp, sensitivity_report

__all__ = [
    "ChamberCalibration",
    "calibrate_dn",
    "calibration_table",
    "RampScenario",
    "ScenarioConfig",
    "build_scenario",
    "load_scenario_config",
    "budget_estimate",
    "confidence_z",
    "enhancement",
    "enhancement_from_ratio",
    "fit_and_extract",
    "photon_flux",
    "single_coherent_equivalent",
    "demo_snapshots",
    "run_ramp",
    "sensitivity_report",
]

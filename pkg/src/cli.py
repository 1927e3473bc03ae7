"""Command-line interface.

Every command reads an optional YAML scenario (``--config``), applies
``--set key.path=value`` overrides, writes ``<command>_report.json`` (plus
CSV traces for ``ramp``) into ``--out`` and prints the report on stdout in
the requested ``--format``. Logs go to stderr.

Exit codes: 0 success, 1 configuration error, 2 precondition error,
3 validation failure.
"""

import functools
import math
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import pandas as pd
from pydantic import ValidationError

from src import __version__
from src.config import Settings, get_settings
from src.errors import PreconditionError, ToolkitError, ValidationFailure
from src.experiment import (
    budget_estimate,
    build_scenario,
    calibration_table,
    demo_snapshots,
    enhancement_from_ratio,
    load_scenario_config,
    photon_flux,
    run_ramp,
    sensitivity_report,
)
from src.experiment.scenario import ScenarioConfig, build_analyzer, build_calibration, build_sensor, probe_channels
from src.logger import get_logger
from src.oracle.validation import run_oracle_suite
from src.quantum import TwinBeamSource, apply_loss, linear_to_db, noise_ratio, optimize_gain, source_moments
from src.reports import (
    ReportExporter,
    build_manifest,
    config_snapshot,
    render_csv,
    render_json,
    render_text,
    timestamp,
    validate_report,
)
from src.reports.exporter import flatten
from src.signal_chain import effective_averages, window_counts

DEFAULT_DRIVES_V = (0.0, 0.25, 0.5, 0.75, 1.0)


class CommandRun:
    """Shared state of one CLI invocation: settings, scenario, exporter and timing."""

    def __init__(
        self,
        command: str,
        config_path: Optional[str],
        out_dir: Optional[str],
        seed: Optional[int],
        fmt: str,
        overrides: Sequence[str],
        reproducible: Optional[bool],
    ):
        self.command = command
        get_logger().log_section(f"qsense {command}")
        self.settings: Settings = get_settings()
        self.reproducible = self.settings.reproducible_timestamps if reproducible is None else reproducible
        self.started_at = timestamp(self.reproducible)
        self.seed = seed
        self.fmt = fmt
        self.config: ScenarioConfig = load_scenario_config(config_path, overrides)
        self.exporter = ReportExporter(out_dir or self.settings.output_dir)
        self.files: List[str] = []
        self.options: Dict[str, Any] = {}

    def finish(self, results: Dict[str, Any], frame: Optional[pd.DataFrame] = None) -> Dict[str, Any]:
        """Write the JSON report and echo it in the requested format."""
        snapshot = config_snapshot(self.config.snapshot(), self.settings, self.options)
        manifest = build_manifest(
            self.command,
            snapshot,
            self.seed,
            self.started_at,
            timestamp(self.reproducible),
        )
        payload = {
            "command": self.command,
            "manifest": manifest.model_dump(mode="json"),
            "results": results,
            "files": sorted(self.files),
        }
        validate_report(payload)
        self.exporter.write_json(f"{self.command}_report.json", payload)

        if self.fmt == "json":
            click.echo(render_json(payload), nl=False)
        elif self.fmt == "csv":
            if frame is None:
                frame = pd.DataFrame(list(flatten(results).items()), columns=["key", "value"])
            click.echo(render_csv(frame), nl=False)
        else:
            click.echo(render_text(results), nl=False)
        return payload


def common_options(func: Callable) -> Callable:
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="Scenario YAML file"),
        click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
                     help="Report directory (default: QSENSE_OUTPUT_DIR)"),
        click.option("--seed", type=int, default=None, help="Seed for randomized commands"),
        click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="text",
                     show_default=True, help="Stdout format"),
        click.option("--set", "overrides", multiple=True, metavar="KEY.PATH=VALUE",
                     help="Override a scenario value (repeatable)"),
        click.option("--reproducible/--no-reproducible", default=None,
                     help="Fix manifest timestamps from SOURCE_DATE_EPOCH"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def handle_errors(func: Callable) -> Callable:
    """Map toolkit exceptions to exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_logger()
        try:
            return func(*args, **kwargs)
        except ToolkitError as exc:
            logger.error(f"{type(exc).__name__}: {exc}")
            click.echo(f"Error: {exc}", err=True)
            raise SystemExit(exc.exit_code)
        except ValidationError as exc:
            logger.error(f"Invalid input: {exc}")
            click.echo(f"Error: {exc}", err=True)
            raise SystemExit(PreconditionError.exit_code)

    return wrapper


@click.group()
@click.version_option(__version__, prog_name="qsense")
def cli():
    """Quantum-enhanced plasmonic sensing simulator."""


@cli.command()
@common_options
@handle_errors
def budget(config_path, out_dir, seed, fmt, overrides, reproducible):
    """Shot-noise-limited index resolution from the photon budget."""
    run = CommandRun("budget", config_path, out_dir, seed, fmt, overrides, reproducible)
    run.config.require("sensor", "probe", "analyzer")
    sensor = build_sensor(run.config, run.settings)
    analyzer = build_analyzer(run.config)

    flux = photon_flux(run.config.probe.post_sensor_power_uw * 1.0e-6, sensor.wavelength)
    n_averages = effective_averages(analyzer)
    bandwidth = run.config.detection_bandwidth_hz
    dn_min = budget_estimate(sensor.t_at, sensor.dT_dn, flux, n_averages, bandwidth)
    get_logger().info(f"Budget dn_min = {dn_min:.4g} RIU/sqrt(Hz)")

    run.finish({
        "wavelength_nm": sensor.wavelength,
        "photon_flux_per_s": flux,
        "window_counts_1hz": window_counts(flux, 1.0),
        "transmission": sensor.t_at,
        "dT_dlambda_per_nm": sensor.dT_dlambda,
        "dispersion_nm_per_riu": sensor.dispersion_S,
        "dT_dn_per_riu": sensor.dT_dn,
        "effective_averages": n_averages,
        "bandwidth_hz": bandwidth,
        "dn_min_riu": dn_min * math.sqrt(bandwidth),
        "dn_min_riu_per_rthz": dn_min,
    })


@cli.command()
@common_options
@handle_errors
def squeezing(config_path, out_dir, seed, fmt, overrides, reproducible):
    """Residual intensity-difference squeezing after losses."""
    run = CommandRun("squeezing", config_path, out_dir, seed, fmt, overrides, reproducible)
    run.config.require("source")
    sensor = build_sensor(run.config, run.settings) if run.config.sensor is not None else None
    probe_loss, conj_loss = probe_channels(run.config, sensor, run.settings)

    source = TwinBeamSource.from_squeezing(run.config.source.squeezing_db, run.config.source.seed_flux_per_s)
    lossless = source_moments(source, 1.0)
    lossy = apply_loss(lossless, probe_loss, conj_loss)
    g_opt, residual = optimize_gain(lossy, run.settings.gain_search_upper)

    run.finish({
        "source_squeezing_db": run.config.source.squeezing_db,
        "amplifier_gain": source.gain,
        "probe_transmission": probe_loss.transmission,
        "conj_transmission": conj_loss.transmission,
        "optimal_electronic_gain": g_opt,
        "residual_squeezing_db": residual.db,
        "residual_noise_ratio": residual.linear_r,
        "percent_below_snl": residual.percent_below_snl,
        "unit_gain_squeezing_db": linear_to_db(noise_ratio(lossy, 1.0)),
        "lossless_squeezing_db": linear_to_db(source.ideal_ratio),
        "predicted_enhancement": enhancement_from_ratio(residual.linear_r),
        "lossless_enhancement": enhancement_from_ratio(source.ideal_ratio),
    })


@cli.command()
@common_options
@click.option("--mode", type=click.Choice(["deterministic", "stochastic"]), default="deterministic",
              show_default=True, help="Exact predictions or seeded noisy trials")
@handle_errors
def ramp(config_path, out_dir, seed, fmt, overrides, reproducible, mode):
    """Voltage-ramp sensitivity for every probing configuration."""
    run = CommandRun("ramp", config_path, out_dir, seed, fmt, overrides, reproducible)
    run.options = {"mode": mode}
    if mode == "stochastic" and seed is None:
        raise PreconditionError("Stochastic ramps require --seed")
    scenario = build_scenario(run.config, run.settings)

    result = run_ramp(scenario, mode=mode, seed=seed)
    report = sensitivity_report(scenario, result)
    snapshots = demo_snapshots(scenario)
    for series in result.series.values():
        run.files.append(run.exporter.write_trace(series).name)

    frame = pd.DataFrame([
        {
            "configuration": name,
            "electronic_gain": r.electronic_gain,
            "noise_ratio": r.noise_ratio,
            "dn_min_riu": r.fit.dn_min_raw,
            "dn_min_riu_per_rthz": r.fit.dn_min_per_rtHz,
        }
        for name, r in report.configurations.items()
    ])
    run.finish({
        "mode": result.mode,
        "detected_counts": result.detected_counts,
        "input_counts": result.input_counts,
        "sensitivity": report.model_dump(mode="json"),
        "demo_snapshots": {f"{dn:.3g}": values for dn, values in snapshots.items()},
    }, frame)


@cli.command()
@common_options
@click.option("--drive", "drives", type=float, multiple=True, help="Drive voltage to tabulate (repeatable)")
@handle_errors
def calibrate(config_path, out_dir, seed, fmt, overrides, reproducible, drives):
    """Index change per drive volt from the interferometer calibration."""
    run = CommandRun("calibrate", config_path, out_dir, seed, fmt, overrides, reproducible)
    cal = build_calibration(run.config)
    table = calibration_table(cal, drives or DEFAULT_DRIVES_V)
    run.finish({
        "wavelength_nm": cal.wavelength,
        "path_length_mm": cal.path_length,
        "dn_per_volt": cal.dn_per_volt,
        "table": table,
    }, pd.DataFrame(table))


@cli.command()
@common_options
@click.option("--trials", type=int, default=None, help="Stochastic ramp trials (at least 10)")
@click.option("--samples", type=int, default=None, help="Samples per oracle time series")
@handle_errors
def validate(config_path, out_dir, seed, fmt, overrides, reproducible, trials, samples):
    """Monte Carlo cross-check of the analytic pipeline."""
    run = CommandRun("validate", config_path, out_dir, seed, fmt, overrides, reproducible)
    if seed is None:
        raise PreconditionError("validate requires --seed")
    scenario = build_scenario(run.config, run.settings)
    section = run.config.validation
    trials = trials if trials is not None else section.trials
    samples = samples if samples is not None else section.oracle_samples
    run.options = {"trials": trials, "samples": samples}
    override = section.moments_override.model_dump() if section.moments_override is not None else None

    report = run_oracle_suite(
        scenario,
        seed,
        trials=trials,
        samples=samples,
        moments_override=override,
        series_samples=section.series_samples,
        settings=run.settings,
    )
    failures = [check.name for check in report.failures]
    frame = pd.DataFrame([check.model_dump() for check in report.checks])
    run.finish({
        "passed": report.passed,
        "failures": failures,
        "checks": [check.model_dump(mode="json") for check in report.checks],
    }, frame)
    if not report.passed:
        raise ValidationFailure(f"{len(failures)} validation check(s) failed", failures)


if __name__ == "__main__":
    cli()

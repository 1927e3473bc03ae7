"""Report and trace exporter: JSON reports, CSV traces and oracle dumps."""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from src.logger import get_logger
from src.oracle.spectral import SpectralEstimate
from src.signal_chain import SnrEstimate, power_to_dbm, predicted_readings
from src.state import RampSeries

logger = get_logger()

CSV_FLOAT_FORMAT = "%.10g"
TRACE_COLUMNS = ["time_s", "drive_v", "dn_riu", "snr_amplitude", "peak_dbm", "floor_dbm"]


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def flatten(payload: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Dotted-key view of a nested report (lists are indexed)."""
    flat = {}
    for key, value in payload.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{path}."))
        elif isinstance(value, list):
            flat.update(flatten({str(i): v for i, v in enumerate(value)}, f"{path}."))
        else:
            flat[path] = value
    return flat


def render_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def render_text(payload: Dict[str, Any]) -> str:
    lines = []
    for key, value in flatten(payload).items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def trace_frame(series: RampSeries) -> pd.DataFrame:
    """Plot-ready ramp trace with predicted analyzer readings in dBm."""
    floor = power_to_dbm(series.noise_variance)
    rows = []
    for point in series.points:
        snr = SnrEstimate.from_amplitude(abs(point.snr_amplitude))
        peak, _ = predicted_readings(snr, floor)
        rows.append([point.time_s, point.drive_v, point.dn, point.snr_amplitude, peak, floor])
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


class ReportExporter:
    """Write reports and traces atomically into one output directory."""

    def __init__(self, output_dir: str = "outputs"):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        logger.debug(f"Report exporter initialized (output: {self.output_dir})")

    def _write_atomic(self, filename: str, text: str) -> Path:
        target = self.output_dir / filename
        fd, tmp_path = tempfile.mkstemp(dir=self.output_dir, prefix=f".{filename}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_path, target)
        except Exception as e:
            logger.error(f"Failed to write {target}: {e}")
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise
        logger.info(f"Wrote {target}")
        return target

    def write_json(self, filename: str, payload: Dict[str, Any]) -> Path:
        return self._write_atomic(filename, render_json(payload))

    def write_frame(self, filename: str, frame: pd.DataFrame) -> Path:
        return self._write_atomic(filename, render_csv(frame))

    def write_trace(self, series: RampSeries) -> Path:
        return self.write_frame(f"ramp_{series.configuration}.csv", trace_frame(series))

    def dump_series(
        self,
        filename: str,
        probe: np.ndarray,
        conj: np.ndarray,
        sample_rate: float = 1.0,
    ) -> Path:
        frame = pd.DataFrame({
            "time_s": np.arange(probe.size) / sample_rate,
            "probe_counts": probe,
            "conj_counts": conj,
        })
        return self.write_frame(filename, frame)

    def dump_spectrum(self, filename: str, estimate: SpectralEstimate, label: Optional[str] = None) -> Path:
        frame = pd.DataFrame({
            "frequency_hz": estimate.frequencies,
            "power_per_hz": estimate.power,
        })
        frame["averaging_mode"] = label or estimate.averaging_mode
        return self.write_frame(filename, frame)

# tests/test_reports.py
"""Tests for report rendering, atomic writes and run manifests."""

import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.config import Settings
from src.errors import ToolkitError
from src.oracle.spectral import estimate_spectrum
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


# ============================================================================
# RENDERING
# ============================================================================

def test_render_json_is_sorted_and_finite():
    assert render_json({"b": 1, "a": 2}).index('"a"') < render_json({"b": 1, "a": 2}).index('"b"')
    with pytest.raises(ValueError):
        render_json({"x": float("nan")})


def test_flatten_and_text():
    payload = {"a": {"b": 1.23456789, "c": [10, 20]}, "d": "x"}
    assert flatten(payload) == {"a.b": 1.23456789, "a.c.0": 10, "a.c.1": 20, "d": "x"}
    assert render_text(payload) == "a.b: 1.23457\na.c.0: 10\na.c.1: 20\nd: x\n"


def test_render_csv_float_format():
    text = render_csv(pd.DataFrame({"x": [1.0 / 3.0]}))
    assert text == "x\n0.3333333333\n"


# ============================================================================
# EXPORTER
# ============================================================================

def test_atomic_writes_leave_no_temp_files(tmp_path):
    exporter = ReportExporter(str(tmp_path / "out"))
    path = exporter.write_json("report.json", {"value": 1})
    assert path.read_text() == render_json({"value": 1})
    assert [p.name for p in (tmp_path / "out").iterdir()] == ["report.json"]


def test_failed_write_cleans_up(tmp_path):
    exporter = ReportExporter(str(tmp_path))
    with pytest.raises(ValueError):
        exporter.write_json("bad.json", {"value": float("inf")})
    assert list(tmp_path.iterdir()) == []


def test_dump_series_and_spectrum(tmp_path):
    exporter = ReportExporter(str(tmp_path))
    probe = np.arange(8, dtype=float)
    series = pd.read_csv(exporter.dump_series("series.csv", probe, probe[::-1], sample_rate=2.0))
    assert list(series.columns) == ["time_s", "probe_counts", "conj_counts"]
    assert series["time_s"].iloc[-1] == pytest.approx(3.5)

    estimate = estimate_spectrum(np.random.default_rng(0).standard_normal(1024), 128, "log")
    spectrum = pd.read_csv(exporter.dump_spectrum("spectrum.csv", estimate))
    assert list(spectrum.columns) == ["frequency_hz", "power_per_hz", "averaging_mode"]
    assert set(spectrum["averaging_mode"]) == {"log"}


# ============================================================================
# MANIFEST AND SCHEMA
# ============================================================================

def test_reproducible_timestamp(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "86400")
    assert timestamp(True) == "1970-01-02T00:00:00+00:00"
    monkeypatch.delenv("SOURCE_DATE_EPOCH")
    assert timestamp(True) == "1970-01-01T00:00:00+00:00"


def test_manifest_hash_tracks_config():
    settings = Settings()
    first = config_snapshot({"source": {"squeezing_db": 9.0}}, settings)
    second = config_snapshot({"source": {"squeezing_db": 6.0}}, settings)
    a = build_manifest("squeezing", first, None, "t0", "t1")
    b = build_manifest("squeezing", first, None, "t2", "t3")
    c = build_manifest("squeezing", second, None, "t0", "t1")
    assert a.config_hash == b.config_hash
    assert a.config_hash != c.config_hash
    assert "options" not in first
    assert config_snapshot({}, settings, {"mode": "stochastic"})["options"] == {"mode": "stochastic"}


def test_validate_report():
    manifest = build_manifest("budget", config_snapshot({}, Settings()), 3, "t0", "t1")
    payload = {"command": "budget", "manifest": manifest.model_dump(mode="json"), "results": {}, "files": []}
    validate_report(payload)

    with pytest.raises(ToolkitError):
        validate_report({**payload, "command": "plot"})
    with pytest.raises(ToolkitError):
        validate_report({**payload, "extra": True})


# ============================================================================
# RUN TESTS
# ============================================================================

if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])

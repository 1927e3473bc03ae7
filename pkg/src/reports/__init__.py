"""Report serialization: exporter, manifests and the report schema."""

from src.reports.exporter import ReportExporter, render_csv, render_json, render_text, trace_frame
from src.reports.manifest import build_manifest, config_snapshot, timestamp
from src.reports.schema import REPORT_SCHEMA, validate_report

__all__ = [
    "ReportExporter",
    "render_csv",
    "render_json",
    "render_text",
    "trace_frame",
    "build_manifest",
    "config_snapshot",
    "timestamp",
    "REPORT_SCHEMA",
    "validate_report",
]

"""JSON schema shipped for command reports."""

from typing import Any, Dict

import jsonschema

from src.errors import ToolkitError

REPORT_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "qsense command report",
    "type": "object",
    "required": ["command", "manifest", "results"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": ["budget", "squeezing", "ramp", "calibrate", "validate"]},
        "manifest": {
            "type": "object",
            "required": [
                "command",
                "config",
                "config_hash",
                "toolkit_version",
                "seed",
                "started_at",
                "finished_at",
            ],
            "properties": {
                "command": {"type": "string"},
                "config": {"type": "object"},
                "config_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                "toolkit_version": {"type": "string"},
                "seed": {"type": ["integer", "null"]},
                "started_at": {"type": "string"},
                "finished_at": {"type": "string"},
            },
        },
        "results": {"type": "object"},
        "files": {"type": "array", "items": {"type": "string"}},
    },
}


def validate_report(payload: Dict[str, Any]) -> None:
    """Raise ToolkitError if ``payload`` does not match REPORT_SCHEMA."""
    try:
        jsonschema.Draft202012Validator(REPORT_SCHEMA).validate(payload)
    except jsonschema.ValidationError as exc:
        raise ToolkitError(f"Report does not match schema: {exc.message}") from exc

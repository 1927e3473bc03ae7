"""Run manifests embedded in every report."""

import os
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from src import __version__
from src.config import Settings
from src.state import RunManifest
from src.utils import hash_config

# Settings that change numbers in a report
NUMERIC_SETTINGS = (
    "spectrum_path",
    "slope_window_nm",
    "default_conj_transmission",
    "gain_search_upper",
    "log_average_bias_db",
    "confidence",
    "noise_only_samples",
    "oracle_samples",
    "oracle_tolerance_se",
    "validation_trials",
)


def timestamp(reproducible: bool) -> str:
    """ISO-8601 UTC time, fixed by SOURCE_DATE_EPOCH (default 0) when reproducible."""
    if reproducible:
        moment = datetime.fromtimestamp(int(os.environ.get("SOURCE_DATE_EPOCH", "0")), tz=timezone.utc)
    else:
        moment = datetime.now(tz=timezone.utc)
    return moment.isoformat()


def config_snapshot(scenario: Dict[str, Any], settings: Settings, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    snapshot = {
        "scenario": scenario,
        "settings": {name: getattr(settings, name) for name in NUMERIC_SETTINGS},
    }
    if extra:
        snapshot["options"] = extra
    return snapshot


def build_manifest(
    command: str,
    snapshot: Dict[str, Any],
    seed: Optional[int],
    started_at: str,
    finished_at: str,
) -> RunManifest:
    return RunManifest(
        command=command,
        config=snapshot,
        config_hash=hash_config(snapshot),
        toolkit_version=__version__,
        seed=seed,
        started_at=started_at,
        finished_at=finished_at,
    )

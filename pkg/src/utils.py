"""Utility functions for config hashing and domain-model construction."""

import hashlib
import json
from typing import Any, Type, TypeVar

from pydantic import BaseModel, ValidationError

from src.errors import PreconditionError, ToolkitError

ModelT = TypeVar("ModelT", bound=BaseModel)


def hash_string(text: str) -> str:
    """Compute SHA256 hash of a string."""
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def hash_config(snapshot: Any) -> str:
    """Stable SHA256 of a JSON-serializable configuration snapshot."""
    return hash_string(json.dumps(snapshot, sort_keys=True, separators=(",", ":")))


def build_model(model_cls: Type[ModelT], **values: Any) -> ModelT:
    """Construct a domain model, surfacing toolkit errors raised by its validators.

    Pydantic wraps validator exceptions in ``ValidationError``; when the
    underlying cause is a toolkit error that error is re-raised instead so
    callers (and the CLI exit-code mapping) see the domain failure.
    """
    try:
        return model_cls(**values)
    except ValidationError as exc:
        for err in exc.errors():
            original = (err.get("ctx") or {}).get("error")
            if isinstance(original, ToolkitError):
                raise original from exc
        raise PreconditionError(f"Invalid {model_cls.__name__}: {exc}") from exc

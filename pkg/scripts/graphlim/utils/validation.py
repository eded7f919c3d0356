"""
JSON Schema validation of input documents.

Schemas live in ``graphlim/schemas/<name>.schema.json``.
"""

import json
from functools import lru_cache
from pathlib import Path
from typing import Any

import jsonschema

from ..exceptions import ValidationError

SCHEMA_DIR = Path(__file__).parent.parent / "schemas"


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """Load a bundled schema by name (e.g. ``"graph"``)."""
    schema_path = SCHEMA_DIR / f"{name}.schema.json"
    with open(schema_path) as f:
        return json.load(f)


def validate_document(document: Any, schema_name: str) -> None:
    """
    Validate a document against a bundled schema.

    Args:
        document: Parsed JSON/YAML document
        schema_name: Schema name without suffix

    Raises:
        ValidationError: With the jsonschema message and the failing path
    """
    try:
        jsonschema.validate(document, load_schema(schema_name))
    except jsonschema.ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ValidationError(
            f"{schema_name} document invalid at {location}: {e.message}"
        ) from e

"""Utility functions for graphlim."""

from .file_ops import (
    backup_file,
    cleanup_backup,
    dumps_json,
    load_document,
    restore_file,
    save_json,
    save_text,
)
from .formatting import format_float, round_float, to_jsonable
from .rng import make_generator, spawn_generators
from .validation import load_schema, validate_document

__all__ = [
    # File operations
    "backup_file",
    "cleanup_backup",
    "dumps_json",
    "load_document",
    "restore_file",
    "save_json",
    "save_text",
    # Formatting
    "format_float",
    "round_float",
    "to_jsonable",
    # Randomness
    "make_generator",
    "spawn_generators",
    # Validation
    "load_schema",
    "validate_document",
]

"""
File operation utilities for graphlim.

Loads JSON/YAML documents and writes reports with backup/restore so that a
failed write never leaves a truncated report behind.
"""

import json
import shutil
from pathlib import Path
from typing import Any

import yaml

from ..exceptions import FileOperationError, ValidationError
from .formatting import to_jsonable

YAML_SUFFIXES = (".yaml", ".yml")


def load_document(file_path: Path) -> Any:
    """
    Load a JSON or YAML document.

    YAML is selected by the ``.yaml``/``.yml`` suffix, JSON otherwise.

    Args:
        file_path: Path to the document

    Returns:
        Parsed document (dicts, lists and scalars)

    Raises:
        FileOperationError: If the file cannot be read
        ValidationError: If the file is not valid JSON/YAML

    Example:
        >>> doc = load_document(Path("model.yaml"))
        >>> doc["J"]
        [[0, 1], [1, 0]]
    """
    file_path = Path(file_path)
    try:
        text = file_path.read_text()
    except OSError as e:
        raise FileOperationError(f"Cannot read {file_path}: {e}") from e

    try:
        if file_path.suffix.lower() in YAML_SUFFIXES:
            return yaml.safe_load(text)
        return json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ValidationError(f"Invalid document {file_path}: {e}") from e


def backup_file(file_path: Path) -> Path:
    """
    Create backup of file before modification.

    Args:
        file_path: Path to file to backup

    Returns:
        Path to backup file
    """
    backup_path = file_path.with_suffix(file_path.suffix + ".bak")
    shutil.copy2(file_path, backup_path)
    return backup_path


def restore_file(backup_path: Path) -> None:
    """
    Restore file from backup.

    Args:
        backup_path: Path to backup file
    """
    original_path = backup_path.with_suffix("")
    shutil.move(backup_path, original_path)


def cleanup_backup(backup_path: Path) -> None:
    """Remove backup file after successful operation."""
    if backup_path.exists():
        backup_path.unlink()


def save_text(file_path: Path, text: str) -> None:
    """
    Write text to a file, restoring the previous content on failure.

    Args:
        file_path: Destination path (parent directories are created)
        text: Content to write

    Raises:
        FileOperationError: If the write fails
    """
    file_path = Path(file_path)
    backup_path = None
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        if file_path.exists():
            backup_path = backup_file(file_path)
        file_path.write_text(text)
        if backup_path:
            cleanup_backup(backup_path)
    except OSError as e:
        if backup_path and backup_path.exists():
            restore_file(backup_path)
        raise FileOperationError(f"Failed to write {file_path}: {e}") from e


def save_json(file_path: Path, data: Any) -> None:
    """
    Save data as JSON with 12-significant-digit floats.

    Args:
        file_path: Destination path
        data: JSON-serializable data (numpy arrays and scalars allowed)

    Raises:
        FileOperationError: If the write fails
    """
    save_text(file_path, dumps_json(data) + "\n")


def dumps_json(data: Any) -> str:
    """Serialize data to an indented JSON string."""
    return json.dumps(to_jsonable(data), indent=2)

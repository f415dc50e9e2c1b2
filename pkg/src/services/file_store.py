"""JSON files for groups, cochains and reports, validated through the pydantic models"""
import json
import logging
from pathlib import Path
from typing import Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from src.models import CochainFile, ErrorKind, GroupFile, InputError, PatchRunConfig

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def _load(path: Path, model: Type[M]) -> M:
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(ErrorKind.INVALID_INPUT, f"Cannot read {path}: {e}")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputError(
            ErrorKind.MALFORMED_TABLE,
            f"{path} is not valid JSON: {e.msg} at line {e.lineno}, column {e.colno}",
            {"file": str(path), "line": e.lineno, "column": e.colno},
        )
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise InputError(
            ErrorKind.MALFORMED_TABLE,
            f"{path} does not match the {model.__name__} format at '{location}': {first['msg']}",
            {"file": str(path), "location": location},
        )


def load_group_file(path: Path) -> GroupFile:
    """Read {"order": n, "table": [[...]]}"""
    return _load(path, GroupFile)


def load_cochain_file(path: Path) -> CochainFile:
    """Read {"group", "denominator", "exponents"[, "degree"]}"""
    return _load(path, CochainFile)


def load_patch_config(path: Path) -> PatchRunConfig:
    """Read a patch run configuration"""
    return _load(path, PatchRunConfig)


def save_model(model: BaseModel, path: Path) -> Path:
    """Write any file or report model as indented JSON"""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(model.model_dump(mode="json", by_alias=True), indent=2) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {type(model).__name__} to {path}")
    return path


def save_cochain(cochain, path: Path, group_ref: Optional[str] = None) -> Path:
    """
    Write a cochain file.

    Args:
        cochain: Cochain2 or Cochain3
        path: destination
        group_ref: group shorthand or group file path, the group's name by default

    Returns:
        The written path
    """
    model = cochain.to_model()
    if group_ref:
        model.group = group_ref
    return save_model(model, path)

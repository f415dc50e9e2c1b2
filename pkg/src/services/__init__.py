from .file_store import load_group_file, load_cochain_file, load_patch_config, save_model, save_cochain
from .group_resolver import GroupResolver

__all__ = [
    "GroupResolver",
    "load_group_file",
    "load_cochain_file",
    "load_patch_config",
    "save_model",
    "save_cochain",
]

import os
from dataclasses import dataclass
from typing import Optional


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Settings:
    """Run-time limits and defaults, read from the environment"""
    max_group_order: int = 12
    exhaustive_budget: int = 2 ** 24
    sample_size: int = 100_000
    patch_term_budget: int = 2 ** 22
    default_length: int = 6
    default_cut: int = 3
    verify_scans: bool = False
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings from SPT_* environment variables.

        Returns:
            Settings with defaults for every unset variable
        """
        return cls(
            max_group_order=_env_int("SPT_MAX_GROUP_ORDER", cls.max_group_order),
            exhaustive_budget=_env_int("SPT_EXHAUSTIVE_BUDGET", cls.exhaustive_budget),
            sample_size=_env_int("SPT_SAMPLE_SIZE", cls.sample_size),
            patch_term_budget=_env_int("SPT_PATCH_TERM_BUDGET", cls.patch_term_budget),
            default_length=_env_int("SPT_DEFAULT_LENGTH", cls.default_length),
            default_cut=_env_int("SPT_DEFAULT_CUT", cls.default_cut),
            verify_scans=_env_bool("SPT_VERIFY_SCANS", cls.verify_scans),
            log_level=os.getenv("SPT_LOG_LEVEL", cls.log_level).upper(),
        )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Process-wide settings, loaded lazily from the environment"""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def configure(settings: Settings) -> None:
    """Replace the process-wide settings (used by the CLI and tests)"""
    global _settings
    _settings = settings

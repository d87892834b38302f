"""Configuration management using Pydantic Settings.

All settings load from environment variables (or a local ``.env`` file) with
defaults suitable for desk-scale experiments. CLI flags take precedence over
these values.

Classes:
    TrojanSettings: Trigger design parameters (HIA_TROJAN_ prefix)
    EvalSettings: Evaluation and measurement parameters (HIA_EVAL_ prefix)
    AppSettings: Application-level settings (no prefix)

Singleton Instances:
    trojan_settings: Pre-instantiated TrojanSettings
    eval_settings: Pre-instantiated EvalSettings
    app_settings: Pre-instantiated AppSettings

Example:
    >>> from hia_lab.config import trojan_settings
    >>> trojan_settings.max_tries
    64
"""

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class TrojanSettings(BaseSettings):
    """Offline trigger design configuration.

    Attributes:
        target_rate: Occurrence rate M/P used when no explicit count is given.
            Must lie in (0, 1]. Default: 0.03. Env var: HIA_TROJAN_TARGET_RATE
        max_tries: Random indices drawn before giving up. Must be > 0.
            Default: 64. Env var: HIA_TROJAN_MAX_TRIES
        search_seed: Seed of the index generator. Default: 0.
            Env var: HIA_TROJAN_SEARCH_SEED
    """

    model_config = SettingsConfigDict(
        env_prefix="HIA_TROJAN_", env_file=".env", extra="ignore"
    )

    target_rate: float = 0.03
    max_tries: int = 64
    search_seed: int = 0

    @field_validator("target_rate")
    @classmethod
    def validate_target_rate(cls, v: float) -> float:
        """Validate target_rate lies in (0, 1].

        Raises:
            ValueError: If target_rate is outside (0, 1].
        """
        if not 0.0 < v <= 1.0:
            raise ValueError("target_rate must be in (0, 1]")
        return v

    @field_validator("max_tries")
    @classmethod
    def validate_max_tries(cls, v: int) -> int:
        """Validate max_tries is greater than 0.

        Raises:
            ValueError: If max_tries is not greater than 0.
        """
        if v <= 0:
            raise ValueError("max_tries must be greater than 0")
        return v


class EvalSettings(BaseSettings):
    """Evaluation, overhead and experiment configuration.

    Attributes:
        batch_size: Images per trigger-count batch. Default: 200.
            Env var: HIA_EVAL_BATCH_SIZE
        workers: Worker threads for per-image jobs. Default: 1.
            Env var: HIA_EVAL_WORKERS
        change_threshold: Relative-change threshold of changed_fraction.
            Default: 0.95. Env var: HIA_EVAL_CHANGE_THRESHOLD
        overhead_sample: Images timed by the overhead report. Default: 100.
            Env var: HIA_EVAL_OVERHEAD_SAMPLE
        overhead_repeats: Timed repeats per image (minimum kept). Default: 5.
            Env var: HIA_EVAL_OVERHEAD_REPEATS
        motiv_seeds: Seeds run by the motivational experiment. Default: 20.
            Env var: HIA_EVAL_MOTIV_SEEDS
    """

    model_config = SettingsConfigDict(
        env_prefix="HIA_EVAL_", env_file=".env", extra="ignore"
    )

    batch_size: int = 200
    workers: int = 1
    change_threshold: float = 0.95
    overhead_sample: int = 100
    overhead_repeats: int = 5
    motiv_seeds: int = 20

    @field_validator(
        "batch_size", "workers", "overhead_sample", "overhead_repeats", "motiv_seeds"
    )
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Validate counts are greater than 0.

        Raises:
            ValueError: If the value is not greater than 0.
        """
        if v <= 0:
            raise ValueError("value must be greater than 0")
        return v

    @field_validator("change_threshold")
    @classmethod
    def validate_change_threshold(cls, v: float) -> float:
        """Validate change_threshold is not negative.

        Raises:
            ValueError: If change_threshold is negative.
        """
        if v < 0:
            raise ValueError("change_threshold must be >= 0")
        return v


class AppSettings(BaseSettings):
    """Application-level settings.

    Attributes:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
            Default: "INFO". Env var: LOG_LEVEL
    """

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    log_level: str = "INFO"


# Singleton instances, read from the environment at import time.
trojan_settings = TrojanSettings()
eval_settings = EvalSettings()
app_settings = AppSettings()

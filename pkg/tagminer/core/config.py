import warnings
from typing import Annotated, Literal

from pydantic import Field, HttpUrl, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing_extensions import Self

Fraction01 = Annotated[float, Field(gt=0, le=1)]


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="TAGMINER_", env_file=".env", env_ignore_empty=True, extra="ignore"
    )
    PROJECT_NAME: str = "tagminer"
    ENVIRONMENT: Literal["local", "staging", "production"] = "local"
    LOG_LEVEL: str = "INFO"
    SENTRY_DSN: HttpUrl | None = None

    # "two or more matching hashtags"
    MIN_MATCHES: int = Field(default=2, ge=1)
    # "more than 80% of hashtags"; uniqueness of the assigned category needs >= 0.5
    PURITY: float = Field(default=0.8, ge=0.5, le=1)
    # "a support over 20%"
    EXPANSION_MIN_SUPPORT: Fraction01 = 0.20
    MINING_MIN_SUPPORT: Fraction01 = 0.05
    MIN_CONFIDENCE: Fraction01 = 0.6
    INTEREST_MIN_SUPPORT: Fraction01 = 0.1
    SEED_K: int = Field(default=100, ge=1)
    TOP_ACCOUNTS: int = Field(default=10, ge=1)
    RANDOM_SEED: int = 1
    MINER_PARTITIONS: int = Field(default=1, ge=1)
    OUTPUT_DECIMALS: int = Field(default=6, ge=1)

    # National survey proportions the mined category shares are compared with
    SURVEY_SHARES: dict[str, float] = {"weed": 72, "pills": 14, "cough_syrup": 13}

    @model_validator(mode="after")
    def _check_mining_covers_expansion(self) -> Self:
        if self.MINING_MIN_SUPPORT > self.EXPANSION_MIN_SUPPORT:
            message = (
                f"MINING_MIN_SUPPORT ({self.MINING_MIN_SUPPORT}) is above "
                f"EXPANSION_MIN_SUPPORT ({self.EXPANSION_MIN_SUPPORT}), "
                "mined itemsets will miss expansion candidates."
            )
            if self.ENVIRONMENT == "local":
                warnings.warn(message, stacklevel=1)
            else:
                raise ValueError(message)
        return self


settings = Settings()

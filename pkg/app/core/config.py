from typing import Annotated, List, Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, NoDecode, SettingsConfigDict


class Settings(BaseSettings):
    PROJECT_NAME: str = "baumbott"
    TOOL_VERSION: str = "0.3.0"
    DESCRIPTION: str = "Baum-Bott residues of foliations on projective space"

    # Groebner / elimination
    GROEBNER_STEP_BUDGET: int = 100_000  # S-pair reductions per basis
    GROEBNER_TERM_BUDGET: int = 20_000  # terms in any intermediate polynomial
    MULTIPLICITY_SLACK: int = 1  # transformation-law exponent budget = quotient dim + slack

    # Numeric certification of irrational zero clusters
    NUMERIC_CERT_TOL: float = 1e-12
    NEWTON_MAX_STEPS: int = 50

    # Continued-fraction reconstruction of numerically summed residues
    RATIONALIZE_TOL: float = 1e-9
    RATIONALIZE_MAX_DENOMINATOR: int = 10**6

    # Martinelli oracle
    MARTINELLI_TOL: float = 1e-4
    MARTINELLI_MAX_EVALUATIONS: int = 2**24
    MARTINELLI_RADIUS: float = 0.25
    MARTINELLI_MARGIN: float = 1e-8
    MARTINELLI_START_INTERVALS: int = 8
    # `NoDecode` so a plain `0.1,0.2,0.3` env value reaches the validator
    # below instead of being fed to json.loads() first.
    RADIUS_LADDER: Annotated[List[float], NoDecode] = [0.1, 0.2, 0.3]

    # Pipeline
    RESIDUE_WORKERS: int = 1
    CROSSCHECK_ENABLED: bool = True

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Optional[str] = None

    # Either form works:
    #   RADIUS_LADDER=0.1,0.2        <- comma-separated
    #   RADIUS_LADDER=[0.1, 0.2]     <- JSON array
    @field_validator("RADIUS_LADDER", mode="before")
    @classmethod
    def parse_list_field(cls, v):
        if isinstance(v, list):
            return v
        if isinstance(v, str):
            s = v.strip()
            if s.startswith("["):
                import json
                try:
                    parsed = json.loads(s)
                    if isinstance(parsed, list):
                        return parsed
                except json.JSONDecodeError:
                    pass
            return [float(i.strip()) for i in s.split(",") if i.strip()]
        raise ValueError(v)

    @field_validator("LOG_LEVEL")
    @classmethod
    def upper_level(cls, v: str) -> str:
        return v.upper()

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()

import os

from dotenv import load_dotenv

load_dotenv()


class Settings:
    """
    Application configuration settings
    Uses environment variables with fallback defaults
    """

    # Application Configuration
    APP_NAME: str = "ISAC Density Planner"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = os.getenv("DEBUG", "False").lower() == "true"
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()

    # Closed-form evaluation
    QUAD_ORDER: int = int(os.getenv("QUAD_ORDER", "20"))
    EULER_A: float = float(os.getenv("EULER_A", "18.4"))
    EULER_N: int = int(os.getenv("EULER_N", "15"))
    EULER_Q: int = int(os.getenv("EULER_Q", "15"))

    # Monte Carlo
    MC_TRIALS: int = int(os.getenv("MC_TRIALS", "100000"))
    MC_SEED: int = int(os.getenv("MC_SEED", "2024"))
    MC_WORKERS: int = int(os.getenv("MC_WORKERS", "1"))
    MC_CHUNK_SIZE: int = int(os.getenv("MC_CHUNK_SIZE", "2000"))
    # Upper bound for trials requested over HTTP
    API_MAX_TRIALS: int = int(os.getenv("API_MAX_TRIALS", "20000"))

    # Optimizer
    NEWTON_TOL: float = float(os.getenv("NEWTON_TOL", "1e-10"))
    NEWTON_MAX_ITER: int = int(os.getenv("NEWTON_MAX_ITER", "100"))
    LAMBDA_MIN: float = float(os.getenv("LAMBDA_MIN", "1e-8"))  # per m^2, ~5.6 km cells
    LAMBDA_MAX: float = float(os.getenv("LAMBDA_MAX", "1e-2"))  # per m^2, ~5.6 m cells

    # CORS Configuration
    ALLOWED_ORIGINS: list = [
        origin.strip()
        for origin in os.getenv("ALLOWED_ORIGINS", "http://localhost:3000,http://localhost:5173").split(",")
        if origin.strip()
    ]

    @property
    def lambda_bracket(self) -> tuple:
        """Default optimizer search bracket (per m^2)"""
        return (self.LAMBDA_MIN, self.LAMBDA_MAX)


# Create global settings instance
settings = Settings()

# Export for easy import
__all__ = ["settings", "Settings"]

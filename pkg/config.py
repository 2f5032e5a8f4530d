import os
from dotenv import load_dotenv

load_dotenv()

# Settings whose environment value could not be parsed; main() refuses to run while this is non-empty
INVALID_SETTINGS = []


def env_number(name, default, cast=float):
    """Read a numeric setting from the environment.

    Args:
        name: Environment variable name
        default: Value used when the variable is unset, empty or invalid
        cast: ``float`` or ``int``

    Returns:
        The parsed value, or ``default``. Invalid values are recorded in
        INVALID_SETTINGS instead of raising at import time.
    """
    raw = os.environ.get(name)
    if not raw:
        return default
    try:
        return cast(raw)
    except ValueError:
        INVALID_SETTINGS.append(f"{name}={raw!r} is not a valid {cast.__name__}")
        return default


class Config:
    """Toolkit configuration class that loads all settings from environment variables."""

    # Proximity Configuration
    DEFAULT_ALPHA = env_number('FUZZDEP_ALPHA', 0.5)
    DEFAULT_MEASURE = os.environ.get('FUZZDEP_MEASURE') or 'extended'
    DEFAULT_BETA_MIN = env_number('FUZZDEP_BETA_MIN', 0.0)
    DEFAULT_BETA_JOIN = env_number('FUZZDEP_BETA_JOIN', 1.0)
    TOLERANCE = env_number('FUZZDEP_TOLERANCE', 1e-12)

    # Domain used by the `sp` command when no schema is available
    DOMAIN_LOWER = env_number('FUZZDEP_DOMAIN_LOWER', 0.0)
    DOMAIN_UPPER = env_number('FUZZDEP_DOMAIN_UPPER', 100.0)

    # Output Configuration
    OUTPUT = os.environ.get('FUZZDEP_OUTPUT') or 'text'

    # Inference Configuration
    SATURATION_MAX_ATTRIBUTES = env_number('FUZZDEP_SATURATION_MAX_ATTRIBUTES', 6, int)

    # Logging Configuration
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'INFO'
    LOG_FILE = os.environ.get('LOG_FILE') or 'logs/fuzzdep.log'
    LOG_FORMAT = os.environ.get('LOG_FORMAT') or '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    # Performance Configuration
    MAX_WORKERS = env_number('MAX_WORKERS', 4, int)

    @staticmethod
    def invalid_settings():
        """Messages for environment values that could not be parsed."""
        return list(INVALID_SETTINGS)

    @staticmethod
    def ensure_log_dir():
        """Create the directory holding LOG_FILE if it does not exist."""
        log_dir = os.path.dirname(Config.LOG_FILE)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

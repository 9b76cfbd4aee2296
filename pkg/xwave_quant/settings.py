"""
Environment configuration for the X-wave toolkit.

Values come from the process environment, optionally seeded from a `.env`
file in the working directory.
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError

# Load environment variables
load_dotenv()

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class Settings:
    """Process-wide settings read from the environment."""

    def __init__(self):
        self.log_level = os.getenv("XWAVE_LOG_LEVEL", "WARNING").upper()
        self.float_format = os.getenv("XWAVE_OUTPUT_FLOAT_FORMAT", "%.17g")

        threads = os.getenv("XWAVE_THREADS", "1")
        try:
            self.threads = int(threads)
        except ValueError:
            raise ConfigError(f"XWAVE_THREADS must be an integer, got {threads!r}")
        if self.threads < 1:
            raise ConfigError(f"XWAVE_THREADS must be at least 1, got {self.threads}")

    def configure_logging(self, verbose: bool = False) -> None:
        """Configure the root logger once for command-line use."""
        level = logging.INFO if verbose else getattr(logging, self.log_level, logging.WARNING)
        if not logging.getLogger().handlers:
            logging.basicConfig(level=level, format=LOG_FORMAT)
        logging.getLogger("xwave_quant").setLevel(level)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the environment is read again."""
    global _settings
    _settings = None

"""Version information for generalized-turan."""

__version__ = "0.1.0"

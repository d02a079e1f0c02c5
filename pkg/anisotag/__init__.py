"""Software twin of angled smooth-cylinder-surface tags."""

__version__ = "0.1.0"

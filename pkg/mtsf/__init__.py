"""MTSF: Monte-Carlo smoothing of complex graph signals with multi-type spanning forests."""

__version__ = "0.1.0"

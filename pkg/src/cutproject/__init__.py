"""Cut and project sets: generation, patch statistics and linear repetitivity."""

__version__ = "0.1.0"

"""Temporal-information tests and misalignment augmentation for time series classification benchmarks."""

__version__ = "0.1.0"

"""Figure rendering for srssim campaign artifacts."""
from .figures import plot_cdf, plot_tradeoff
from .io import SchemaError, read_samples, read_summary

__all__ = ["plot_cdf", "plot_tradeoff", "read_samples", "read_summary",
           "SchemaError"]

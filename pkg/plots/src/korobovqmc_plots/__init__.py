"""Convergence-figure companion for korobovqmc experiment CSVs."""

from .plot_convergence import REFERENCE_SLOPES, load_rows, plot_convergence

__all__ = ["REFERENCE_SLOPES", "load_rows", "plot_convergence"]

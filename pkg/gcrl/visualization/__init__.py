"""Plots of tracked runs."""

from .plotters import CurvePlotter

__all__ = ["CurvePlotter"]

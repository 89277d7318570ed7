"""Persistence-diagram change-point detection.

Point clouds or scalar image streams are turned into persistence diagrams
(H0/H1, tilted coordinates), binned into fixed-breakpoint persistence
histograms, and monitored online by a four-window scan statistic.
"""

from tdacp._core import (
    Detector,
    EmpiricalDistribution,
    FilteredComplex,
    HistogramModel,
    PersistenceDiagram,
    StepResult,
    bin_diagram,
    build_lower_star,
    build_rips,
    calibrate_threshold,
    chi_statistic,
    compute_persistence,
    gen_grid_stream,
    sample_circles,
    train_breakpoints,
)

__all__ = [
    "Detector",
    "EmpiricalDistribution",
    "FilteredComplex",
    "HistogramModel",
    "PersistenceDiagram",
    "StepResult",
    "bin_diagram",
    "build_lower_star",
    "build_rips",
    "calibrate_threshold",
    "chi_statistic",
    "compute_persistence",
    "gen_grid_stream",
    "sample_circles",
    "train_breakpoints",
]

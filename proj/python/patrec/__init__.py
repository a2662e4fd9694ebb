"""RAPS and Slope One recommenders with offline evaluation."""

from ._core import (
    Error,
    Prediction,
    RapsResult,
    RatingMatrix,
    Report,
    Split,
    adjusted_metrics,
    bound_grid,
    deviation,
    evaluate,
    make_split,
    predict,
    raps_recommend,
    slope_one_recommend,
    sweep,
)

__all__ = [
    "Error",
    "Prediction",
    "RapsResult",
    "RatingMatrix",
    "Report",
    "Split",
    "adjusted_metrics",
    "bound_grid",
    "deviation",
    "evaluate",
    "make_split",
    "predict",
    "raps_recommend",
    "slope_one_recommend",
    "sweep",
]

"""Moments, hyponormality and subnormality of one- and two-variable weighted shifts."""

from .errors import (
    BackwardExtensionError,
    NotCommutingError,
    NotExtendableError,
    PreconditionError,
    ShiftLabError,
    ThresholdError,
)
from .measures import Measure1D, Measure2D, dirac, density, stampfli_completion
from .shifts1d import WeightSeq1D, backward_extend_1d, berger_measure_1d
from .shifts2d import Shift2D, backward_extend_2d, classify, moment_matrix, psd_test, six_point_test

__all__ = [
    "BackwardExtensionError",
    "Measure1D",
    "Measure2D",
    "NotCommutingError",
    "NotExtendableError",
    "PreconditionError",
    "Shift2D",
    "ShiftLabError",
    "ThresholdError",
    "WeightSeq1D",
    "backward_extend_1d",
    "backward_extend_2d",
    "berger_measure_1d",
    "classify",
    "density",
    "dirac",
    "moment_matrix",
    "psd_test",
    "six_point_test",
    "stampfli_completion",
]

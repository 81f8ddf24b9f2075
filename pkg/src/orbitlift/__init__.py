"""Exact lifting of curves through categorical quotients of finite group
representations: Puiseux-type local lifts, global gluing, differentiability
analysis, and eigenvalue lifting for matrix curves."""

from .engine import (
    AllZero,
    LiftBranch,
    LiftEntry,
    LocalLift,
    NonflatUndetermined,
    NotSplittable,
    ReductionStep,
    SliceCluster,
    WitnessReport,
    format_trace,
    linear_traces,
    local_lift,
    nonflat_witness,
    reduce_step,
    slice_split,
    witness_polynomial,
)
from .globallift import (
    ExceptionalSet,
    GlobalLift,
    GlobalPiece,
    Junction,
    NoMatchingPermutation,
    ac_certificate,
    exceptional_points,
    format_global_lift,
    glue_global,
    lipschitz_probe,
    lp_probe,
)

__version__ = "0.1.0"

__all__ = [
    "AllZero",
    "ExceptionalSet",
    "GlobalLift",
    "GlobalPiece",
    "Junction",
    "LiftBranch",
    "LiftEntry",
    "LocalLift",
    "NoMatchingPermutation",
    "NonflatUndetermined",
    "NotSplittable",
    "ReductionStep",
    "SliceCluster",
    "WitnessReport",
    "ac_certificate",
    "exceptional_points",
    "format_global_lift",
    "format_trace",
    "glue_global",
    "linear_traces",
    "lipschitz_probe",
    "local_lift",
    "lp_probe",
    "nonflat_witness",
    "reduce_step",
    "slice_split",
    "witness_polynomial",
]

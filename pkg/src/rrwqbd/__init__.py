"""Reflecting random walks in the quadrant, their QBD approximations,
and certified relative error bounds for time-averaged functionals."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    FACE1,
    FACE2,
    INTERIOR,
    ORIGIN,
    REGIONS,
    JacksonParams,
    MeanDrift,
    RandomWalkSpec,
    StabilityVerdict,
    TransitionLaw,
    check_assumption2,
    check_stability,
    jackson_spec,
    jackson_utilization,
    mean_drift,
    region_of,
    step_distribution,
    validate_spec,
    wedge,
)

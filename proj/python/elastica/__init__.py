"""Semi-implicit elastic flow of closed curves, open curves and networks."""

from ._elastica import (
    BadParams,
    ConfigError,
    DegenerateCurve,
    DegenerateJunction,
    ElasticaError,
    GridMismatch,
    InvalidNetwork,
    Network,
    NotStationary,
    SingularSystem,
    SolverConfig,
    StepFailed,
    TooFewNodes,
    Trajectory,
    UnknownShape,
    classify_limit,
    curvature,
    energy,
    flow_velocity,
    make_shape,
    normal_velocity,
    run,
    shape_names,
    stationarity,
    validate_admissible,
)

__all__ = [name for name in dir() if not name.startswith("_")]

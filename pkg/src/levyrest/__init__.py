"""Simulation and verification toolkit for Lévy walks with rests and
their subordinated stable limits."""

from .errors import HorizonExceeded, ScalingMismatch, UnsupportedCoupling
from .sampling import (
    DiscreteAtoms,
    RngStream,
    TailLaw,
    UniformSphere,
    derive_stream,
    sample_direction,
    sample_one_sided_stable,
    sample_waiting_time,
)
from .walk import (
    EqualRests,
    IndependentRests,
    NoRests,
    Order,
    ScalingSpec,
    Steps,
    TheoremCase,
    Trajectory,
    WalkKind,
    WalkParams,
    build_trajectory,
    count_renewals,
    evaluate,
    generate_steps,
    scaled_marginal,
)
from .limit import (
    JumpSeriesPath,
    LimitKind,
    LimitMarginalRequest,
    LimitRegime,
    inverse_subordinator,
    limit_marginal,
    simulate_jump_series,
    simulate_until,
    subordinator_value,
    tail_intensity,
    wait_first_cone_check,
)
from .stats import hill_estimator, inverse_mean_reference, ks_two_sample, msd

__version__ = "0.1.0"

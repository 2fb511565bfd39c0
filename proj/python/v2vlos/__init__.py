"""Distance-dependent LOS/NLOSv/NLOSb Markov chain model for V2V links."""

from ._core import (
    BatchError,
    ConvergenceError,
    DegenerateError,
    DomainError,
    Error,
    LogDistance,
    Model,
    ParseError,
    PathLossParams,
    RangeError,
    SingularError,
    Stats,
    __version__,
    builtin_model,
    fit_exp_decay,
    fit_logbell,
    fit_poly2,
    free_space_pl,
    fresnel_clearance_radius,
    generate_batch,
    generate_states,
    generate_states_umi,
    mean_dwell,
    pearson,
    state_path_loss,
    state_probabilities,
    stationary_distribution,
    synth_distances,
    transition_matrix,
    umi_los_probability,
)

STATES = ("LOS", "NLOSv", "NLOSb")

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]

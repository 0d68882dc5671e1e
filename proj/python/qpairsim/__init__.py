"""Two-qubit dephasing dynamics: exact microscopic engine vs GKSL effective engine."""

from ._core import (  # noqa: F401
    CouplingTable,
    EnvMoments,
    EvolveMethod,
    GravitationalModel,
    GravitationalSpec,
    LambdaSchedule,
    LindbladModel,
    MicroModel,
    PowerLawFit,
    ReducedCouplings,
    Site,
    ThresholdResult,
    __version__,
    brute_force_reduced_state,
    concurrence,
    dephasing_closed_form,
    dephasing_growth_estimate,
    dephasing_model,
    dephasing_time_dependent,
    env_moments,
    evolve,
    fidelity,
    fit_power_law,
    gamma,
    gravitational_model,
    isolated_concurrence,
    isolated_model,
    lambda_pm,
    lindblad_concurrence_rate,
    micro_shorttime_purity,
    purity,
    random_model,
    reduce_couplings,
    reduced_state,
    rescale_to_sigma,
    threshold_scan,
)

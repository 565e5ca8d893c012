"""Python bindings for the isac_perf C++ core."""

from ._core import (
    ModelError,
    MonteCarloEstimate,
    NumericalError,
    SimConfig,
    WaterfillSolution,
    dl_ecr,
    dl_ecr_asymptote,
    dl_ecr_fdsac,
    dl_outage_prob,
    dl_sr,
    dl_sum_rate,
    dual_mac_power_alloc,
    ed_closed_form_iid,
    exp_correlation,
    fdsac_sr,
    fit_diversity,
    fit_highsnr_slope,
    mac_to_bc_covariance,
    optimal_uplink_profile,
    run_experiment,
    sigma2_effective,
    sr_highsnr,
    ul_ecr,
    ul_ecr_fdsac,
    ul_outage_prob,
    ul_slot_rate,
    ul_sr,
    waterfill,
)

__all__ = [name for name in dir() if not name.startswith("_")]

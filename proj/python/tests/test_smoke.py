import math

import numpy as np
import pytest

import isacperf as ip


def test_waterfill_example():
    sol = ip.waterfill([2.0, 1.0], [1.0, 1.0], 1.0)
    assert sol.allocation == pytest.approx([0.75, 0.25])
    assert sol.water_level == pytest.approx(1.25)


def test_waterfill_rejects_mismatch():
    with pytest.raises(ValueError):
        ip.waterfill([1.0, 1.0], [1.0], 1.0)


def test_dual_mac_example():
    h = np.array([[1, 0], [0, 2]], dtype=complex)
    assert ip.dual_mac_power_alloc(h, 1.0) == pytest.approx([0.125, 0.875], abs=1e-5)
    assert ip.dl_sum_rate(h, 1.0) == pytest.approx(math.log2(5.0625))
    sigma = ip.mac_to_bc_covariance(np.eye(2, dtype=complex), [1.0, 1.0])
    assert np.allclose(sigma, np.eye(2))


def test_closed_forms():
    assert ip.ed_closed_form_iid(2, 2) == pytest.approx(-0.2228, abs=1e-4)
    assert ip.dl_ecr_asymptote(100.0, 2, -0.2228) == pytest.approx(11.065, abs=1e-3)


def test_sensing_rates():
    rt = ip.exp_correlation(2, 0.7)
    assert ip.ul_sr(rt, 2, 4, 10.0) == pytest.approx(2.3137, abs=1e-3)
    assert ip.dl_sr(rt, 2, 4, 2.0, 10.0) < ip.ul_sr(rt, 2, 4, 10.0)
    assert ip.fdsac_sr(rt, 2, 4, 10.0, 1.0) == 0.0


def test_monte_carlo_is_seeded():
    cfg = ip.SimConfig()
    cfg.trials = 4096
    a = ip.dl_ecr(cfg, 10.0)
    b = ip.dl_ecr(cfg, 10.0)
    assert a.mean == b.mean and a.trials == 4096
    assert ip.ul_ecr(cfg, 10.0).mean > 0.0
    assert len(ip.optimal_uplink_profile(cfg)) == cfg.L


def test_run_experiment_csv():
    csv = ip.run_experiment('{"experiment": "sr_vs_snr", "sigma_trials": 256}')
    assert csv.splitlines()[0] == "p_s_db,system,sr,sr_highsnr,highsnr_valid"
    with pytest.raises(ValueError):
        ip.run_experiment('{"experiment": "sr_vs_snr", "nope": 1}')

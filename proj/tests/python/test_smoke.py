import math

import pytest

import fdrsma


def test_special_functions():
    assert fdrsma.lower_regularized_gamma(1.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-12)
    assert fdrsma.erlang_cdf(3, 2.0) == pytest.approx(1 - 5 * math.exp(-2), rel=1e-12)
    assert fdrsma.log_binomial(5, 2) == pytest.approx(math.log(10), rel=1e-12)


def test_config_validation_and_thresholds():
    cfg = fdrsma.SystemConfig()
    fdrsma.validate_config(cfg)
    thr = fdrsma.thresholds_from_rates(cfg)
    assert thr.gamma_c[0] == pytest.approx(2**0.45 - 1, rel=1e-12)
    assert thr.rate_u12 == pytest.approx(0.136)

    cfg.zeta = 1.2
    with pytest.raises(fdrsma.ConfigError):
        fdrsma.validate_config(cfg)


def test_analytic_against_oracle():
    cfg = fdrsma.SystemConfig()
    cfg.p_bs_dbm = cfg.p_u1_dbm = cfg.p_u2_dbm = 20.0
    b = fdrsma.analytic_outages(cfg)
    assert 0 <= b.p_dl[0] <= 1
    assert b.p_ul2 >= b.p_ul1

    links = fdrsma.build_link_stats(cfg)
    assert links.si.omega == pytest.approx(1 / 1.5**2)

    # closed form vs independent quadrature
    oracle = fdrsma.oracle_outage_component(cfg, "ul_11")
    assert b.p11 == pytest.approx(oracle, rel=1e-6, abs=1e-12)


def test_mc_matches_analytic_and_is_deterministic():
    cfg = fdrsma.SystemConfig()
    cfg.p_bs_dbm = cfg.p_u1_dbm = cfg.p_u2_dbm = 20.0
    b = fdrsma.analytic_outages(cfg)

    r1 = fdrsma.mc_outages(cfg, trials=50000, seed=5)
    r2 = fdrsma.mc_outages(cfg, trials=50000, seed=5, workers=2)
    assert r1["p_ul1"]["mean"] == r2["p_ul1"]["mean"]

    gap = abs(r1["p_ul1"]["mean"] - b.p_ul1)
    assert gap <= max(4 * r1["p_ul1"]["stderr"], 2e-3)


def test_perfect_limit_outperforms():
    cfg = fdrsma.SystemConfig()
    cfg.p_bs_dbm = cfg.p_u1_dbm = cfg.p_u2_dbm = 0.0
    worse = fdrsma.analytic_outages(cfg)
    better = fdrsma.analytic_outages(fdrsma.perfect_limit(cfg))
    assert better.p_ul1 < worse.p_ul1
    assert better.p_dl[0] < worse.p_dl[0]


def test_run_recipe(tmp_path):
    out = tmp_path / "fig4.csv"
    written = fdrsma.run_recipe("fig4", str(out))
    assert len(written) == 3
    for path in written:
        text = open(path).read().splitlines()
        assert text[0] == "sweep_var,value,user,metric,mode,estimate,stderr,trials,seed"
        assert len(text) > 100

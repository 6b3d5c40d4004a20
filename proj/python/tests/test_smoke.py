import math

import pytest

import biofilm_fbp as bf


def test_defaults_round_trip():
    cfg = bf.Config()
    assert bf.Config.from_text(cfg.emit()) == cfg
    cfg["wg.mu1"] = "0.7"
    assert float(cfg["wg.mu1"]) == 0.7
    assert cfg != bf.Config()


def test_config_error_is_value_error():
    with pytest.raises(ValueError, match="gamma"):
        bf.Config.from_text("[wg]\ngamma = -1\n")
    with pytest.raises(bf.ConfigError):
        bf.Config().__setitem__("wg.nosuch", "1")


def test_steady_small_grid():
    cfg = bf.Config.from_text("[grid]\nn = 51\n[steady]\ntol = 1e-10\n")
    ss = bf.steady(cfg)
    assert 0.05 < ss["L_star"] < 5.0
    assert len(ss["x"]) == 51
    assert abs(ss["u"][-1]) <= 1e-10
    for j in range(3):
        assert all(0.0 <= c <= ss["Phi"][j] + 1e-10 for c in ss["C"][j])
    # volume fractions sum to one
    for i in range(51):
        assert abs(sum(ss["X"][j][i] for j in range(3)) - 1.0) < 1e-9


def test_simulate_conserves_volume():
    cfg = bf.Config.from_text("[grid]\nn = 41\n[time]\nt_end = 0.5\n")
    tr = bf.simulate(cfg)
    assert not tr["aborted"]
    assert max(tr["mass_err"]) <= 1e-8
    assert tr["t"][-1] == pytest.approx(0.5)
    assert all(abs(y) <= b * (1 + 1e-12) for y, b in zip(tr["ydot"], tr["ydot_bound"]))


def test_pure_growth_raises_solver_error():
    cfg = bf.Config.from_text(
        "[wg]\nb1 = 0\nb2 = 0\n[grid]\nn = 31\n[steady]\nL_lo = 0.1\nL_hi = 2\ntol = 1e-8\n"
    )
    with pytest.raises(bf.SolverError):
        bf.steady(cfg)


def test_run_command_srb_stability(tmp_path):
    cfg = bf.Config.from_text(
        "[model]\ntype = SRB\n[grid]\nn = 11\n[stability]\nomega_count = 4\n"
    )
    r = bf.run("stability", cfg, str(tmp_path / "ok"))
    assert r["exit_code"] == 0
    assert r["verdict"] == "stable"
    cfg["srb.Ksp"] = "1.2"
    r = bf.run("stability", cfg, str(tmp_path / "bad"))
    assert r["verdict"] == "unstable"
    assert math.isnan(r["L_star"])

import math

import pytest

import tdwave


def test_exponent_report_values():
    rep = tdwave.exponent_report(nu=3.0, alpha=0.0, p=2.0)
    assert rep["p_strauss"] == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-12)
    assert rep["p_hwy"] == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-12)
    assert rep["lifespan_exponent"] == pytest.approx(2.0, abs=1e-13)

    # at nu = 1 the Strauss quadratic degenerates: every power blows up
    rep1 = tdwave.exponent_report(nu=1.0, alpha=0.0, p=2.0)
    assert rep1["p_strauss"] == "inf"


def test_gamma_root_matches_reported_exponent():
    root = tdwave.p_hwy(3.0, 0.5)
    assert root == pytest.approx((9.0 + math.sqrt(249.0)) / 14.0, abs=1e-12)
    assert tdwave.gamma_hwy(3.0, 0.5, root) == pytest.approx(0.0, abs=1e-10)


def test_coefficient_primitives():
    flat = tdwave.make_power_law(0.0, 0.0)
    assert flat.a(7.0) == 1.0
    assert tdwave.primitive_A(flat, 7.0) == pytest.approx(7.0, abs=1e-13)

    damped = tdwave.make_power_law(0.0, 1.0, 2.0)
    assert tdwave.primitive_B(damped, 1.0) == pytest.approx(0.5, abs=1e-13)
    # sandwich e^{-B_inf} t <= B_*(t) <= t with B_inf = 1
    t = 10.0
    bs = tdwave.b_star(damped, t)
    assert math.exp(-1.0) * t <= bs <= t


def test_mode_profile_exact_case():
    flat = tdwave.make_power_law(0.0, 0.0)
    prof = tdwave.build_m_star(flat, T_big=70.0, t_end=10.0, n=5001)
    assert prof["residual_sup"] <= 1e-5
    assert prof["kappa_star"] == pytest.approx(1.0, abs=1e-10)
    assert prof["delta_star"] == pytest.approx(1.0, abs=1e-6)


def test_phi_and_cutoff():
    # N = 3: phi = 4 pi sinh(r) / r
    r = 2.0
    assert tdwave.phi(3, r) == pytest.approx(
        4.0 * math.pi * math.sinh(r) / r, rel=1e-10
    )
    flat = tdwave.make_power_law(0.0, 0.0)
    c10 = tdwave.verify_cutoff_bounds(flat, 10.0, 2.0)
    c100 = tdwave.verify_cutoff_bounds(flat, 100.0, 2.0)
    assert not c10["diverging"]
    assert c100["C"] == pytest.approx(c10["C"], rel=1e-6)


def test_simulate_blowup_and_survival():
    flat = tdwave.make_power_law(0.0, 0.0)
    out = tdwave.simulate(flat, N=3, p=2.0, h=1.0 / 32.0, s_max=45.0, eps=3.0)
    assert out["verdict"] == "blowup"
    assert 30.0 < out["T_blowup"] < 45.0
    assert len(out["series"]) >= 10
    h = 1.0 / 32.0
    for row in out["series"]:
        # unit front speed plus the scheme's dispersive front layer; the
        # hard stencil bound (one cell per step) must hold as well
        assert row["support_r"] <= 1.0 + row["s"] / 0.45 + 3.0 * h + 1e-12
        layer = 4.0 * (row["s"] * h * h) ** (1.0 / 3.0)
        assert row["support_r"] <= 1.0 + row["s"] + layer + 3.0 * h + 1e-12

    small = tdwave.simulate(
        flat, N=3, p=3.0, h=1.0 / 32.0, s_max=10.0, eps=0.01
    )
    assert small["verdict"] == "survived"


def test_sweep_and_fit_round_trip():
    flat = tdwave.make_power_law(0.0, 0.0)
    records = tdwave.lifespan_sweep(
        flat,
        N=3,
        p=2.0,
        h=1.0 / 32.0,
        s_max=45.0,
        eps_list=[8.0, 6.0, 4.0, 3.0],
        parallelism=2,
    )
    assert [r["eps"] for r in records] == [8.0, 6.0, 4.0, 3.0]
    ts = [r["T_blowup"] for r in records]
    assert all(r["verdict"] == "blowup" for r in records)
    assert ts == sorted(ts)

    fit = tdwave.fit_lifespan_exponent(
        [(e, 10.0 * e**-2.0) for e in (4.0, 2.0, 1.0, 0.5)],
        nu=3.0,
        alpha=0.0,
        p=2.0,
    )
    assert fit["slope"] == pytest.approx(-2.0, abs=1e-9)
    assert fit["chosen"] == "corollary"


def test_config_errors_surface_as_exceptions():
    flat = tdwave.make_power_law(0.0, 0.0)
    with pytest.raises(tdwave.ConfigError):
        tdwave.simulate(flat, N=3, p=2.0, h=1.0 / 32.0, s_max=5.0, eps=0.0)
    with pytest.raises(tdwave.ConfigError):
        tdwave.lifespan_sweep(
            flat, N=3, p=2.0, h=1.0 / 32.0, s_max=5.0, eps_list=[1.0, 2.0, 3.0, 4.0]
        )

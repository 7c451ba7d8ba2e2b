import numpy as np
import pytest

from hardyheat.constants import ProblemSpec, exponents, lambda_max, mu_from_lambda
from hardyheat.lattice import Field, make_lattice, sample, zero_field
from hardyheat.solver import (
    CutoffFamily,
    VERDICT_CONVERGED,
    VERDICT_ESCAPE,
    blowup_functional,
    gaussian_bump_forcing,
    initial_state,
    iterate,
    rhs_truncated,
    run,
    singularity_profile,
)
from hardyheat.special import smooth_step


@pytest.fixture(scope="module")
def lat():
    return make_lattice(2, 6.0, 32, 0.0, 6.0, 48)


@pytest.fixture(scope="module")
def spec():
    return ProblemSpec(2, 0.5, 0.5 * lambda_max(2, 0.5), 2.0)


def test_cutoff_family_nesting(lat):
    fam = CutoffFamily(lat)
    e1 = fam.values(1)
    e2 = fam.values(2)
    assert np.all(e1 >= 0.0) and np.all(e1 <= 1.0)
    assert np.all(e2 - e1 >= -1e-14)
    r = lat.spatial_radius()
    t = lat.t_axis().reshape(-1, 1, 1)
    core = (r[None] <= 1.0) & (t > 1.0 / 2.0 + 1e-9) & (t < 2.0 - 1e-9)
    assert np.allclose(e1[np.broadcast_to(core, lat.shape)], 1.0)
    outside = np.broadcast_to((t <= 1.0 / 3.0) | (t >= 3.0), lat.shape)
    assert np.all(e1[outside] == 0.0)


def test_rhs_truncated_zero_and_bounds(lat, spec):
    z = zero_field(lat)
    assert np.all(rhs_truncated(z, z, spec, 3).values == 0.0)
    f = gaussian_bump_forcing(lat, 2.0)
    w = Field(lat, np.abs(np.sin(lat.spatial_radius()))[None] * np.ones(lat.shape))
    out = rhs_truncated(w, f, spec, 4)
    assert np.all(out.values >= 0.0)
    assert np.all(np.isfinite(out.values))
    with pytest.raises(ValueError):
        rhs_truncated(w, Field(lat, -f.values), spec, 2)


def test_rhs_truncated_monotone_in_stage(lat, spec):
    rng = np.random.default_rng(2)
    w = Field(lat, np.abs(rng.standard_normal(lat.shape)) * lat.causal_mask()[:, None, None])
    f = gaussian_bump_forcing(lat, 1.0)
    prev = rhs_truncated(w, f, spec, 1).values
    for n in (2, 3, 5, 9):
        cur = rhs_truncated(w, f, spec, n).values
        assert np.min(cur - prev) >= -1e-14
        prev = cur


def test_rhs_truncated_limit(lat, spec):
    # away from the origin and inside the stage core, the saturations open
    # up to the raw right-hand side
    w = sample(lambda t, x, y: (t > 0) * np.exp(-(x * x + y * y)), lat)
    f = gaussian_bump_forcing(lat, 1.0)
    big = rhs_truncated(w, f, spec, 400).values
    r = lat.spatial_radius()
    raw = (
        spec.lam * w.values * r ** (-2 * spec.s)
        + w.values ** spec.p
        + f.values
    )
    t = lat.t_axis().reshape(-1, 1, 1)
    core = np.broadcast_to((r[None] < 2.0) & (t > 0.5) & (t < 3.0), lat.shape)
    err = np.max(np.abs((big - raw))[core]) / np.max(raw[core])
    assert err <= 2e-2


def test_iterates_monotone_and_causal(lat, spec):
    f = gaussian_bump_forcing(lat, 0.5)
    st = initial_state(f, spec)
    assert np.all(st.w.values[~lat.causal_mask()] == 0.0)
    prev = st
    for _ in range(5):
        st = iterate(st, f, spec)
        assert st.monotone
        assert np.min(st.w.values - prev.w.values) >= -1e-12 * max(np.max(st.w.values), 1e-300)
        assert np.all(st.w.values[~lat.causal_mask()] == 0.0)
        prev = st
    assert st.n == 5


def test_run_zero_forcing(lat, spec):
    rep = run(spec, zero_field(lat), max_n=4)
    assert rep.verdict == VERDICT_CONVERGED
    assert rep.final_norm == 0.0
    assert all(m == 0.0 for _, m in rep.m_curve)


def test_run_report_json_round_trip(lat, spec):
    import json

    rep = run(spec, gaussian_bump_forcing(lat, 0.2), max_n=3)
    d = json.loads(rep.to_json())
    assert d["verdict"] == rep.verdict
    assert d["n_final"] == rep.n_final
    assert len(d["m_curve"]) == lat.K


def test_blowup_functional_separable_and_monotone(lat):
    mu, p = 0.25, 1.6
    z = zero_field(lat)
    assert np.all(blowup_functional(z, mu, p) == 0.0)
    bump_t = smooth_step((lat.t_axis() - 0.5) / 0.5) * (
        1.0 - smooth_step((lat.t_axis() - 3.0) / 1.0)
    )
    r = lat.spatial_radius()
    prof = np.where(r < 2.0, r ** (-mu), 0.0)
    w = Field(lat, bump_t[:, None, None] * prof[None])
    m = blowup_functional(w, mu, p)
    on = bump_t > 1e-3
    ratios = m[on] / bump_t[on] ** p
    assert np.max(ratios) / np.min(ratios) == pytest.approx(1.0, rel=1e-10)
    w2 = Field(lat, 2.0 * w.values)
    assert np.all(blowup_functional(w2, mu, p)[on] >= m[on])


def test_blowup_band_escapes(lat):
    lam = 0.5 * lambda_max(2, 0.5)
    b = exponents(ProblemSpec(2, 0.5, lam, 2.0))
    p_blow = 0.5 * (1.0 + b.fujita_F)
    rep = run(ProblemSpec(2, 0.5, lam, p_blow), gaussian_bump_forcing(lat, 1.0), max_n=40)
    assert rep.verdict == VERDICT_ESCAPE
    assert rep.growth_factor >= 10.0
    assert rep.escape_time is not None


def test_above_critical_escapes(lat):
    lam = 0.5 * lambda_max(2, 0.5)
    b = exponents(ProblemSpec(2, 0.5, lam, 2.0))
    rep = run(
        ProblemSpec(2, 0.5, lam, 1.3 * b.p_plus),
        gaussian_bump_forcing(lat, 2.0),
        max_n=40,
    )
    assert rep.verdict == VERDICT_ESCAPE


def test_singularity_profile_power_law_and_flat():
    lat = make_lattice(2, 6.0, 64, 0.0, 6.0, 16)
    mu = 0.31
    r = lat.spatial_radius()
    # envelope kept nearly flat across the fit shells
    w = Field(lat, np.broadcast_to(r ** (-mu) * np.exp(-r * r / 100.0), lat.shape).copy())
    slope, band = singularity_profile(w, (4, 12))
    assert slope == pytest.approx(-mu, abs=0.05)
    flat = sample(lambda t, x, y: np.exp(-(x * x + y * y) / 30.0) + 0.0 * t, lat)
    slope_flat, _ = singularity_profile(flat, (4, 12))
    assert abs(slope_flat) <= 0.05
    with pytest.raises(ValueError):
        singularity_profile(zero_field(lat), (4, 12))


def test_initial_state_is_saturated_forcing_inverse(lat, spec):
    f = gaussian_bump_forcing(lat, 0.7)
    st = initial_state(f, spec)
    from hardyheat.kernels import apply_Js

    direct = apply_Js(rhs_truncated(zero_field(lat), f, spec, 0), spec.s)
    assert np.max(np.abs(st.w.values - np.maximum(direct.values, 0.0))) == 0.0


def test_vanishing_coupling_reduces_to_plain_threshold(lat):
    # with a vanishing coupling the thresholds collapse onto the potential-free
    # exponent and the sub-threshold run still escapes
    lam = 1e-8 * lambda_max(2, 0.5)
    b = exponents(ProblemSpec(2, 0.5, lam, 2.0))
    assert b.fujita_F == pytest.approx(b.fujita_F0, rel=1e-6)
    p_blow = 0.5 * (1.0 + b.fujita_F0)
    rep = run(ProblemSpec(2, 0.5, lam, p_blow), gaussian_bump_forcing(lat, 1.0), max_n=40)
    assert rep.verdict == VERDICT_ESCAPE


def test_singularity_profile_of_converged_iterate():
    # the limit object of the scheme picks up the singular profile near the
    # origin at least as strong as the analytic exponent
    lam = 0.9 * lambda_max(2, 0.5)
    spec = ProblemSpec(2, 0.5, lam, 3.0)
    mu = mu_from_lambda(lam, 2, 0.5)
    lat = make_lattice(2, 6.0, 64, 0.0, 6.0, 48)
    f = gaussian_bump_forcing(lat, 0.3, x_width=1.5)
    rep = run(spec, f, max_n=40)
    # rebuild the final iterate for the fit
    st = initial_state(f, spec)
    for _ in range(rep.n_final):
        st = iterate(st, f, spec)
    slope, _ = singularity_profile(st.w, (int(0.3 * lat.K), int(0.7 * lat.K)))
    assert slope <= -mu + 0.1

import math

import numpy as np
import pytest

from hardyheat.special import (
    GammaPole,
    gamma_abs_neg,
    gamma_fn,
    gauss_legendre_panels,
    geometric_edges,
    kummer_m_neg,
    smooth_step,
    smoothed_power,
)


def test_gamma_closed_forms():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-13)
    # recurrence oracle: Gamma(4.5) = 3.5 * 2.5 * 1.5 * Gamma(1.5)
    oracle = 3.5 * 2.5 * 1.5 * (math.sqrt(math.pi) / 2.0)
    assert gamma_fn(4.5) == pytest.approx(oracle, rel=1e-13)
    assert gamma_fn(4.5) == pytest.approx(11.6317283965674, rel=1e-12)


@pytest.mark.parametrize("x", [0.13, 0.5, 1.0, 2.75, 7.3, 15.2, -0.4, -2.3, -6.7])
def test_gamma_matches_libm(x):
    assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -17.0])
def test_gamma_pole(x):
    with pytest.raises(GammaPole):
        gamma_fn(x)


def test_gamma_abs_neg():
    assert gamma_abs_neg(0.5) == pytest.approx(abs(math.gamma(-0.5)), rel=1e-12)
    assert gamma_abs_neg(0.3) == pytest.approx(abs(math.gamma(-0.3)), rel=1e-12)
    with pytest.raises(ValueError):
        gamma_abs_neg(1.0)


def _kummer_brute(a, b, z, terms=4000):
    # positive-term series via the Kummer transform
    acc = 0.0
    term = 1.0
    for k in range(terms):
        acc += term
        term *= (b - a + k) * z / ((b + k) * (k + 1.0))
        if term < 1e-20 * acc:
            break
    return math.exp(-z) * acc


@pytest.mark.parametrize("a,b", [(0.07, 1.0), (0.25, 1.5), (0.45, 1.0)])
@pytest.mark.parametrize("z", [0.0, 0.5, 7.0, 39.0, 41.0, 300.0, 5e4])
def test_kummer_branches_agree(a, b, z):
    got = float(kummer_m_neg(a, b, z))
    if z <= 40.0:
        want = _kummer_brute(a, b, z)
        assert got == pytest.approx(want, rel=1e-12)
    else:
        # leading asymptotics; the implementation must sit within the first
        # correction of it
        lead = math.gamma(b) / math.gamma(b - a) * z ** (-a)
        assert got == pytest.approx(lead, rel=5.0 * a * abs(a - b + 1.0) / z + 1e-12)
    assert got > 0.0


def _smoothed_power_brute(r0, tau, dim, mu):
    rr = np.linspace(1e-6, r0 + 40 * math.sqrt(tau), 30000)
    dr = rr[1] - rr[0]
    if dim == 2:
        th = np.linspace(0, 2 * np.pi, 512, endpoint=False)
        d2 = rr[:, None] ** 2 - 2 * rr[:, None] * r0 * np.cos(th)[None, :] + r0 * r0
        val = np.sum(rr[:, None] ** (1 - mu) * np.exp(-d2 / (4 * tau)))
        return val * dr * (th[1] - th[0]) / (4 * np.pi * tau)
    th = np.linspace(0, np.pi, 1024)
    d2 = rr[:, None] ** 2 - 2 * rr[:, None] * r0 * np.cos(th)[None, :] + r0 * r0
    val = np.sum(rr[:, None] ** (2 - mu) * np.sin(th)[None, :] * np.exp(-d2 / (4 * tau)))
    return val * dr * (th[1] - th[0]) * 2 * np.pi / (4 * np.pi * tau) ** 1.5


@pytest.mark.parametrize("dim,mu", [(2, 0.14), (2, 0.45), (3, 0.3)])
def test_smoothed_power_vs_quadrature(dim, mu):
    for r0, tau in ((0.6, 0.05), (1.3, 0.8), (2.5, 4.0)):
        got = float(smoothed_power(r0, tau, dim, mu))
        want = _smoothed_power_brute(r0, tau, dim, mu)
        assert got == pytest.approx(want, rel=2e-4)


def test_smoothed_power_limits():
    # tau -> 0 recovers the bare power; large tau decays like tau^(-mu/2)
    assert float(smoothed_power(1.7, 1e-12, 2, 0.3)) == pytest.approx(
        1.7 ** -0.3, rel=1e-9
    )
    big = float(smoothed_power(0.5, 1e8, 2, 0.3))
    bigger = float(smoothed_power(0.5, 4e8, 2, 0.3))
    assert bigger / big == pytest.approx(4.0 ** -0.15, rel=1e-4)


def test_smooth_step_shape():
    assert smooth_step(-1.0) == 0.0
    assert smooth_step(0.0) == 0.0
    assert smooth_step(1.0) == 1.0
    assert smooth_step(2.0) == 1.0
    u = np.linspace(0, 1, 101)
    vals = smooth_step(u)
    assert np.all(np.diff(vals) >= 0)
    assert smooth_step(0.5) == pytest.approx(0.5)


def test_gauss_panels_integrate_power():
    # integral of x^(-1/2) over [1e-6, 4] has a closed form
    nodes, wts = gauss_legendre_panels(geometric_edges(1e-6, 4.0, 1.4), 8)
    got = float(np.sum(wts * nodes ** -0.5))
    want = 2.0 * (2.0 - 1e-3)
    assert got == pytest.approx(want, rel=1e-10)

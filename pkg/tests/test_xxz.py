import warnings
from math import log, pi

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import expit

from cicqpt.cic import cic_backward, cic_forward
from cicqpt.core import decompose
from cicqpt.xxz import (
    E_ISOTROPIC,
    cic_xxz,
    correlators,
    derivative,
    ground_state_energy,
    spectral_parameter,
    xxz_bloch_state,
    xxz_pair_state,
    xxz_scan,
)


def series_energy(delta):
    """Gapped antiferromagnet, Delta = cosh(g): e = Delta/4 - sinh(g) (1/2 + 2 sum_n 1/(e^{2 n g} + 1))."""
    g = np.arccosh(delta)
    n = np.arange(1, int(25 / g) + 2)  # terms decay like e^{-2 n g}
    return delta / 4 - np.sinh(g) * (0.5 + 2 * np.sum(expit(-2 * n * g)))


def real_axis_energy(delta):
    """Gapless branch, Delta = cos(mu): e = Delta/4 - sin(mu) int_0^inf sinh((pi-mu)x) / (sinh(pi x) cosh(mu x)) dx."""
    mu = np.arccos(delta)

    def f(x):
        if x == 0:
            return (pi - mu) / pi
        return 2 * np.exp(-2 * mu * x) * -np.expm1(-2 * (pi - mu) * x) / (-np.expm1(-2 * pi * x) * (1 + np.exp(-2 * mu * x)))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val = quad(f, 0, np.inf, epsabs=1e-15, epsrel=1e-14, limit=1000)[0]
    return delta / 4 - np.sin(mu) * val


def test_isotropic_energy():
    assert abs(ground_state_energy(1.0) - (0.25 - log(2))) < 1e-12
    assert E_ISOTROPIC == 0.25 - log(2)


def test_free_fermion_energy():
    assert abs(ground_state_energy(0.0) + 1 / pi) < 1e-12


def test_stochastic_point_energy():
    assert abs(ground_state_energy(0.5) + 3 / 8) < 1e-12


@pytest.mark.parametrize("delta", [-0.99, -0.9, -0.5, -0.1, 0.3, 0.7, 0.95, 0.999])
def test_gapless_branch_matches_real_axis_integral(delta):
    assert abs(ground_state_energy(delta) - real_axis_energy(delta)) < 1e-12


@pytest.mark.parametrize("delta", [1.001, 1.1, 1.5, 2.0, 3.0, 10.0, 1000.0])
def test_gapped_branch_matches_series(delta):
    assert abs(ground_state_energy(delta) - series_energy(delta)) < 1e-10 * max(1, abs(delta))


@pytest.mark.parametrize("delta", [-1.0, -1.5, -3.0, -100.0])
def test_ferromagnetic_branch(delta):
    assert ground_state_energy(delta) == delta / 4


def test_continuity_at_critical_points():
    assert abs(ground_state_energy(-1 + 1e-7) - ground_state_energy(-1.0)) < 1e-6
    assert abs(ground_state_energy(1 - 1e-7) - E_ISOTROPIC) < 1e-6
    assert abs(ground_state_energy(1 + 1e-7) - E_ISOTROPIC) < 1e-6


def test_energy_is_monotone_decreasing_above_minus_one():
    deltas = np.linspace(-0.99, 3, 60)
    e = np.array([ground_state_energy(x) for x in deltas])
    # zz = 4 de/dDelta is negative (antiferromagnetic) in the gapless and gapped branches
    assert np.all(np.diff(e) < 0)


def test_spectral_parameter():
    assert spectral_parameter(0.0).xi == pytest.approx(0.5)
    assert spectral_parameter(np.cosh(pi * 0.3)).phi == pytest.approx(0.3)
    with pytest.raises(ValueError):
        spectral_parameter(1.0)


def test_non_finite_delta_rejected():
    with pytest.raises(ValueError):
        ground_state_energy(float("nan"))


def test_derivative_stencils():
    for side in (None, "left", "right"):
        assert derivative(np.sin, 0.3, h=1e-3, side=side) == pytest.approx(np.cos(0.3), abs=1e-9)
    with pytest.raises(ValueError):
        derivative(np.sin, 0.0, side="up")


def test_correlators_free_fermions():
    c = correlators(0.0)
    assert c.xx == pytest.approx(-2 / pi, abs=1e-9)
    assert c.zz == pytest.approx(-4 / pi**2, abs=1e-8)


def test_correlators_stochastic_point():
    c = correlators(0.5)
    assert c.zz == pytest.approx(-0.5, abs=1e-8)
    assert c.xx == pytest.approx(-5 / 8, abs=1e-8)


def test_correlators_ferromagnet():
    c = correlators(-2.0)
    assert c.zz == pytest.approx(1.0, abs=1e-10)
    assert c.xx == pytest.approx(0.0, abs=1e-10)


def test_isotropic_point_from_the_left():
    c = correlators(1.0, side="left")
    expected = 4 * E_ISOTROPIC / 3
    assert c.xx == pytest.approx(expected, abs=1e-6)
    assert c.zz == pytest.approx(expected, abs=1e-6)
    assert abs(abs(c.xx) - abs(c.zz)) < 1e-5


def test_critical_points_need_a_side():
    with pytest.raises(ValueError):
        correlators(1.0)
    with pytest.raises(ValueError):
        correlators(-1.0)


def test_jump_at_ferromagnetic_boundary():
    left = correlators(-1.0, side="left")
    right = correlators(-1.0 + 1e-3)
    assert left.zz == pytest.approx(1.0)
    # the gapless side approaches zz -> 0, xx -> -1/2
    assert abs(right.zz) < 0.05 and right.xx == pytest.approx(-0.5, abs=0.01)


@pytest.mark.parametrize("delta", [-0.6, 0.2, 1.7])
def test_hellmann_feynman_against_oracle_derivative(delta):
    h = 1e-4
    if delta > 1:
        oracle = series_energy
    else:
        oracle = real_axis_energy
    slope = (8 * (oracle(delta + h) - oracle(delta - h)) - (oracle(delta + 2 * h) - oracle(delta - 2 * h))) / (12 * h)
    assert correlators(delta).zz == pytest.approx(4 * slope, abs=1e-7)


def test_cic_branches():
    assert cic_xxz(-2.0) == pytest.approx(1.0, abs=1e-10)
    assert cic_xxz(0.0) == pytest.approx(2 / pi, abs=1e-9)
    assert cic_xxz(0.0, with_branch=True)[1] == "xx"
    assert cic_xxz(2.0, with_branch=True)[1] == "zz"
    assert cic_xxz(1.0, side="left") == pytest.approx(-4 * E_ISOTROPIC / 3, abs=1e-6)


def test_bloch_state_is_centered_and_physical():
    rep = xxz_bloch_state(0.0)
    assert np.all(rep.a == 0) and np.all(rep.b == 0)
    assert np.allclose(rep.T, np.diag([-2 / pi, -2 / pi, correlators(0.0).zz]))
    rho = xxz_pair_state(0.0)
    assert np.linalg.eigvalsh(rho).min() > -1e-12
    assert np.allclose(decompose(rho).T, rep.T)


@pytest.mark.parametrize("delta", [0.0, 1.0, 2.0])
def test_cic_matches_general_optimizer(delta):
    side = "left" if delta == 1.0 else None
    rho = xxz_pair_state(delta, side=side)
    assert cic_forward(rho).value == pytest.approx(cic_xxz(delta, side=side), abs=1e-5)
    assert cic_backward(rho).value == pytest.approx(cic_forward(rho).value, abs=1e-6)


def test_small_scan_columns():
    res = xxz_scan(-1.1, -0.9, 0.01)
    assert list(res.columns()) == ["delta", "eg", "xx", "zz", "cic", "susceptibility"]
    assert res.value[res.parameter == -1.0][0] == pytest.approx(1.0)
    assert [cp.label for cp in res.critical_points] == ["discontinuity"]

"""Block construction, the rate matrix and certified level sums."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rrwqbd.model import JacksonParams, jackson_spec
from rrwqbd import qbd

from conftest import SYMMETRIC

rates = st.floats(0.05, 1.0, allow_nan=False)
routing = st.floats(0.05, 0.95, allow_nan=False)


@st.composite
def stable_jackson(draw):
    # Build instances stable by construction: pick both utilizations
    # below one and solve the linear system for the arrival rates.
    from hypothesis import assume
    sigma1, sigma2 = draw(rates), draw(rates)
    q1, q2 = draw(routing), draw(routing)
    rho1 = draw(st.floats(0.1, 0.9))
    rho2 = draw(st.floats(0.1, 0.9))
    scale = 1.0 - q1 * q2
    a, b = rho1 * sigma1 * scale, rho2 * sigma2 * scale
    lambda1 = (a - q2 * b) / scale
    lambda2 = (b - q1 * a) / scale
    assume(lambda1 > 1e-6 and lambda2 > 1e-6)
    return jackson_spec(JacksonParams(
        lambda1=lambda1, lambda2=lambda2,
        sigma1=sigma1, sigma2=sigma2, q1=q1, q2=q2))


@pytest.fixture(scope="module")
def spec():
    return jackson_spec(JacksonParams(**SYMMETRIC))


@pytest.fixture(scope="module")
def cert(spec):
    from rrwqbd.certificate import build_certificate
    return build_certificate(spec)


@pytest.fixture(scope="module")
def sol10(spec):
    return qbd.solve(spec, 10)


# ---------------------------------------------------------------------------
# blocks


def test_blocks_of_the_symmetric_instance_at_cap_two(spec):
    bl = qbd.build_blocks(spec, 2)
    np.testing.assert_allclose(bl.A_plus, [[0.1, 0.0, 0.0],
                                           [0.2, 0.1, 0.0],
                                           [0.0, 0.2, 0.1]], atol=1e-15)
    np.testing.assert_allclose(bl.A_minus, [[0.4, 0.4, 0.0],
                                            [0.0, 0.2, 0.2],
                                            [0.0, 0.0, 0.4]], atol=1e-15)
    np.testing.assert_allclose(bl.A_zero, [[0.0, 0.1, 0.0],
                                           [0.2, 0.0, 0.1],
                                           [0.0, 0.2, 0.1]], atol=1e-15)
    np.testing.assert_allclose(bl.B_zero, [[0.8, 0.1, 0.0],
                                           [0.4, 0.0, 0.1],
                                           [0.0, 0.4, 0.1]], atol=1e-15)
    np.testing.assert_allclose(bl.B_plus, [[0.1, 0.0, 0.0],
                                           [0.4, 0.1, 0.0],
                                           [0.0, 0.4, 0.1]], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 5, 17])
def test_block_rows_are_stochastic(spec, n):
    bl = qbd.build_blocks(spec, n)
    inner = bl.A_minus + bl.A_zero + bl.A_plus
    boundary = bl.B_zero + bl.B_plus
    np.testing.assert_allclose(inner.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(boundary.sum(axis=1), 1.0, atol=1e-12)


@given(stable_jackson(), st.integers(1, 8))
@settings(max_examples=25, deadline=None)
def test_block_rows_are_stochastic_for_random_instances(spec_rand, n):
    bl = qbd.build_blocks(spec_rand, n)
    np.testing.assert_allclose(
        (bl.A_minus + bl.A_zero + bl.A_plus).sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(
        (bl.B_zero + bl.B_plus).sum(axis=1), 1.0, atol=1e-12)


def test_blocks_reject_nonpositive_cap(spec):
    with pytest.raises(ValueError):
        qbd.build_blocks(spec, 0)


# ---------------------------------------------------------------------------
# the rate matrix


def test_rate_matrix_solves_its_equation(spec, sol10):
    R = sol10.rate.R
    bl = sol10.blocks
    residual = np.max(np.abs(R - (bl.A_plus + R @ bl.A_zero
                                  + R @ R @ bl.A_minus)))
    assert residual < 1e-12
    assert sol10.rate.residual < 1e-12
    assert np.min(R) >= 0.0
    assert sol10.rate.spectral_radius < 1.0
    assert sol10.rate.spectral_radius == pytest.approx(
        0.448464, abs=1e-5)


def test_rate_matrix_two_routes_agree(spec):
    bl = qbd.build_blocks(spec, 6)
    log_red = qbd.solve_R(bl)
    assert log_red.method == "logarithmic_reduction"
    fixed = qbd._solve_R_fixed_point(bl, 1e-13)[0]
    assert np.max(np.abs(log_red.R - fixed)) < 1e-11


@given(stable_jackson())
@settings(max_examples=15, deadline=None)
def test_rate_matrix_on_random_stable_instances(spec_rand):
    sol = qbd.solve(spec_rand, 4)
    assert sol.rate.residual < 1e-12
    assert sol.rate.spectral_radius < 1.0
    assert sol.normalization_residual < 1e-12


# ---------------------------------------------------------------------------
# stationary solution


def test_stationary_balance(sol10):
    assert qbd.balance_residual(sol10, levels=50) < 1e-10
    assert sol10.boundary_residual < 1e-12


def test_stationary_mass_accounting(sol10):
    mass = sum(float(sol10.level(k).sum()) for k in range(31))
    assert mass + qbd.level_tail_mass(sol10, 30) == pytest.approx(
        1.0, abs=1e-12)


def test_pi_at_matches_levels(sol10):
    assert qbd.pi_at(sol10, 3, 7) == sol10.level(3)[7]
    assert qbd.pi_at(sol10, 0, 0) == sol10.pi0[0]
    with pytest.raises(ValueError):
        qbd.pi_at(sol10, -1, 0)
    # phases above the cap carry no mass in the truncated chain
    assert qbd.pi_at(sol10, 0, 11) == 0.0


def test_levels_are_nonnegative(sol10):
    grid = sol10.level_matrix(60)
    assert np.min(grid) >= 0.0
    assert grid.shape == (61, 11)


def test_truncated_chain_matches_dense_oracle(spec):
    from rrwqbd.oracle import level_clamped_stationary
    for n in (5, 10):
        sol = qbd.solve(spec, n)
        pi2d, residual = level_clamped_stationary(spec, 150, n)
        assert residual < 1e-12
        tv = 0.5 * float(np.sum(np.abs(sol.level_matrix(150) - pi2d)))
        assert tv < 1e-8, (n, tv)


# ---------------------------------------------------------------------------
# certified level sums


def test_phase_weighted_sum_routes_agree(sol10, cert):
    u = np.ones(11)
    t1 = cert.theta.theta1
    envelope = (cert.b_tilde, cert.theta_tilde.theta1,
                cert.theta_tilde.theta2)
    closed = qbd.phase_weighted_sum(sol10, u, t1, method="closed_form")
    tail = qbd.phase_weighted_sum(sol10, u, t1, envelope=envelope,
                                  method="certified_tail")
    assert closed.method == "series_closed_form"
    assert closed.remainder_bound == 0.0
    assert tail.method == "truncated_with_certified_tail"
    assert tail.remainder_bound >= 0.0
    # the certified route brackets the exact value from above
    assert closed.value <= tail.value + 1e-12
    assert tail.value - closed.value <= 2.0 * tail.remainder_bound + 1e-11


def test_phase_weighted_sum_matches_brute_force(sol10, cert):
    u = np.linspace(1.0, 0.5, 11)
    t1 = 0.1
    brute = float(sol10.pi0 @ u)
    for k in range(1, 400):
        brute += math.exp(k * t1) * float(sol10.level(k) @ u)
    closed = qbd.phase_weighted_sum(sol10, u, t1, method="closed_form")
    assert closed.value == pytest.approx(brute, rel=1e-12)


def test_phase_weighted_sum_validates_inputs(sol10):
    with pytest.raises(ValueError, match="shape"):
        qbd.phase_weighted_sum(sol10, np.ones(4), 0.1)
    with pytest.raises(ValueError, match="envelope"):
        qbd.phase_weighted_sum(sol10, np.ones(11), 0.1,
                               method="certified_tail")
    with pytest.raises(ValueError, match="unknown method"):
        qbd.phase_weighted_sum(sol10, np.ones(11), 0.1, method="magic")
    with pytest.raises(ValueError, match="must exceed"):
        qbd.phase_weighted_sum(sol10, np.ones(11), 0.7,
                               envelope=(1.0, 0.6, 0.6),
                               method="certified_tail")


def test_closed_form_refuses_divergent_growth(sol10):
    # e^1.2 sp(R) is far above 1: the resolvent series diverges and the
    # guard must hold the line.
    with pytest.raises(ValueError, match="closed form not available"):
        qbd.phase_weighted_sum(sol10, np.ones(11), 1.2,
                               method="closed_form")


def test_top_layer_sum_brackets_brute_force(sol10, cert):
    t1 = cert.theta.theta1
    out = qbd.top_layer_weighted_sum(sol10, t1, cert)
    brute = sum(math.exp(k * t1) * qbd.pi_at(sol10, k, 10)
                for k in range(400))
    assert brute <= out.value + 1e-12
    assert out.value - brute <= 2.0 * out.remainder_bound + 1e-11

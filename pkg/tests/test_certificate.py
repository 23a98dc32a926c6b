"""Tilt search, drift constants and the certified Lyapunov inequality."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from rrwqbd.certificate import (
    Tilt,
    build_certificate,
    certificate_constants,
    check_drift_inequality,
    corrupt_certificate,
    feasibility_margin,
    find_theta,
    find_theta_tilde,
    gamma,
    gamma_all,
    in_feasible_region,
    lyapunov_v,
)
from rrwqbd.model import (
    FACE1,
    FACE2,
    INTERIOR,
    ORIGIN,
    REGIONS,
    JacksonParams,
    jackson_spec,
)
from rrwqbd.modelfile import load_model

import os
from conftest import ASYM_A, MODELS, SYMMETRIC


@pytest.fixture(scope="module")
def spec():
    return jackson_spec(JacksonParams(**SYMMETRIC))


@pytest.fixture(scope="module")
def cert(spec):
    return build_certificate(spec)


# ---------------------------------------------------------------------------
# the moment transform


def test_gamma_at_zero_tilt_is_one(spec):
    for region in REGIONS:
        assert gamma(spec, region, (0.0, 0.0)) == pytest.approx(
            1.0, abs=1e-15)


def test_gamma_interior_frozen_value(spec):
    # 0.2 e^{0.1-0.1} twice cancels nothing here: the six interior terms
    # at tilt (0.2, 0.2) evaluated once by hand and pinned.
    assert gamma(spec, INTERIOR, (0.2, 0.2)) == pytest.approx(
        0.9717728528632267, rel=1e-13)


def test_gamma_all_covers_every_region(spec):
    gs = gamma_all(spec, (0.2, 0.2))
    assert set(gs) == set(REGIONS)
    assert gs[ORIGIN] > 1.0  # origin law only moves up or stays


@given(st.floats(0.01, 1.2), st.floats(0.01, 1.2),
       st.floats(0.01, 1.2), st.floats(0.01, 1.2))
@settings(max_examples=40)
def test_gamma_is_multiplicatively_midpoint_convex(spec, a1, a2, b1, b2):
    # log gamma is convex in the tilt, being a log-sum-exp of linear
    # functions; the midpoint form avoids needing derivatives.
    for region in (FACE1, FACE2, INTERIOR):
        ga = gamma(spec, region, (a1, a2))
        gb = gamma(spec, region, (b1, b2))
        mid = gamma(spec, region, ((a1 + b1) / 2, (a2 + b2) / 2))
        assert mid * mid <= ga * gb * (1.0 + 1e-12)


# ---------------------------------------------------------------------------
# tilt search


def test_found_tilt_is_feasible_with_margin(spec):
    theta = find_theta(spec)
    assert in_feasible_region(spec, theta)
    assert feasibility_margin(spec, theta.as_tuple()) > 0.03
    gs = gamma_all(spec, theta.as_tuple())
    for region in (FACE1, FACE2, INTERIOR):
        assert gs[region] < 1.0


def test_found_tilt_location_on_symmetric_instance(spec):
    theta = find_theta(spec)
    assert theta.theta1 == pytest.approx(0.34657209318762144, rel=1e-6)
    assert theta.theta2 == pytest.approx(0.34657209315393017, rel=1e-6)


def test_no_feasible_tilt_on_unstable_instance():
    unstable = jackson_spec(JacksonParams(
        lambda1=0.45, lambda2=0.05, sigma1=0.25, sigma2=0.25,
        q1=0.5, q2=0.5))
    with pytest.raises(ValueError, match="no feasible tilt"):
        find_theta(unstable)


def test_theta_tilde_moves_diagonally(spec):
    theta = find_theta(spec)
    tilde = find_theta_tilde(spec, theta)
    d1 = tilde.theta1 - theta.theta1
    d2 = tilde.theta2 - theta.theta2
    assert d1 == pytest.approx(d2, rel=1e-12)
    assert d1 > 0.0
    assert in_feasible_region(spec, tilde)


def test_theta_tilde_step_scales_with_kappa(spec):
    theta = find_theta(spec)
    d_half = find_theta_tilde(spec, theta, kappa=0.45).theta1 - theta.theta1
    d_default = find_theta_tilde(spec, theta, kappa=0.9).theta1 \
        - theta.theta1
    assert d_half == pytest.approx(0.5 * d_default, rel=1e-6)


def test_theta_tilde_rejects_bad_kappa(spec):
    theta = find_theta(spec)
    with pytest.raises(ValueError, match="kappa"):
        find_theta_tilde(spec, theta, kappa=1.0)


def test_theta_tilde_rejects_infeasible_base(spec):
    with pytest.raises(ValueError, match="not feasible"):
        find_theta_tilde(spec, Tilt(3.0, 3.0))


# ---------------------------------------------------------------------------
# drift constants


def test_constants_at_fixed_tilt(spec):
    c, b = certificate_constants(spec, Tilt(0.2, 0.2))
    assert c == pytest.approx(0.02822714713677328, rel=1e-13)
    gs = gamma_all(spec, (0.2, 0.2))
    assert b == pytest.approx(1.0 + (gs[ORIGIN] - 1.0) / c, rel=1e-13)


def test_certificate_frozen_values(cert):
    assert cert.c == pytest.approx(0.03431457503188684, rel=1e-6)
    assert cert.b == pytest.approx(3.4142012235771135, rel=1e-6)
    assert cert.theta_tilde.theta1 == pytest.approx(
        0.6584896717119724, rel=1e-6)
    assert cert.c_tilde == pytest.approx(0.006572510513785712, rel=1e-6)
    assert cert.b_tilde == pytest.approx(29.356664213148708, rel=1e-6)
    assert cert.debug_scale_c == 1.0


def test_certificate_frozen_values_asymmetric_at_pinned_tilt():
    # The pinned tilt keeps both components above log 2, which the
    # coordinate-cap functionals need; see test_bounds.
    cert = build_certificate(jackson_spec(JacksonParams(**ASYM_A)),
                             theta=Tilt(0.7, 0.7))
    assert cert.c == pytest.approx(0.03888851268602811, rel=1e-6)
    assert cert.b == pytest.approx(6.213635788311844, rel=1e-6)
    assert cert.c_tilde == pytest.approx(0.004808690550595407, rel=1e-6)
    assert cert.b_tilde == pytest.approx(57.4916710025865, rel=1e-6)


def test_certificate_records_transforms_at_both_tilts(cert):
    assert set(cert.gammas_at_theta) == set(REGIONS)
    for region in (FACE1, FACE2, INTERIOR):
        assert cert.gammas_at_theta[region] < 1.0
        assert cert.gammas_at_theta_tilde[region] < 1.0
        # the larger tilt gives up drift margin
        assert cert.gammas_at_theta_tilde[region] \
            > cert.gammas_at_theta[region]


def test_to_dict_round_trips_floats(cert):
    d = cert.to_dict()
    assert d["c"] == cert.c
    assert d["theta"] == [cert.theta.theta1, cert.theta.theta2]
    assert d["debug_scale_c"] == 1.0


# ---------------------------------------------------------------------------
# the inequality itself


def test_drift_inequality_on_symmetric_instance(spec, cert):
    for variant in ("base", "tilde"):
        report = check_drift_inequality(spec, cert, window=60,
                                        variant=variant)
        assert report.passed, report
        assert report.max_rel_violation <= 1e-10


def test_drift_inequality_on_general_model():
    spec = load_model(os.path.join(MODELS, "general_example.toml"))
    cert = build_certificate(spec)
    for variant in ("base", "tilde"):
        assert check_drift_inequality(spec, cert, window=60,
                                      variant=variant).passed


def test_corrupted_certificate_fails_the_inequality(spec, cert):
    bad = corrupt_certificate(cert, scale_c=2.0)
    assert bad.debug_scale_c == 2.0
    assert bad.c == pytest.approx(2.0 * cert.c, rel=1e-15)
    assert bad.theta == cert.theta
    report = check_drift_inequality(spec, bad, window=30)
    assert not report.passed


def test_lyapunov_v_is_the_scaled_exponential(cert):
    v00 = lyapunov_v(cert, (0, 0))
    assert v00.value == pytest.approx(1.0 / cert.c, rel=1e-15)
    assert v00.log_value == pytest.approx(-math.log(cert.c), rel=1e-15)
    ratio = lyapunov_v(cert, (1, 0)).value / v00.value
    assert ratio == pytest.approx(math.exp(cert.theta.theta1), rel=1e-13)
    tilde_ratio = lyapunov_v(cert, (0, 1), variant="tilde").value \
        / lyapunov_v(cert, (0, 0), variant="tilde").value
    assert tilde_ratio == pytest.approx(
        math.exp(cert.theta_tilde.theta2), rel=1e-13)


def test_lyapunov_v_rejects_negative_states(cert):
    with pytest.raises(ValueError):
        lyapunov_v(cert, (-1, 0))

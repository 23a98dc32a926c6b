"""Exponential tilts and geometric drift certificates.

For a tilt vector theta > 0, each region law has the transform
gamma(theta) = sum_m p(m) exp(<theta, m>).  A tilt is feasible when the
three non-origin transforms are all below one; on the feasible set the
Lyapunov vector v(n) = exp(<theta, n>) / c contracts the chain
geometrically, with

    c = 1 - max(gamma_face1, gamma_face2, gamma_interior)   at theta,
    b = 1 + (gamma_origin - 1) / c.

A second, componentwise larger tilt theta_tilde with constants
(c_tilde, b_tilde) yields the closed-form bound and the stationary tail
envelope used downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .model import (
    FACE1,
    FACE2,
    INTERIOR,
    ORIGIN,
    RandomWalkSpec,
    region_of,
)

State = Tuple[int, int]

# Regions whose transform must fall below one for feasibility.  The
# origin law has nonnegative increments, so its transform never does.
TILTED_REGIONS = (FACE1, FACE2, INTERIOR)

DEFAULT_BOX = (1e-3, 3.0)
DEFAULT_GRID = 200
DEFAULT_POLISH_ITERS = 50
DEFAULT_POLISH_TOL = 1e-10
DEFAULT_KAPPA = 0.9


@dataclass(frozen=True)
class Tilt:
    theta1: float
    theta2: float

    def __post_init__(self):
        if not (self.theta1 > 0.0 and self.theta2 > 0.0):
            raise ValueError(
                f"tilt components must be strictly positive, got "
                f"({self.theta1!r}, {self.theta2!r})")

    def as_tuple(self) -> Tuple[float, float]:
        return (self.theta1, self.theta2)


@dataclass(frozen=True)
class LyapunovValue:
    """log of v at a state, plus the linear value when representable."""

    log_value: float
    value: float  # math.inf when exp(log_value) overflows


@dataclass(frozen=True)
class DriftCertificate:
    """Drift constants at a pair of nested tilts.

    gammas_at_theta / gammas_at_theta_tilde record the transform of
    every region law (origin included) at each tilt.  debug_scale_c
    is 1.0 for honest certificates; the negative-control path in the
    CLI stores the corruption factor here so reports can show it.
    """

    theta: Tilt
    c: float
    b: float
    theta_tilde: Tilt
    c_tilde: float
    b_tilde: float
    gammas_at_theta: Dict[str, float]
    gammas_at_theta_tilde: Dict[str, float]
    debug_scale_c: float = 1.0

    def to_dict(self) -> dict:
        return {
            "theta": list(self.theta.as_tuple()),
            "theta_tilde": list(self.theta_tilde.as_tuple()),
            "c": self.c,
            "b": self.b,
            "c_tilde": self.c_tilde,
            "b_tilde": self.b_tilde,
            "gammas_at_theta": dict(self.gammas_at_theta),
            "gammas_at_theta_tilde": dict(self.gammas_at_theta_tilde),
            "debug_scale_c": self.debug_scale_c,
        }


@dataclass
class DriftCheckReport:
    """Outcome of checking the drift inequality on a finite window."""

    passed: bool
    max_rel_violation: float
    worst_state: State
    window: int
    variant: str
    tol: float


def gamma(spec: RandomWalkSpec, region: str,
          theta: Sequence[float]) -> float:
    """Transform sum_m p(m) exp(theta1*m1 + theta2*m2) of a region law."""
    t1, t2 = float(theta[0]), float(theta[1])
    total = 0.0
    for (dx, dy), p in spec.law(region).probs.items():
        if p != 0.0:
            total += p * math.exp(t1 * dx + t2 * dy)
    return total


def gamma_all(spec: RandomWalkSpec,
              theta: Sequence[float]) -> Dict[str, float]:
    return {region: gamma(spec, region, theta)
            for region in (ORIGIN, FACE1, FACE2, INTERIOR)}


def feasibility_margin(spec: RandomWalkSpec,
                       theta: Sequence[float]) -> float:
    """1 minus the largest non-origin transform; positive iff feasible."""
    return 1.0 - max(gamma(spec, region, theta)
                     for region in TILTED_REGIONS)


def in_feasible_region(spec: RandomWalkSpec, theta) -> bool:
    """True iff every non-origin transform is strictly below one."""
    if isinstance(theta, Tilt):
        theta = theta.as_tuple()
    return feasibility_margin(spec, theta) > 0.0


def _grid_margins(spec: RandomWalkSpec, lo: float, hi: float,
                  grid: int) -> Tuple[np.ndarray, np.ndarray]:
    """Margin on a logarithmic grid; returns (axis values, margin grid)."""
    t = np.geomspace(lo, hi, grid)
    t1 = t[:, None]
    t2 = t[None, :]
    worst = np.full((grid, grid), -np.inf)
    for region in TILTED_REGIONS:
        g = np.zeros((grid, grid))
        for (dx, dy), p in spec.law(region).probs.items():
            if p != 0.0:
                g += p * np.exp(dx * t1 + dy * t2)
        np.maximum(worst, g, out=worst)
    return t, 1.0 - worst


def find_theta(spec: RandomWalkSpec, *,
               box: Tuple[float, float] = DEFAULT_BOX,
               grid: int = DEFAULT_GRID,
               polish_iters: int = DEFAULT_POLISH_ITERS,
               polish_tol: float = DEFAULT_POLISH_TOL) -> Tilt:
    """Search for the tilt maximizing the feasibility margin.

    A logarithmic grid over the box picks the best starting point
    (lexicographic tie-break, so the result is deterministic), then a
    Nelder-Mead polish in log coordinates refines it.  The polished
    point is kept only if it improves the margin and stays feasible.

    Raises ValueError("no feasible tilt found...") when the grid finds
    no positive margin, which signals either a violated negative-drift
    condition or a search box that is too small.
    """
    lo, hi = box
    t, margins = _grid_margins(spec, lo, hi, grid)
    flat = int(np.argmax(margins))  # first max in row-major order
    i, j = divmod(flat, grid)
    best_margin = float(margins[i, j])
    best = (float(t[i]), float(t[j]))
    if best_margin <= 0.0:
        raise ValueError(
            "no feasible tilt found: every grid point in "
            f"[{lo}, {hi}]^2 has a transform at or above one "
            "(negative-drift condition violated, or box too small)")

    log_lo, log_hi = math.log(lo), math.log(hi)

    def neg_margin(x):
        if not (log_lo <= x[0] <= log_hi and log_lo <= x[1] <= log_hi):
            return math.inf
        return -feasibility_margin(spec, (math.exp(x[0]), math.exp(x[1])))

    res = minimize(
        neg_margin,
        x0=np.log(best),
        method="Nelder-Mead",
        options={"maxiter": polish_iters, "xatol": polish_tol,
                 "fatol": polish_tol},
    )
    if np.isfinite(res.fun) and -res.fun > best_margin:
        candidate = (math.exp(res.x[0]), math.exp(res.x[1]))
        if feasibility_margin(spec, candidate) > 0.0:
            best = candidate
    return Tilt(*best)


def find_theta_tilde(spec: RandomWalkSpec, theta: Tilt, *,
                     kappa: float = DEFAULT_KAPPA,
                     tol: float = 1e-10) -> Tilt:
    """Larger feasible tilt on the diagonal ray from theta.

    Bisects for the largest step s_max with theta + s*(1,1) feasible,
    then returns theta + kappa*s_max*(1,1).  kappa < 1 keeps the result
    strictly inside the feasible set, which keeps c_tilde away from
    zero.  The returned tilt is re-verified and the step shrunk if
    rounding put it on the wrong side of the boundary.
    """
    if not 0.0 < kappa < 1.0:
        raise ValueError(f"kappa must lie in (0, 1), got {kappa!r}")
    if not in_feasible_region(spec, theta):
        raise ValueError(f"theta {theta} is not feasible")

    def feasible_at(s: float) -> bool:
        return feasibility_margin(
            spec, (theta.theta1 + s, theta.theta2 + s)) > 0.0

    s_lo = 0.0
    s_hi = 1e-3
    # Expand until infeasible.  Transforms blow up exponentially, so a
    # few doublings suffice; the cap is pure paranoia.
    for _ in range(64):
        if not feasible_at(s_hi):
            break
        s_lo = s_hi
        s_hi *= 2.0
    else:
        raise ValueError("diagonal ray never leaves the feasible set; "
                         "transforms of a proper law must exceed one")
    while s_hi - s_lo > tol:
        mid = 0.5 * (s_lo + s_hi)
        if feasible_at(mid):
            s_lo = mid
        else:
            s_hi = mid

    s = kappa * s_lo
    while s > 0.0 and not feasible_at(s):
        s *= 0.5
    if s <= 0.0:
        raise ValueError("could not place a feasible tilt above theta")
    return Tilt(theta.theta1 + s, theta.theta2 + s)


def certificate_constants(spec: RandomWalkSpec,
                          theta: Tilt) -> Tuple[float, float]:
    """Drift constants (c, b) at a feasible tilt."""
    gammas = gamma_all(spec, theta.as_tuple())
    c = 1.0 - max(gammas[region] for region in TILTED_REGIONS)
    if not 0.0 < c < 1.0:
        raise ValueError(
            f"tilt {theta} infeasible: contraction constant {c!r} "
            f"outside (0, 1)")
    b = 1.0 + (gammas[ORIGIN] - 1.0) / c
    return c, b


def drift_certificate(spec: RandomWalkSpec, theta: Tilt,
                      theta_tilde: Tilt) -> DriftCertificate:
    """Assemble and validate the certificate at a nested pair of tilts."""
    if not (theta_tilde.theta1 > theta.theta1
            and theta_tilde.theta2 > theta.theta2):
        raise ValueError(
            f"theta_tilde {theta_tilde} must dominate theta {theta} "
            f"componentwise")
    if not in_feasible_region(spec, theta):
        raise ValueError(f"theta {theta} is not feasible")
    if not in_feasible_region(spec, theta_tilde):
        raise ValueError(f"theta_tilde {theta_tilde} is not feasible")
    c, b = certificate_constants(spec, theta)
    c_tilde, b_tilde = certificate_constants(spec, theta_tilde)
    if b <= 0.0 or b_tilde <= 0.0:
        raise ValueError("drift offset constant must be positive")
    return DriftCertificate(
        theta=theta,
        c=c,
        b=b,
        theta_tilde=theta_tilde,
        c_tilde=c_tilde,
        b_tilde=b_tilde,
        gammas_at_theta=gamma_all(spec, theta.as_tuple()),
        gammas_at_theta_tilde=gamma_all(spec, theta_tilde.as_tuple()),
    )


def build_certificate(spec: RandomWalkSpec, *,
                      theta: Optional[Tilt] = None,
                      theta_tilde: Optional[Tilt] = None,
                      kappa: float = DEFAULT_KAPPA,
                      box: Tuple[float, float] = DEFAULT_BOX,
                      grid: int = DEFAULT_GRID) -> DriftCertificate:
    """find_theta + find_theta_tilde + drift_certificate in one call."""
    if theta is None:
        theta = find_theta(spec, box=box, grid=grid)
    if theta_tilde is None:
        theta_tilde = find_theta_tilde(spec, theta, kappa=kappa)
    return drift_certificate(spec, theta, theta_tilde)


def corrupt_certificate(cert: DriftCertificate,
                        scale_c: float) -> DriftCertificate:
    """Deliberately scale c and c_tilde; negative-control plumbing only.

    The returned certificate records the factor in debug_scale_c so no
    report can present it as honest.
    """
    if scale_c == 1.0:
        return cert
    return replace(cert, c=cert.c * scale_c,
                   c_tilde=cert.c_tilde * scale_c,
                   debug_scale_c=scale_c)


def _tilt_of(cert: DriftCertificate, variant: str) -> Tuple[Tilt, float, float]:
    if variant == "base":
        return cert.theta, cert.c, cert.b
    if variant == "tilde":
        return cert.theta_tilde, cert.c_tilde, cert.b_tilde
    raise ValueError(f"variant must be 'base' or 'tilde', got {variant!r}")


def lyapunov_v(cert: DriftCertificate, state: State,
               variant: str = "base") -> LyapunovValue:
    """Value of the Lyapunov vector at a state, carried in log space."""
    n1, n2 = state
    if n1 < 0 or n2 < 0:
        raise ValueError(f"state {state} outside the quadrant")
    tilt, c, _ = _tilt_of(cert, variant)
    log_value = tilt.theta1 * n1 + tilt.theta2 * n2 - math.log(c)
    value = math.exp(log_value) if log_value <= 709.0 else math.inf
    return LyapunovValue(log_value=log_value, value=value)


def check_drift_inequality(spec: RandomWalkSpec, cert: DriftCertificate, *,
                           window: int = 60, variant: str = "base",
                           tol: float = 1e-10) -> DriftCheckReport:
    """Check the geometric drift inequality at every state of a window.

    The inequality at state s reads

        sum_m p(s; m) v(s + m) <= (1 - c) v(s) + b [s = origin].

    Both sides are divided by v(s) > 0 before comparison, which leaves
    the inequality and its relative tolerance unchanged (the increment
    form of v gives v(s+m)/v(s) = exp(<theta, m>) exactly) and avoids
    overflow for large windows.  Every state in {0..window}^2 is
    visited, so all four region laws and the origin offset are
    exercised.
    """
    tilt, c, b = _tilt_of(cert, variant)
    theta = tilt.as_tuple()
    lhs_by_region = {region: gamma(spec, region, theta)
                     for region in spec.laws}
    worst = -math.inf
    worst_state = (0, 0)
    for n1 in range(window + 1):
        for n2 in range(window + 1):
            s = (n1, n2)
            lhs = lhs_by_region[region_of(s)]
            rhs = (1.0 - c) + (b * c if s == (0, 0) else 0.0)
            rel = (lhs - rhs) / max(1.0, abs(rhs))
            if rel > worst:
                worst = rel
                worst_state = s
    return DriftCheckReport(
        passed=worst <= tol,
        max_rel_violation=worst,
        worst_state=worst_state,
        window=window,
        variant=variant,
        tol=tol,
    )

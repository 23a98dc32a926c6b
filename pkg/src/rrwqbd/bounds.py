"""Relative error bounds for the phase truncation, and the functionals
they certify.

The headline quantity is E(n): a computable upper bound on the relative
error |pi g - pi_n g| / pi g, uniform over every functional g that is
dominated by the exponential weight exp(<theta, s>).  It is assembled
from the truncated chain's own top-layer mass, so it is available
without ever solving the untruncated model.  E_tilde(n) is a cruder
closed form in n alone, proving the exponential decay rate; it only
needs the certificate constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .model import RandomWalkSpec
from .certificate import DriftCertificate, Tilt, certificate_constants, find_theta_tilde
from .qbd import QbdSolution, TailSum, phase_weighted_sum, top_layer_weighted_sum

UNINFORMATIVE = 1.0  # relative bounds at or above this certify nothing


# ---------------------------------------------------------------------------
# the bounds


@dataclass(frozen=True)
class ErrorBoundReport:
    n: int
    E: float
    E_tilde: float
    S_weighted: TailSum
    S_plain: TailSum
    cross_check_rel_diff: Optional[float]

    @property
    def informative(self) -> bool:
        return self.E < UNINFORMATIVE

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "E": self.E,
            "E_tilde": self.E_tilde,
            "informative": self.informative,
            "S_weighted": self.S_weighted.value,
            "S_weighted_method": self.S_weighted.method,
            "S_weighted_remainder": self.S_weighted.remainder_bound,
            "S_plain": self.S_plain.value,
            "S_plain_method": self.S_plain.method,
            "cross_check_rel_diff": self.cross_check_rel_diff,
        }


def error_bound_E(sol: QbdSolution, cert: DriftCertificate,
                  rel_tol: float = 1e-12,
                  cross_check: bool = True) -> ErrorBoundReport:
    """The truncation bound E(n) computed from the solved chain.

        E(n) = (12/c) * [ e^(t1+t2) e^(n t2) S_w + b S_0 ]

    with S_w the exp(k t1)-weighted and S_0 the plain mass of the top
    phase layer across levels.  Both sums are evaluated as a partial
    series plus a certified remainder, so the reported E(n) is a true
    upper bound; when the spectral margin allows it, the geometric
    closed form is computed too and the relative gap recorded.
    """
    t1, t2 = cert.theta.as_tuple()
    n = sol.n
    s_w = top_layer_weighted_sum(sol, t1, cert, method="certified_tail",
                                 rel_tol=rel_tol)
    s_0 = top_layer_weighted_sum(sol, 0.0, cert, method="certified_tail",
                                 rel_tol=rel_tol)
    value = (12.0 / cert.c) * (math.exp(t1 + t2) * math.exp(n * t2)
                               * s_w.value + cert.b * s_0.value)
    diff: Optional[float] = None
    if cross_check:
        try:
            closed_w = top_layer_weighted_sum(sol, t1, cert,
                                              method="closed_form")
            closed_0 = top_layer_weighted_sum(sol, 0.0, cert,
                                              method="closed_form")
        except ValueError:
            pass  # spectral margin too thin for the resolvent form
        else:
            closed = (12.0 / cert.c) * (
                math.exp(t1 + t2) * math.exp(n * t2) * closed_w.value
                + cert.b * closed_0.value)
            diff = abs(value - closed) / max(abs(closed), 1e-300)
    return ErrorBoundReport(
        n=n, E=value, E_tilde=error_bound_E_tilde(n, cert),
        S_weighted=s_w, S_plain=s_0, cross_check_rel_diff=diff)


def log_error_bound_E_tilde(n: int, cert: DriftCertificate) -> float:
    """log E_tilde(n); safe for n large enough to underflow the plain form."""
    t1, t2 = cert.theta.as_tuple()
    tt1, tt2 = cert.theta_tilde.as_tuple()
    lead = math.log(12.0 * cert.b_tilde / cert.c)
    # log of the two decaying terms, each written as exp(a - n*rate)
    a1 = (t1 + t2) - math.log1p(-math.exp(-(tt1 - t1)))
    a2 = math.log(cert.b) - math.log1p(-math.exp(-tt1))
    return lead + np.logaddexp(a1 - n * (tt2 - t2), a2 - n * tt2)


def error_bound_E_tilde(n: int, cert: DriftCertificate) -> float:
    """Closed-form decay bound E_tilde(n) >= E(n), from constants alone."""
    if n < 1:
        raise ValueError("truncation level must be >= 1")
    log_value = log_error_bound_E_tilde(n, cert)
    if log_value > 700.0:
        return math.inf
    return math.exp(log_value)


def relative_interval(approx: float, E: float) -> Tuple[float, Optional[float]]:
    """Enclosure for the true value given |true - approx| <= E * true.

    Returns (lower, upper); upper is None when E >= 1 and the bound
    only pins the value from below.
    """
    lower = approx / (1.0 + E)
    if E >= UNINFORMATIVE:
        return lower, None
    return lower, approx / (1.0 - E)


# ---------------------------------------------------------------------------
# functionals


@dataclass(frozen=True)
class FunctionalSpec:
    """A nonnegative functional from the built-in catalog.

    kinds:
      ones                  g(s) = 1
      scaled_lyapunov       g(s) = alpha * exp(<theta, s>)
      window_indicator      g(s) = 1 + [s in rect],  rect = (k_lo, k_hi, i_lo, i_hi)
      truncated_coordinate  g(s) = 1 + min(s_axis, cap)
    """

    kind: str
    alpha: float = 1.0
    rect: Optional[Tuple[int, int, int, int]] = None
    axis: int = 1
    cap: int = 0

    def __post_init__(self):
        if self.kind not in ("ones", "scaled_lyapunov", "window_indicator",
                             "truncated_coordinate"):
            raise ValueError(f"unknown functional kind {self.kind!r}")
        if self.kind == "scaled_lyapunov" and not self.alpha > 0.0:
            raise ValueError("alpha must be positive")
        if self.kind == "window_indicator":
            if self.rect is None:
                raise ValueError("window_indicator needs a rect")
            k_lo, k_hi, i_lo, i_hi = self.rect
            if not (0 <= k_lo <= k_hi and 0 <= i_lo <= i_hi):
                raise ValueError(f"bad rectangle {self.rect}")
        if self.kind == "truncated_coordinate":
            if self.axis not in (1, 2):
                raise ValueError("axis must be 1 or 2")
            if self.cap < 1:
                raise ValueError("cap must be >= 1")

    @property
    def label(self) -> str:
        if self.kind == "ones":
            return "ones"
        if self.kind == "scaled_lyapunov":
            return f"lyap({self.alpha:g})"
        if self.kind == "window_indicator":
            return "window({},{},{},{})".format(*self.rect)
        return f"trunc{self.axis}({self.cap})"


def ones() -> FunctionalSpec:
    return FunctionalSpec(kind="ones")


def scaled_lyapunov(alpha: float) -> FunctionalSpec:
    return FunctionalSpec(kind="scaled_lyapunov", alpha=alpha)


def window_indicator(k_lo: int, k_hi: int, i_lo: int,
                     i_hi: int) -> FunctionalSpec:
    return FunctionalSpec(kind="window_indicator",
                          rect=(k_lo, k_hi, i_lo, i_hi))


def truncated_coordinate(axis: int, cap: int) -> FunctionalSpec:
    return FunctionalSpec(kind="truncated_coordinate", axis=axis, cap=cap)


def default_catalog() -> Tuple[FunctionalSpec, ...]:
    return (
        ones(),
        scaled_lyapunov(1.0),
        scaled_lyapunov(0.5),
        window_indicator(3, 8, 3, 8),
        truncated_coordinate(1, 20),
        truncated_coordinate(2, 20),
    )


def evaluate_functional(fspec: FunctionalSpec, cert: DriftCertificate,
                        k, i):
    """g at state(s) (k, i); accepts scalars or numpy arrays."""
    k = np.asarray(k, dtype=float)
    i = np.asarray(i, dtype=float)
    if fspec.kind == "ones":
        return np.ones(np.broadcast(k, i).shape)[()]
    if fspec.kind == "scaled_lyapunov":
        t1, t2 = cert.theta.as_tuple()
        return fspec.alpha * np.exp(t1 * k + t2 * i)
    if fspec.kind == "window_indicator":
        k_lo, k_hi, i_lo, i_hi = fspec.rect
        inside = ((k >= k_lo) & (k <= k_hi) & (i >= i_lo) & (i <= i_hi))
        return 1.0 + inside.astype(float)
    coord = k if fspec.axis == 1 else i
    return 1.0 + np.minimum(coord, float(fspec.cap))


def validate_functional(fspec: FunctionalSpec, cert: DriftCertificate
                        ) -> Tuple[bool, Optional[dict]]:
    """Check the domination g(s) <= exp(<theta, s>) pointwise.

    Returns (valid, witness); the witness names a state where the
    inequality fails, with both sides evaluated.
    """
    t1, t2 = cert.theta.as_tuple()

    def witness_at(k: int, i: int) -> dict:
        return {
            "state": (k, i),
            "g": float(evaluate_functional(fspec, cert, k, i)),
            "dominating_weight": math.exp(t1 * k + t2 * i),
        }

    if fspec.kind == "ones":
        return True, None
    if fspec.kind == "scaled_lyapunov":
        # g / exp(<theta, s>) = alpha everywhere; the origin is a witness.
        if fspec.alpha <= 1.0:
            return True, None
        return False, witness_at(0, 0)
    if fspec.kind == "window_indicator":
        # worst state is the rectangle's lower-left corner
        k_lo, _, i_lo, _ = fspec.rect
        if t1 * k_lo + t2 * i_lo >= math.log(2.0):
            return True, None
        return False, witness_at(k_lo, i_lo)
    # truncated coordinate: past the cap the weight keeps growing, so
    # it is enough to scan x = 0..cap along the axis.
    rate = t1 if fspec.axis == 1 else t2
    for x in range(fspec.cap + 1):
        if 1.0 + x > math.exp(rate * x):
            return (False, witness_at(x, 0) if fspec.axis == 1
                    else witness_at(0, x))
    return True, None


@dataclass(frozen=True)
class CertifiedFunctional:
    functional: str
    valid: bool
    witness: Optional[dict]
    approx: Optional[float]
    E: Optional[float]
    interval: Optional[Tuple[float, Optional[float]]]

    def to_dict(self) -> dict:
        d = {
            "functional": self.functional,
            "valid": self.valid,
            "approx": self.approx,
            "E": self.E,
        }
        if self.witness is not None:
            d["witness"] = {
                "state": list(self.witness["state"]),
                "g": self.witness["g"],
                "dominating_weight": self.witness["dominating_weight"],
            }
        if self.interval is not None:
            lo, hi = self.interval
            d["interval"] = [lo, hi]
            d["informative"] = hi is not None
        return d


def approximate_functional(sol: QbdSolution, cert: DriftCertificate,
                           fspec: FunctionalSpec,
                           rel_tol: float = 1e-12) -> float:
    """pi_n g for a catalog functional, through the geometric structure."""
    m = sol.n + 1
    idx = np.arange(m)
    envelope = (cert.b_tilde, cert.theta_tilde.theta1,
                cert.theta_tilde.theta2)
    if fspec.kind == "ones":
        return 1.0
    if fspec.kind == "scaled_lyapunov":
        t1, t2 = cert.theta.as_tuple()
        u = np.exp(t2 * idx)
        total = phase_weighted_sum(sol, u, t1, envelope=envelope,
                                   rel_tol=rel_tol)
        return fspec.alpha * total.value
    if fspec.kind == "window_indicator":
        k_lo, k_hi, i_lo, i_hi = fspec.rect
        mass = 0.0
        if i_lo <= sol.n:
            lo, hi = i_lo, min(i_hi, sol.n)
            for k in range(k_lo, k_hi + 1):
                mass += float(sol.level(k)[lo:hi + 1].sum())
        return 1.0 + mass
    if fspec.axis == 2:
        w = 1.0 + np.minimum(idx, float(fspec.cap))
        total = phase_weighted_sum(sol, w, 0.0, envelope=envelope,
                                   rel_tol=rel_tol)
        return total.value
    # axis 1: weight min(k, cap) over level masses, closed form in R
    R = sol.rate.R
    ones_vec = np.ones(m)
    value = 0.0
    for k in range(1, fspec.cap):
        value += k * float(sol.level(k).sum())
    tail_start = sol.pi1 if fspec.cap == 1 else (
        sol.pi1 @ np.linalg.matrix_power(R, fspec.cap - 1))
    tail_mass = float(
        np.linalg.solve(np.eye(m) - R.T, tail_start) @ ones_vec)
    return 1.0 + value + fspec.cap * tail_mass


def certify_functional(sol: QbdSolution, cert: DriftCertificate,
                       fspec: FunctionalSpec,
                       report: Optional[ErrorBoundReport] = None,
                       rel_tol: float = 1e-12) -> CertifiedFunctional:
    """Approximate pi g and wrap it in the certified enclosure.

    Invalid functionals (not dominated by the exponential weight) get
    no enclosure, only the witness explaining why.
    """
    valid, witness = validate_functional(fspec, cert)
    if not valid:
        return CertifiedFunctional(functional=fspec.label, valid=False,
                                   witness=witness, approx=None, E=None,
                                   interval=None)
    if report is None:
        report = error_bound_E(sol, cert, rel_tol=rel_tol)
    approx = approximate_functional(sol, cert, fspec, rel_tol=rel_tol)
    return CertifiedFunctional(
        functional=fspec.label, valid=True, witness=None, approx=approx,
        E=report.E, interval=relative_interval(approx, report.E))


# ---------------------------------------------------------------------------
# tilted mass checks (the certificate's own tail guarantees)


def tilted_stationary_mass(sol: QbdSolution, cert: DriftCertificate,
                           which: str = "base",
                           spec: Optional[RandomWalkSpec] = None,
                           rel_tol: float = 1e-12) -> TailSum:
    """Certified sum of pi_n(k, i) exp(<tilt, (k, i)>) over all states.

    which = "base" uses theta (the drift certificate promises the total
    is at most b); which = "tilde" uses theta_tilde (promised at most
    b_tilde).  The tilde weight grows at the envelope's own rate, so
    its remainder needs a strictly larger feasible tilt; pass the spec
    to let the routine construct one.
    """
    m = sol.n + 1
    idx = np.arange(m)
    if which == "base":
        t1, t2 = cert.theta.as_tuple()
        envelope = (cert.b_tilde, cert.theta_tilde.theta1,
                    cert.theta_tilde.theta2)
        u = np.exp(t2 * idx)
        return phase_weighted_sum(sol, u, t1, envelope=envelope,
                                  rel_tol=rel_tol)
    if which != "tilde":
        raise ValueError(f"unknown tilt selector {which!r}")
    t1, t2 = cert.theta_tilde.as_tuple()
    u = np.exp(t2 * idx)
    growth = math.exp(t1) * sol.rate.spectral_radius
    if growth < 1.0 - 1e-6:
        return phase_weighted_sum(sol, u, t1, method="closed_form")
    if spec is None:
        raise ValueError(
            "the resolvent margin is too thin at theta_tilde and no spec "
            "was given to build a larger envelope tilt")
    beyond = _beyond_tilt(spec, cert)
    c_hat, b_hat = certificate_constants(spec, beyond)
    envelope = (b_hat, beyond.theta1, beyond.theta2)
    return phase_weighted_sum(sol, u, t1, envelope=envelope,
                              rel_tol=rel_tol)


def _beyond_tilt(spec: RandomWalkSpec, cert: DriftCertificate) -> Tilt:
    """A feasible tilt strictly above theta_tilde on the same ray."""
    for kappa in (0.95, 0.99, 0.999):
        candidate = find_theta_tilde(spec, cert.theta, kappa=kappa)
        if (candidate.theta1 > cert.theta_tilde.theta1
                and candidate.theta2 > cert.theta_tilde.theta2):
            return candidate
    raise ValueError(
        "could not find a feasible tilt strictly beyond theta_tilde; "
        "it may have been chosen too close to the feasibility boundary")

"""Block matrices of the walk, phase truncation, and the QBD solve.

Reading the first coordinate as the level and the second as the phase,
the walk's transition matrix is block tridiagonal with blocks A(k),
k in {0, +-1}, away from level zero and B(k), k in {0, 1}, at level
zero.  Clamping the phase at n (reflect-at-cap on the second
coordinate) turns the phase space finite: rows 0..n-1 of each block are
the untruncated rows, and row n folds the upward phase move into the
cap.  The result is a standard QBD whose stationary distribution has
the geometric form pi_k = pi_1 R^(k-1) above level one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .model import FACE1, FACE2, INTERIOR, ORIGIN, RandomWalkSpec
from .certificate import DriftCertificate

ROW_SUM_TOL = 1e-12
DEFAULT_R_TOL = 1e-13
MAX_FIXED_POINT_ITERS = 100_000
MAX_LOG_REDUCTION_ITERS = 200
SPECTRAL_MARGIN = 1e-6
DEFAULT_LEVEL_CHECK = 50


@dataclass(frozen=True)
class QbdBlocks:
    """Phase-truncated transition blocks at cap n.

    A_minus, A_zero, A_plus are the level-down/stay/up blocks away from
    level zero; B_zero, B_plus the stay/up blocks at level zero.  All
    are (n+1) x (n+1).
    """

    n: int
    A_minus: np.ndarray
    A_zero: np.ndarray
    A_plus: np.ndarray
    B_zero: np.ndarray
    B_plus: np.ndarray


@dataclass(frozen=True)
class RateMatrix:
    R: np.ndarray
    residual: float
    spectral_radius: float
    iterations: int
    method: str
    G: Optional[np.ndarray] = None  # first-passage-down matrix, if computed


@dataclass
class QbdSolution:
    """Stationary distribution of the phase-truncated chain.

    Levels k >= 2 are represented geometrically as pi1 R^(k-1) and
    materialized on demand through level().
    """

    n: int
    blocks: QbdBlocks
    rate: RateMatrix
    pi0: np.ndarray
    pi1: np.ndarray
    normalization_residual: float
    boundary_residual: float
    solver: str
    _levels: List[np.ndarray] = field(default_factory=list, repr=False)

    def level(self, k: int) -> np.ndarray:
        """Stationary vector of level k."""
        if k < 0:
            raise ValueError("level must be nonnegative")
        if not self._levels:
            self._levels = [self.pi0, self.pi1]
        while len(self._levels) <= k:
            self._levels.append(self._levels[-1] @ self.rate.R)
        return self._levels[k]

    def level_matrix(self, kmax: int) -> np.ndarray:
        """Levels 0..kmax stacked as rows of an array."""
        self.level(kmax)
        return np.vstack(self._levels[:kmax + 1])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "spectral_radius_R": self.rate.spectral_radius,
            "R_residual": self.rate.residual,
            "R_method": self.rate.method,
            "solver": self.solver,
            "pi0": self.pi0.tolist(),
            "pi1": self.pi1.tolist(),
            "normalization_residual": self.normalization_residual,
            "boundary_residual": self.boundary_residual,
        }


@dataclass(frozen=True)
class TailSum:
    """Certified value of an infinite sum over levels.

    value is an upper bound on the represented series: for the closed
    form it is the series itself (remainder_bound 0), for the truncated
    method it is partial sum plus certified remainder.
    """

    value: float
    remainder_bound: float
    terms_used: int
    method: str  # "series_closed_form" or "truncated_with_certified_tail"


def _law_prob(spec: RandomWalkSpec, region: str, k: int, j: int) -> float:
    return spec.law(region).probs.get((k, j), 0.0)


def _truncated_block(spec: RandomWalkSpec, n: int, k: int,
                     row0_region: str, inner_region: str) -> np.ndarray:
    """One truncated block: untruncated rows 0..n-1, folded row n.

    Row 0 follows the boundary law for this block family, rows i >= 1
    the inner law placed tridiagonally.  Row n keeps the down move and
    folds stay+up into the cap column.
    """
    m = n + 1
    block = np.zeros((m, m))
    block[0, 0] = _law_prob(spec, row0_region, k, 0)
    if n >= 1:
        block[0, 1] = _law_prob(spec, row0_region, k, 1)
    for i in range(1, n):
        block[i, i - 1] = _law_prob(spec, inner_region, k, -1)
        block[i, i] = _law_prob(spec, inner_region, k, 0)
        block[i, i + 1] = _law_prob(spec, inner_region, k, 1)
    block[n, n - 1] = _law_prob(spec, inner_region, k, -1)
    block[n, n] = (_law_prob(spec, inner_region, k, 0)
                   + _law_prob(spec, inner_region, k, 1))
    return block


def build_blocks(spec: RandomWalkSpec, n: int) -> QbdBlocks:
    """Build the five phase-truncated blocks at cap n (n >= 1)."""
    if n < 1:
        raise ValueError(f"truncation level must be >= 1, got {n}")
    blocks = QbdBlocks(
        n=n,
        A_minus=_truncated_block(spec, n, -1, FACE1, INTERIOR),
        A_zero=_truncated_block(spec, n, 0, FACE1, INTERIOR),
        A_plus=_truncated_block(spec, n, 1, FACE1, INTERIOR),
        B_zero=_truncated_block(spec, n, 0, ORIGIN, FACE2),
        B_plus=_truncated_block(spec, n, 1, ORIGIN, FACE2),
    )
    a_sums = (blocks.A_minus + blocks.A_zero + blocks.A_plus).sum(axis=1)
    b_sums = (blocks.B_zero + blocks.B_plus).sum(axis=1)
    if (np.max(np.abs(a_sums - 1.0)) > ROW_SUM_TOL
            or np.max(np.abs(b_sums - 1.0)) > ROW_SUM_TOL):
        raise ValueError(
            "truncated blocks are not stochastic; the spec's laws do not "
            "sum to one (run validate_spec)")
    return blocks


def _r_residual(blocks: QbdBlocks, R: np.ndarray) -> float:
    F = blocks.A_plus + R @ blocks.A_zero + R @ R @ blocks.A_minus
    return float(np.max(np.abs(F - R)))


def _solve_R_logarithmic(blocks: QbdBlocks,
                         tol: float) -> Tuple[np.ndarray, np.ndarray, int]:
    """Logarithmic reduction for the pair (G, R).

    Returns (R, G, iterations).  Quadratically convergent; the iterate
    T decays doubly exponentially for positive recurrent chains.
    """
    m = blocks.n + 1
    eye = np.eye(m)
    inv = np.linalg.inv(eye - blocks.A_zero)
    H = inv @ blocks.A_plus
    L = inv @ blocks.A_minus
    G = L.copy()
    T = H.copy()
    for it in range(1, MAX_LOG_REDUCTION_ITERS + 1):
        U = H @ L + L @ H
        M = np.linalg.solve(eye - U, np.hstack([H @ H, L @ L]))
        H, L = M[:, :m], M[:, m:]
        G += T @ L
        T = T @ H
        if float(np.max(np.abs(T))) < tol:
            break
    else:
        raise RuntimeError(
            f"logarithmic reduction did not converge within "
            f"{MAX_LOG_REDUCTION_ITERS} doublings")
    R = blocks.A_plus @ np.linalg.inv(
        eye - blocks.A_zero - blocks.A_plus @ G)
    return R, G, it


def _solve_R_fixed_point(blocks: QbdBlocks,
                         tol: float) -> Tuple[np.ndarray, int]:
    """Natural fixed-point iteration from R = 0; linear convergence."""
    R = np.zeros_like(blocks.A_plus)
    for it in range(1, MAX_FIXED_POINT_ITERS + 1):
        R_next = blocks.A_plus + R @ blocks.A_zero + R @ R @ blocks.A_minus
        diff = float(np.max(np.abs(R_next - R)))
        R = R_next
        if diff < tol:
            return R, it
    raise RuntimeError(
        f"fixed-point iteration for R did not reach {tol} within "
        f"{MAX_FIXED_POINT_ITERS} iterations; last step moved {diff:g}")


def solve_R(blocks: QbdBlocks, tol: float = DEFAULT_R_TOL) -> RateMatrix:
    """Minimal nonnegative solution of R = A+ + R A0 + R^2 A-.

    Logarithmic reduction first; if it fails to converge or leaves a
    residual above tol, fall back to the natural fixed-point iteration.
    """
    if not np.any(blocks.A_plus):
        R = np.zeros_like(blocks.A_plus)
        return RateMatrix(R=R, residual=0.0, spectral_radius=0.0,
                          iterations=0, method="trivial_no_up_moves")
    G = None
    try:
        R, G, iters = _solve_R_logarithmic(blocks, tol)
        method = "logarithmic_reduction"
        residual = _r_residual(blocks, R)
        if residual >= tol * 10.0 or np.min(R) < -1e-14:
            raise RuntimeError("logarithmic reduction left a bad iterate")
    except (RuntimeError, np.linalg.LinAlgError):
        R, iters = _solve_R_fixed_point(blocks, tol)
        method = "fixed_point"
        residual = _r_residual(blocks, R)
    R = np.where(np.abs(R) < 1e-300, 0.0, R)  # flush denormal dust
    if np.min(R) < 0.0:
        if np.min(R) < -1e-13:
            raise RuntimeError(
                f"rate matrix solve produced a negative entry {np.min(R)!r}")
        R = np.maximum(R, 0.0)
    sp = float(np.max(np.abs(np.linalg.eigvals(R))))
    return RateMatrix(R=R, residual=residual, spectral_radius=sp,
                      iterations=iters, method=method, G=G)


def _boundary_direct(blocks: QbdBlocks,
                     R: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Boundary solve with one balance equation swapped for normalization."""
    m = blocks.n + 1
    eye = np.eye(m)
    F = np.zeros((2 * m, 2 * m))
    F[:m, :m] = blocks.B_zero - eye
    F[:m, m:] = blocks.B_plus
    F[m:, :m] = blocks.A_minus
    F[m:, m:] = blocks.A_zero + R @ blocks.A_minus - eye
    w = np.linalg.solve(eye - R, np.ones(m))
    norm_col = np.concatenate([np.ones(m), w])
    last_err: Optional[Exception] = None
    for jcol in (0, m, 2 * m - 1):
        M = F.copy()
        M[:, jcol] = norm_col
        rhs = np.zeros(2 * m)
        rhs[jcol] = 1.0
        try:
            x = np.linalg.solve(M.T, rhs)
        except np.linalg.LinAlgError as exc:
            last_err = exc
            continue
        return x[:m], x[m:]
    raise np.linalg.LinAlgError(
        f"boundary system is singular for every pivot column tried "
        f"({last_err}); the truncated chain may be reducible")


def _boundary_censored_gth(blocks: QbdBlocks, R: np.ndarray,
                           G: Optional[np.ndarray]
                           ) -> Tuple[np.ndarray, np.ndarray]:
    """Boundary solve through the chain censored on levels {0, 1}.

    The censored two-level chain is stochastic, so its stationary
    vector can be computed by GTH elimination, which never subtracts
    and therefore cannot produce negative entries.
    """
    from .oracle import gth_stationary  # local import to avoid a cycle

    m = blocks.n + 1
    if G is None:
        # G solves G = A- + A0 G + A+ G^2; iterate from the down block.
        G = blocks.A_minus.copy()
        for _ in range(MAX_FIXED_POINT_ITERS):
            G_next = (blocks.A_minus + blocks.A_zero @ G
                      + blocks.A_plus @ G @ G)
            if float(np.max(np.abs(G_next - G))) < DEFAULT_R_TOL:
                G = G_next
                break
            G = G_next
    C = np.zeros((2 * m, 2 * m))
    C[:m, :m] = blocks.B_zero
    C[:m, m:] = blocks.B_plus
    C[m:, :m] = blocks.A_minus
    C[m:, m:] = blocks.A_zero + blocks.A_plus @ G
    sigma = gth_stationary(C)
    pi0, pi1 = sigma[:m], sigma[m:]
    w = np.linalg.solve(np.eye(m) - R, np.ones(m))
    scale = pi0.sum() + float(pi1 @ w)
    return pi0 / scale, pi1 / scale


def boundary_residual(blocks: QbdBlocks, R: np.ndarray, pi0: np.ndarray,
                      pi1: np.ndarray) -> float:
    r0 = pi0 @ blocks.B_zero + pi1 @ blocks.A_minus - pi0
    r1 = (pi0 @ blocks.B_plus
          + pi1 @ (blocks.A_zero + R @ blocks.A_minus) - pi1)
    return float(np.sum(np.abs(r0)) + np.sum(np.abs(r1)))


def solve_stationary(blocks: QbdBlocks, rate: RateMatrix) -> QbdSolution:
    """Stationary distribution of the truncated chain.

    Solves the two boundary balance equations plus normalization
    directly; if the direct solve leaves meaningful negative mass or a
    poor residual, redo it through the censored two-level chain with
    GTH elimination, which is slower but sign-safe.
    """
    R = rate.R
    m = blocks.n + 1
    solver = "direct"
    try:
        pi0, pi1 = _boundary_direct(blocks, R)
    except np.linalg.LinAlgError:
        pi0, pi1 = None, None
    if (pi0 is None
            or min(float(pi0.min()), float(pi1.min())) < -1e-14
            or boundary_residual(blocks, R, pi0, pi1) > 1e-10):
        pi0, pi1 = _boundary_censored_gth(blocks, R, rate.G)
        solver = "censored_gth"
    # Roundoff dust from the direct solve; anything larger was caught.
    pi0 = np.maximum(pi0, 0.0)
    pi1 = np.maximum(pi1, 0.0)
    w = np.linalg.solve(np.eye(m) - R, np.ones(m))
    norm_res = abs(float(pi0.sum() + pi1 @ w) - 1.0)
    return QbdSolution(
        n=blocks.n,
        blocks=blocks,
        rate=rate,
        pi0=pi0,
        pi1=pi1,
        normalization_residual=norm_res,
        boundary_residual=boundary_residual(blocks, R, pi0, pi1),
        solver=solver,
    )


def solve(spec: RandomWalkSpec, n: int,
          tol: float = DEFAULT_R_TOL) -> QbdSolution:
    """build_blocks + solve_R + solve_stationary."""
    blocks = build_blocks(spec, n)
    return solve_stationary(blocks, solve_R(blocks, tol))


def pi_at(sol: QbdSolution, k: int, i: int) -> float:
    """Stationary mass of state (k, i); zero above the phase cap."""
    if k < 0 or i < 0:
        raise ValueError("state indices must be nonnegative")
    if i > sol.n:
        return 0.0
    return float(sol.level(k)[i])


def balance_residual(sol: QbdSolution,
                     levels: int = DEFAULT_LEVEL_CHECK) -> float:
    """L1 residual of the stationary equation on levels 0..levels."""
    blocks = sol.blocks
    res = np.sum(np.abs(
        sol.level(0) @ blocks.B_zero + sol.level(1) @ blocks.A_minus
        - sol.level(0)))
    if levels >= 1:
        res += np.sum(np.abs(
            sol.level(0) @ blocks.B_plus + sol.level(1) @ blocks.A_zero
            + sol.level(2) @ blocks.A_minus - sol.level(1)))
    for k in range(2, levels + 1):
        res += np.sum(np.abs(
            sol.level(k - 1) @ blocks.A_plus + sol.level(k) @ blocks.A_zero
            + sol.level(k + 1) @ blocks.A_minus - sol.level(k)))
    return float(res)


def level_tail_mass(sol: QbdSolution, above: int) -> float:
    """Total stationary mass strictly above the given level."""
    if above < 0:
        raise ValueError("level must be nonnegative")
    m = sol.n + 1
    w = np.linalg.solve(np.eye(m) - sol.rate.R, np.ones(m))
    if above == 0:
        return float(sol.pi1 @ w)
    power = np.linalg.matrix_power(sol.rate.R, above)
    return float(sol.pi1 @ power @ w)


def phase_weighted_sum(sol: QbdSolution, u: np.ndarray, theta1: float, *,
                       envelope: Optional[Tuple[float, float, float]] = None,
                       method: str = "auto",
                       rel_tol: float = 1e-12,
                       max_terms: int = 100_000) -> TailSum:
    """Certified evaluation of sum_k exp(k theta1) pi_k . u over all levels.

    Closed form: pi0.u + e^t1 (pi1 (I - e^t1 R)^-1).u, legitimate when
    e^t1 sp(R) < 1 with margin.  Certified-tail form: K partial terms
    plus the envelope remainder, where envelope = (b_env, t1_env,
    t2_env) certifies pi(k, i) <= b_env exp(-k t1_env - i t2_env) and
    t1_env > theta1 makes the remainder a convergent geometric series.

    method "auto" prefers the closed form and falls back; "closed_form"
    and "certified_tail" force one route.
    """
    R = sol.rate.R
    m = sol.n + 1
    u = np.asarray(u, dtype=float)
    if u.shape != (m,):
        raise ValueError(f"weight vector must have shape ({m},)")
    growth = math.exp(theta1)
    closed_ok = growth * sol.rate.spectral_radius < 1.0 - SPECTRAL_MARGIN

    if method not in ("auto", "closed_form", "certified_tail"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed_form" or (method == "auto" and closed_ok):
        if not closed_ok:
            raise ValueError(
                f"closed form not available: e^theta1 * sp(R) = "
                f"{growth * sol.rate.spectral_radius!r} is not below 1 "
                f"with margin {SPECTRAL_MARGIN}")
        resolvent = np.linalg.solve(
            (np.eye(m) - growth * R).T, sol.pi1)
        value = float(sol.pi0 @ u + growth * (resolvent @ u))
        return TailSum(value=value, remainder_bound=0.0, terms_used=0,
                       method="series_closed_form")

    if envelope is None:
        raise ValueError(
            "certified-tail evaluation needs an envelope "
            "(b_env, t1_env, t2_env)")
    b_env, t1_env, t2_env = envelope
    decay = t1_env - theta1
    if decay <= 0.0:
        raise ValueError(
            f"envelope rate {t1_env!r} must exceed the weight rate "
            f"{theta1!r} for the remainder series to converge")
    idx = np.arange(m)
    env_u = float(np.sum(np.abs(u) * np.exp(-t2_env * idx)))
    ratio = math.exp(-decay)
    rem_coeff = b_env * env_u / (1.0 - ratio)

    def remainder(K: int) -> float:
        return rem_coeff * math.exp(-(K + 1) * decay)

    partial = float(sol.pi0 @ u)
    vec = sol.pi1.copy()
    weight = growth
    k = 1
    while True:
        dot = float(vec @ u)
        partial += 0.0 if dot == 0.0 else weight * dot
        rem = remainder(k)
        if rem <= rel_tol * max(abs(partial), 1e-300) or k >= max_terms:
            break
        vec = vec @ R
        weight *= growth
        k += 1
    return TailSum(value=partial + remainder(k),
                   remainder_bound=remainder(k),
                   terms_used=k + 1,
                   method="truncated_with_certified_tail")


def top_layer_weighted_sum(sol: QbdSolution, theta1: float,
                           cert: DriftCertificate,
                           method: str = "auto",
                           rel_tol: float = 1e-12) -> TailSum:
    """Certified sum over levels of pi(k, n) exp(k theta1).

    The remainder envelope is the stationary tail bound at the larger
    tilt: pi(k, n) <= b_tilde exp(-k ttilde1 - n ttilde2).
    """
    m = sol.n + 1
    u = np.zeros(m)
    u[sol.n] = 1.0
    envelope = (cert.b_tilde, cert.theta_tilde.theta1,
                cert.theta_tilde.theta2)
    return phase_weighted_sum(sol, u, theta1, envelope=envelope,
                              method=method, rel_tol=rel_tol)

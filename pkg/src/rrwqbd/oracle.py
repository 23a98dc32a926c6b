"""Brute-force references the analytical pipeline is checked against.

Three independent oracles live here:

* a dense stationary solve of the walk clamped to a finite window,
  organized level by level so the memory cost is one LU factor per
  level rather than one giant matrix;
* the deviation matrix of small finite chains, by two methods that
  must agree;
* direct Monte-Carlo simulation of the walk's step recursion.

None of them use the drift certificate or the rate matrix, which is
the point: agreement is evidence, disagreement is a bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.stats import t as student_t

from .model import RandomWalkSpec, region_of
from .certificate import DriftCertificate
from .bounds import FunctionalSpec, evaluate_functional, approximate_functional
from .qbd import QbdBlocks, QbdSolution, build_blocks

DENSE_RESIDUAL_TARGET = 1e-12
DENSE_REFINE_SWEEPS = 50
MEMORY_GUARD_BYTES = 3_500_000_000
DEFAULT_GAP_DELTA = 50
SERIES_CUTOFF_NORM = 1e-12
MAX_SERIES_TERMS = 200_000
BATCH_COUNT = 20
RNG_ALGORITHM = "philox4x64"


class OracleMemoryError(MemoryError):
    """Requested window exceeds the dense-solve memory guard."""


# ---------------------------------------------------------------------------
# GTH elimination


def gth_stationary(P: np.ndarray) -> np.ndarray:
    """Stationary vector of a finite stochastic matrix by GTH elimination.

    The algorithm never subtracts, so the result is nonnegative by
    construction and componentwise accurate even for very small
    stationary masses.  Input rows are used as-is; a slightly
    off-stochastic matrix (roundoff from censoring) is fine.
    """
    A = np.array(P, dtype=float, copy=True)
    size = A.shape[0]
    if A.shape != (size, size):
        raise ValueError("square matrix required")
    if size == 1:
        return np.ones(1)
    pivots = np.empty(size)
    for k in range(size - 1, 0, -1):
        s = float(A[k, :k].sum())
        if not s > 0.0:
            raise ValueError(
                f"GTH pivot vanished at state {k}; the chain is reducible")
        pivots[k] = s
        A[:k, :k] += np.outer(A[:k, k], A[k, :k]) / s
    x = np.empty(size)
    x[0] = 1.0
    for k in range(1, size):
        x[k] = float(x[:k] @ A[:k, k]) / pivots[k]
    return x / x.sum()


# ---------------------------------------------------------------------------
# dense stationary reference


@dataclass(frozen=True)
class ReferenceDistribution:
    pi_star: np.ndarray  # shape (M1+1, M2+1)
    residual: float
    window: Tuple[int, int]
    truncation_gap: Optional[float]

    def functional_value(self, fspec: FunctionalSpec,
                         cert: DriftCertificate) -> float:
        M1, M2 = self.window
        kk = np.arange(M1 + 1)[:, None]
        ii = np.arange(M2 + 1)[None, :]
        return float(np.sum(self.pi_star * evaluate_functional(
            fspec, cert, kk, ii)))

    def to_dict(self) -> dict:
        return {
            "window": list(self.window),
            "residual": self.residual,
            "truncation_gap": self.truncation_gap,
        }


def _guard_window(L: int, m: int) -> None:
    projected = (L + 1) * m * m * 8 + 6 * m * m * 8
    if projected > MEMORY_GUARD_BYTES:
        raise OracleMemoryError(
            f"window ({L}, {m - 1}) needs about {projected / 1e9:.1f} GB of "
            f"LU storage, above the {MEMORY_GUARD_BYTES / 1e9:.1f} GB guard; "
            "shrink the oracle window (a sparse solver is out of scope "
            "for this tool)")


def _clamped_residual(pi2d: np.ndarray, blocks: QbdBlocks) -> float:
    """L1 residual of pi P = pi for the level-clamped chain."""
    L = pi2d.shape[0] - 1
    up = [blocks.B_plus] + [blocks.A_plus] * L
    stay = [blocks.B_zero] + [blocks.A_zero] * L
    total = 0.0
    for k in range(L + 1):
        acc = pi2d[k] @ stay[k]
        if k == L:
            acc = pi2d[k] @ (stay[k] + up[k])
        if k > 0:
            acc = acc + pi2d[k - 1] @ up[k - 1]
        if k < L:
            acc = acc + pi2d[k + 1] @ blocks.A_minus
        total += float(np.sum(np.abs(acc - pi2d[k])))
    return total


def _power_sweep(pi2d: np.ndarray, blocks: QbdBlocks) -> np.ndarray:
    L = pi2d.shape[0] - 1
    up = [blocks.B_plus] + [blocks.A_plus] * L
    stay = [blocks.B_zero] + [blocks.A_zero] * L
    out = np.empty_like(pi2d)
    for k in range(L + 1):
        acc = pi2d[k] @ stay[k]
        if k == L:
            acc = pi2d[k] @ (stay[k] + up[k])
        if k > 0:
            acc = acc + pi2d[k - 1] @ up[k - 1]
        if k < L:
            acc = acc + pi2d[k + 1] @ blocks.A_minus
        out[k] = acc
    return out / out.sum()


def level_clamped_stationary(spec: RandomWalkSpec, L: int,
                             n: int) -> Tuple[np.ndarray, float]:
    """Stationary distribution of the phase-truncated chain further
    clamped at level L (both coordinates finite).

    Backward pass censors levels from the top down, storing one LU
    factor per level; the level-0 censored chain is solved by GTH.  The
    forward pass unrolls the levels.  Everything is built from
    nonnegative products and M-matrix solves, which keeps tiny entries
    componentwise accurate; residual refinement sweeps catch the rest.
    """
    if L < 1 or n < 1:
        raise ValueError("window sides must be >= 1")
    m = n + 1
    _guard_window(L, m)
    blocks = build_blocks(spec, n)
    eye = np.eye(m)

    lus: List = [None] * (L + 1)
    W = blocks.A_zero + blocks.A_plus  # top level folds its up-moves
    lus[L] = lu_factor(eye - W)
    for k in range(L - 1, 0, -1):
        X = lu_solve(lus[k + 1], blocks.A_minus)
        W = blocks.A_zero + blocks.A_plus @ X
        lus[k] = lu_factor(eye - W)
    X = lu_solve(lus[1], blocks.A_minus)
    W0 = blocks.B_zero + blocks.B_plus @ X

    pi2d = np.empty((L + 1, m))
    pi2d[0] = gth_stationary(W0)
    carry = pi2d[0] @ blocks.B_plus
    pi2d[1] = lu_solve(lus[1], carry, trans=1)
    for k in range(1, L):
        carry = pi2d[k] @ blocks.A_plus
        pi2d[k + 1] = lu_solve(lus[k + 1], carry, trans=1)
    del lus
    pi2d = np.maximum(pi2d, 0.0)
    pi2d /= pi2d.sum()

    residual = _clamped_residual(pi2d, blocks)
    sweeps = 0
    while residual > DENSE_RESIDUAL_TARGET and sweeps < DENSE_REFINE_SWEEPS:
        pi2d = _power_sweep(pi2d, blocks)
        residual = _clamped_residual(pi2d, blocks)
        sweeps += 1
    return pi2d, residual


def tv_distance_grids(a: np.ndarray, b: np.ndarray) -> float:
    """Total variation between distributions on possibly different grids."""
    rows = max(a.shape[0], b.shape[0])
    cols = max(a.shape[1], b.shape[1])
    pa = np.zeros((rows, cols))
    pb = np.zeros((rows, cols))
    pa[:a.shape[0], :a.shape[1]] = a
    pb[:b.shape[0], :b.shape[1]] = b
    return 0.5 * float(np.sum(np.abs(pa - pb)))


def dense_stationary(spec: RandomWalkSpec, M1: int, M2: int,
                     compute_gap: bool = True,
                     gap_delta: int = DEFAULT_GAP_DELTA
                     ) -> ReferenceDistribution:
    """Stationary distribution of the doubly clamped walk on
    {0..M1} x {0..M2}, with a truncation-gap estimate.

    The gap is the total variation against the same solve on a window
    enlarged by gap_delta on both sides; it is the honest error budget
    for every oracle-based assertion (the infinite chain's stationary
    distribution is never computed exactly).
    """
    if M1 < 2 or M2 < 2:
        raise ValueError("window sides must be >= 2")
    pi2d, residual = level_clamped_stationary(spec, M1, M2)
    gap = None
    if compute_gap:
        wide, _ = level_clamped_stationary(spec, M1 + gap_delta,
                                           M2 + gap_delta)
        gap = tv_distance_grids(pi2d, wide)
    return ReferenceDistribution(pi_star=pi2d, residual=residual,
                                 window=(M1, M2), truncation_gap=gap)


# ---------------------------------------------------------------------------
# reference vs QBD comparison


@dataclass(frozen=True)
class ObservedError:
    functional: str
    n: int
    strong: float  # sum_s |pi_n(s) - pi*(s)| g(s) / pi*.g
    weak: float    # |pi_n.g - pi*.g| / pi*.g
    pi_star_g: float
    qbd_g: float
    qbd_mass_beyond_window: float

    def to_dict(self) -> dict:
        return {
            "functional": self.functional,
            "n": self.n,
            "observed_strong": self.strong,
            "observed_weak": self.weak,
            "pi_star_g": self.pi_star_g,
            "qbd_g": self.qbd_g,
            "qbd_mass_beyond_window": self.qbd_mass_beyond_window,
        }


def reference_vs_qbd(spec: RandomWalkSpec, cert: DriftCertificate,
                     sol: QbdSolution, ref: ReferenceDistribution,
                     fspec: FunctionalSpec) -> ObservedError:
    """Observed relative truncation error against the dense reference.

    The strong form integrates |pi_n - pi*| against g state by state
    (extending pi_n by zeros above its phase cap); the weak form
    compares the two functional values.  QBD mass above the reference
    window is added to the strong numerator through the certified
    closed form, so no mass is silently dropped.
    """
    M1, M2 = ref.window
    n = sol.n
    if n > M2:
        raise ValueError(
            f"phase cap {n} exceeds the reference window height {M2}")
    kk = np.arange(M1 + 1)[:, None]
    ii = np.arange(M2 + 1)[None, :]
    g_grid = np.asarray(evaluate_functional(fspec, cert, kk, ii),
                        dtype=float)
    if g_grid.shape != ref.pi_star.shape:
        g_grid = np.broadcast_to(g_grid, ref.pi_star.shape)
    pi_star_g = float(np.sum(ref.pi_star * g_grid))

    qbd_grid = np.zeros((M1 + 1, M2 + 1))
    qbd_grid[:, :n + 1] = sol.level_matrix(M1)
    within = float(np.sum(qbd_grid * g_grid))
    total = approximate_functional(sol, cert, fspec)
    beyond = max(total - within, 0.0)

    strong_num = float(np.sum(np.abs(qbd_grid - ref.pi_star) * g_grid))
    strong = (strong_num + beyond) / pi_star_g
    weak = abs(total - pi_star_g) / pi_star_g
    return ObservedError(functional=fspec.label, n=n, strong=strong,
                         weak=weak, pi_star_g=pi_star_g, qbd_g=total,
                         qbd_mass_beyond_window=beyond)


# ---------------------------------------------------------------------------
# dense transition matrix on a window, deviation matrix


def dense_transition_matrix(spec: RandomWalkSpec, M1: int,
                            M2: int) -> np.ndarray:
    """Row-stochastic matrix of the walk with both coordinates clamped
    (moves past the window edge land on the edge)."""
    rows = (M1 + 1) * (M2 + 1)
    if rows * rows * 8 > MEMORY_GUARD_BYTES // 2:
        raise OracleMemoryError(
            f"dense matrix on window ({M1}, {M2}) would need "
            f"{rows * rows * 8 / 1e9:.1f} GB; shrink the window")
    P = np.zeros((rows, rows))

    def sid(x: int, y: int) -> int:
        return x * (M2 + 1) + y

    for x in range(M1 + 1):
        for y in range(M2 + 1):
            law = spec.law(region_of((x, y)))
            for (dx, dy), p in law.probs.items():
                nx = min(x + dx, M1)
                ny = min(y + dy, M2)
                P[sid(x, y), sid(max(nx, 0), max(ny, 0))] += p
    return P


@dataclass(frozen=True)
class DeviationMatrixFinite:
    D: np.ndarray
    method: str
    row_sum_defect: float
    pi_product_defect: float


def deviation_matrix(P: np.ndarray,
                     method: str = "fundamental_matrix"
                     ) -> DeviationMatrixFinite:
    """Deviation matrix sum_l (P^l - e pi) of a finite ergodic chain.

    fundamental_matrix solves (I - P + e pi) D = I - e pi, which also
    forces pi D = 0.  partial_series sums the terms directly until the
    l-th term's sup norm drops below cutoff; a chain whose powers do
    not converge (periodic) is rejected.
    """
    size = P.shape[0]
    pi = gth_stationary(P)
    e_pi = np.outer(np.ones(size), pi)
    if method == "fundamental_matrix":
        D = np.linalg.solve(np.eye(size) - P + e_pi, np.eye(size) - e_pi)
    elif method == "partial_series":
        D = np.eye(size) - e_pi
        Q = np.eye(size)
        norm_prev = math.inf
        stall = 0
        for _ in range(MAX_SERIES_TERMS):
            Q = Q @ P
            term = Q - e_pi
            norm = float(np.max(np.abs(term)))
            if norm < SERIES_CUTOFF_NORM:
                break
            stall = stall + 1 if norm >= norm_prev else 0
            if stall > 200:
                raise ValueError(
                    "powers of P do not converge to e pi (chain is "
                    "periodic or nearly so); the series method does "
                    "not apply")
            norm_prev = min(norm_prev, norm)
            D += term
        else:
            raise ValueError(
                f"deviation series did not converge within "
                f"{MAX_SERIES_TERMS} terms")
    else:
        raise ValueError(f"unknown method {method!r}")
    return DeviationMatrixFinite(
        D=D, method=method,
        row_sum_defect=float(np.max(np.abs(D.sum(axis=1)))),
        pi_product_defect=float(np.max(np.abs(pi @ D))))


@dataclass(frozen=True)
class DeviationBoundReport:
    window: Tuple[int, int]
    functional: str
    margin: float
    margin_relative: float
    lhs_max: float
    rhs_min: float
    pi_g: float
    truncation_gap: Optional[float]
    diagnostic: str

    def to_dict(self) -> dict:
        return {
            "window": list(self.window),
            "functional": self.functional,
            "margin": self.margin,
            "margin_relative": self.margin_relative,
            "lhs_max": self.lhs_max,
            "rhs_min": self.rhs_min,
            "pi_g": self.pi_g,
            "truncation_gap": self.truncation_gap,
            "diagnostic": self.diagnostic,
        }


def check_deviation_bound(spec: RandomWalkSpec, cert: DriftCertificate,
                          window: Tuple[int, int] = (40, 40),
                          fspec: Optional[FunctionalSpec] = None,
                          truncation_gap: Optional[float] = None
                          ) -> DeviationBoundReport:
    """Diagnostic comparison of |D| g against (pi g + 1)(v + (b/c) e).

    The inequality is a statement about the infinite chain; here it is
    evaluated on a clamped window, so a shortfall at the scale of the
    truncation gap is reported as context rather than failed.  Not a
    theorem check.
    """
    if fspec is None:
        fspec = FunctionalSpec(kind="ones")
    M1, M2 = window
    P = dense_transition_matrix(spec, M1, M2)
    dev = deviation_matrix(P, method="fundamental_matrix")
    pi = gth_stationary(P)
    kk = np.repeat(np.arange(M1 + 1), M2 + 1)
    ii = np.tile(np.arange(M2 + 1), M1 + 1)
    g = np.asarray(evaluate_functional(fspec, cert, kk, ii), dtype=float)
    if g.shape == ():
        g = np.full(kk.shape, float(g))
    pi_g = float(pi @ g)
    lhs = np.abs(dev.D) @ g
    t1, t2 = cert.theta.as_tuple()
    v = np.exp(t1 * kk + t2 * ii) / cert.c
    rhs = (pi_g + 1.0) * (v + cert.b / cert.c)
    margins = rhs - lhs
    j = int(np.argmin(margins))
    return DeviationBoundReport(
        window=window, functional=fspec.label,
        margin=float(margins[j]),
        margin_relative=float(margins[j] / rhs[j]),
        lhs_max=float(np.max(lhs)), rhs_min=float(np.min(rhs)),
        pi_g=pi_g, truncation_gap=truncation_gap,
        diagnostic=("finite-window reading of an infinite-chain "
                    "inequality; shortfalls at truncation-gap scale "
                    "are context, not failures"))


# ---------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class SimulationResult:
    estimate: float
    half_width: float
    steps: int
    seed: int
    functional: str
    rng_algorithm: str = RNG_ALGORITHM
    batches: int = BATCH_COUNT
    engine: str = "numba"

    def ci(self) -> Tuple[float, float]:
        return self.estimate - self.half_width, self.estimate + self.half_width

    def to_dict(self) -> dict:
        lo, hi = self.ci()
        return {
            "estimate": self.estimate,
            "half_width": self.half_width,
            "ci": [lo, hi],
            "steps": self.steps,
            "seed": self.seed,
            "functional": self.functional,
            "rng_algorithm": self.rng_algorithm,
            "batches": self.batches,
            "engine": self.engine,
        }


def _region_tables(spec: RandomWalkSpec
                   ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pack the four region laws into arrays indexed by
    2*(x>0) + (y>0): offsets, cumulative weights, support sizes."""
    order = ("origin", "face2", "face1", "interior")
    max_k = max(len(spec.law(r).probs) for r in order)
    offsets = np.zeros((4, max_k, 2), dtype=np.int64)
    cumw = np.ones((4, max_k), dtype=np.float64)
    sizes = np.zeros(4, dtype=np.int64)
    for idx, region in enumerate(order):
        items = sorted(spec.law(region).probs.items())
        sizes[idx] = len(items)
        acc = 0.0
        for j, ((dx, dy), p) in enumerate(items):
            offsets[idx, j, 0] = dx
            offsets[idx, j, 1] = dy
            acc += p
            cumw[idx, j] = acc
        cumw[idx, len(items) - 1] = 1.0 + 1e-9  # guard the last bucket
    return offsets, cumw, sizes


def _pack_functionals(fspecs: Sequence[FunctionalSpec],
                      cert: Optional[DriftCertificate]) -> np.ndarray:
    params = np.zeros((len(fspecs), 6), dtype=np.float64)
    for j, f in enumerate(fspecs):
        if f.kind == "ones":
            params[j, 0] = 0.0
        elif f.kind == "scaled_lyapunov":
            if cert is None:
                raise ValueError(
                    "scaled_lyapunov needs a certificate for its tilt")
            params[j, 0] = 1.0
            params[j, 1] = f.alpha
            params[j, 2] = cert.theta.theta1
            params[j, 3] = cert.theta.theta2
        elif f.kind == "window_indicator":
            params[j, 0] = 2.0
            params[j, 1:5] = f.rect
        else:
            params[j, 0] = 3.0
            params[j, 1] = float(f.axis)
            params[j, 2] = float(f.cap)
    return params


def _walk_batches_python(u: np.ndarray, offsets: np.ndarray,
                         cumw: np.ndarray, sizes: np.ndarray,
                         gparams: np.ndarray,
                         batch_sums: np.ndarray) -> None:
    """Reference implementation of the kernel; identical arithmetic
    order so results match the compiled path bit for bit (for
    functionals without transcendental evaluations)."""
    x = 0
    y = 0
    total = u.shape[0]
    n_g = gparams.shape[0]
    nb = batch_sums.shape[1]
    bs = total // nb
    for ell in range(total):
        ridx = (2 if x > 0 else 0) + (1 if y > 0 else 0)
        r = u[ell]
        k = 0
        last = sizes[ridx] - 1
        while k < last and r >= cumw[ridx, k]:
            k += 1
        x += offsets[ridx, k, 0]
        y += offsets[ridx, k, 1]
        b = ell // bs
        for j in range(n_g):
            kind = gparams[j, 0]
            if kind == 0.0:
                val = 1.0
            elif kind == 1.0:
                val = gparams[j, 1] * math.exp(gparams[j, 2] * x
                                               + gparams[j, 3] * y)
            elif kind == 2.0:
                inside = (gparams[j, 1] <= x <= gparams[j, 2]
                          and gparams[j, 3] <= y <= gparams[j, 4])
                val = 2.0 if inside else 1.0
            else:
                coord = x if gparams[j, 1] == 1.0 else y
                cap = gparams[j, 2]
                val = 1.0 + (coord if coord < cap else cap)
            batch_sums[j, b] += val


_walk_batches_numba = None


def _get_kernel():
    """Compile the walk kernel once; fall back to pure Python if numba
    is unavailable in the environment."""
    global _walk_batches_numba
    if _walk_batches_numba is not None:
        return _walk_batches_numba
    try:
        import numba
    except ImportError:
        _walk_batches_numba = _walk_batches_python
        return _walk_batches_numba

    @numba.njit(cache=True)
    def kernel(u, offsets, cumw, sizes, gparams, batch_sums):
        x = 0
        y = 0
        total = u.shape[0]
        n_g = gparams.shape[0]
        nb = batch_sums.shape[1]
        bs = total // nb
        for ell in range(total):
            ridx = (2 if x > 0 else 0) + (1 if y > 0 else 0)
            r = u[ell]
            k = 0
            last = sizes[ridx] - 1
            while k < last and r >= cumw[ridx, k]:
                k += 1
            x += offsets[ridx, k, 0]
            y += offsets[ridx, k, 1]
            b = ell // bs
            for j in range(n_g):
                kind = gparams[j, 0]
                if kind == 0.0:
                    val = 1.0
                elif kind == 1.0:
                    val = gparams[j, 1] * math.exp(gparams[j, 2] * x
                                                   + gparams[j, 3] * y)
                elif kind == 2.0:
                    inside = (gparams[j, 1] <= x <= gparams[j, 2]
                              and gparams[j, 3] <= y <= gparams[j, 4])
                    val = 2.0 if inside else 1.0
                else:
                    coord = x if gparams[j, 1] == 1.0 else y
                    cap = gparams[j, 2]
                    val = 1.0 + (coord if coord < cap else cap)
                batch_sums[j, b] += val

    _walk_batches_numba = kernel
    return kernel


def simulate_many(spec: RandomWalkSpec, steps: int, seed: int,
                  fspecs: Sequence[FunctionalSpec],
                  cert: Optional[DriftCertificate] = None,
                  engine: str = "auto") -> List[SimulationResult]:
    """One walk trajectory, several functionals accumulated in a pass.

    The trajectory starts at the origin and records g(Z(l)) for
    l = 1..steps.  Uniform variates are drawn up front from a Philox
    counter generator, so a seed pins the whole trajectory regardless
    of the execution engine.  The CI is a 20-batch batch-means interval
    with a Student-t quantile.
    """
    if steps < BATCH_COUNT or steps % BATCH_COUNT != 0:
        raise ValueError(
            f"steps must be a positive multiple of {BATCH_COUNT}")
    if engine not in ("auto", "numba", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    offsets, cumw, sizes = _region_tables(spec)
    gparams = _pack_functionals(fspecs, cert)
    u = np.random.Generator(np.random.Philox(seed)).random(steps)
    batch_sums = np.zeros((len(fspecs), BATCH_COUNT))
    if engine == "python":
        runner, engine_name = _walk_batches_python, "python"
    else:
        runner = _get_kernel()
        engine_name = ("python" if runner is _walk_batches_python
                       else "numba")
        if engine == "numba" and engine_name != "numba":
            raise RuntimeError("numba requested but not importable")
    runner(u, offsets, cumw, sizes, gparams, batch_sums)
    del u

    batch_size = steps // BATCH_COUNT
    quantile = float(student_t.ppf(0.975, BATCH_COUNT - 1))
    results = []
    for j, f in enumerate(fspecs):
        means = batch_sums[j] / batch_size
        estimate = float(means.mean())
        spread = float(means.std(ddof=1))
        half = quantile * spread / math.sqrt(BATCH_COUNT)
        results.append(SimulationResult(
            estimate=estimate, half_width=half, steps=steps, seed=seed,
            functional=f.label, engine=engine_name))
    return results


def simulate(spec: RandomWalkSpec, steps: int, seed: int,
             fspec: FunctionalSpec,
             cert: Optional[DriftCertificate] = None,
             engine: str = "auto") -> SimulationResult:
    """Monte-Carlo estimate of the time-averaged functional."""
    return simulate_many(spec, steps, seed, [fspec], cert=cert,
                         engine=engine)[0]

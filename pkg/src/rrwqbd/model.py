"""Two-dimensional reflecting random walks on the lattice quadrant.

The state space Z_+^2 splits into four regions: the origin, the two
boundary faces, and the interior.  Each region carries its own one-step
increment law, with increments bounded by 1 in each coordinate.  The
walk reflects at the axes because boundary laws exclude increments that
would leave the quadrant.

This module defines the walk specification, validates it, computes mean
drifts, decides the stability condition and the boundary negative-drift
condition, and constructs the cooperative-server two-node Jackson
network instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

Offset = Tuple[int, int]
State = Tuple[int, int]

ORIGIN = "origin"
FACE1 = "face1"       # horizontal axis, first coordinate positive
FACE2 = "face2"       # vertical axis, second coordinate positive
INTERIOR = "interior"

REGIONS = (ORIGIN, FACE1, FACE2, INTERIOR)

# Admissible increment support per region.  A walk on face 1 sits on the
# horizontal axis, so a -1 vertical move would exit the quadrant; the
# origin admits no negative moves at all.
SUPPORTS: Dict[str, frozenset] = {
    ORIGIN: frozenset((dx, dy) for dx in (0, 1) for dy in (0, 1)),
    FACE1: frozenset((dx, dy) for dx in (-1, 0, 1) for dy in (0, 1)),
    FACE2: frozenset((dx, dy) for dx in (0, 1) for dy in (-1, 0, 1)),
    INTERIOR: frozenset((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)),
}

SUM_TOL = 1e-12

# Side length of the finite window used by the irreducibility and
# aperiodicity checks in validate_spec.  A window this size exercises
# every region interaction; the check is a necessary condition, not a
# proof on the infinite space.
DEFAULT_CHECK_WINDOW = 30


@dataclass(frozen=True)
class TransitionLaw:
    """Increment distribution attached to one region.

    probs maps offsets (dx, dy) to probabilities.  Offsets with zero
    probability may be present or absent; support and normalization are
    enforced by validate_spec, not on construction.
    """

    region: str
    probs: Dict[Offset, float]

    def support(self) -> List[Offset]:
        return [m for m, p in self.probs.items() if p > 0.0]

    def prob(self, offset: Offset) -> float:
        return self.probs.get(offset, 0.0)


@dataclass(frozen=True)
class RandomWalkSpec:
    """A reflecting random walk given by one transition law per region."""

    laws: Dict[str, TransitionLaw]

    def law(self, region: str) -> TransitionLaw:
        return self.laws[region]


class MeanDrift(Tuple[float, float]):
    """Expected one-step increment (mu1, mu2) of a transition law."""

    __slots__ = ()

    def __new__(cls, mu1: float, mu2: float):
        return tuple.__new__(cls, (mu1, mu2))

    @property
    def mu1(self) -> float:
        return self[0]

    @property
    def mu2(self) -> float:
        return self[1]

    def __repr__(self) -> str:
        return f"MeanDrift(mu1={self[0]!r}, mu2={self[1]!r})"


@dataclass
class StabilityVerdict:
    """Outcome of the three-case stability test.

    stable is true iff at least one case holds; case reports the first
    matching one in the order A, B, C.  diagnostics lists every
    inequality evaluated, with its value, so near-boundary calls can be
    audited.
    """

    stable: bool
    case: Optional[str]
    diagnostics: List[str] = field(default_factory=list)


@dataclass
class Assumption2Verdict:
    """Negative drift along both faces plus the wedge orientation."""

    holds: bool
    diagnostics: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class JacksonParams:
    """Parameters of the two-node Jackson network with cooperative servers.

    Arrival rates lambda1, lambda2, service rates sigma1, sigma2 and
    routing probabilities q1, q2.  The four rates are rescaled on
    construction so they sum to one (uniformization); the qs must lie
    strictly inside (0, 1).
    """

    lambda1: float
    lambda2: float
    sigma1: float
    sigma2: float
    q1: float
    q2: float

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "sigma1", "sigma2"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("q1", "q2"):
            q = getattr(self, name)
            if not 0.0 < q < 1.0:
                raise ValueError(f"{name} must lie strictly in (0, 1)")
        total = self.lambda1 + self.lambda2 + self.sigma1 + self.sigma2
        if abs(total - 1.0) > SUM_TOL:
            for name in ("lambda1", "lambda2", "sigma1", "sigma2"):
                object.__setattr__(self, name, getattr(self, name) / total)


def region_of(state: State) -> str:
    """Classify a state of Z_+^2 into its region."""
    n1, n2 = state
    if n1 < 0 or n2 < 0:
        raise ValueError(f"state {state} outside the quadrant")
    if n1 == 0 and n2 == 0:
        return ORIGIN
    if n2 == 0:
        return FACE1
    if n1 == 0:
        return FACE2
    return INTERIOR


def mean_drift(law: TransitionLaw) -> MeanDrift:
    """Componentwise expectation of the increment distribution."""
    mu1 = 0.0
    mu2 = 0.0
    for (dx, dy), p in law.probs.items():
        mu1 += p * dx
        mu2 += p * dy
    return MeanDrift(mu1, mu2)


def wedge(x: Sequence[float], y: Sequence[float]) -> float:
    """Two-dimensional wedge product x1*y2 - x2*y1.

    Its sign encodes the angular orientation of y relative to x, which
    is what the stability cases compare.
    """
    return x[0] * y[1] - x[1] * y[0]


def validate_spec(spec: RandomWalkSpec,
                  window: int = DEFAULT_CHECK_WINDOW) -> List[str]:
    """Validate a walk specification; returns a list of violations.

    Checks, in order: all four regions present, every offset with
    positive probability lies in the region's admissible support,
    probabilities lie in [0, 1] and sum to one within 1e-12, and the
    induced chain restricted to the window {0..window}^2 is strongly
    connected and aperiodic.  An empty list means the spec is valid.

    The connectivity and aperiodicity checks are necessary conditions
    evaluated on a finite window, not proofs about the infinite chain.
    """
    violations: List[str] = []
    for region in REGIONS:
        if region not in spec.laws:
            violations.append(f"missing transition law for region {region}")
    if violations:
        return violations

    for region in REGIONS:
        law = spec.laws[region]
        if law.region != region:
            violations.append(
                f"law stored under {region} is tagged {law.region}")
        total = 0.0
        for offset, p in law.probs.items():
            if not (0.0 <= p <= 1.0):
                violations.append(
                    f"{region}: probability {p!r} at offset {offset} "
                    f"outside [0, 1]")
            total += p
            if p > 0.0 and offset not in SUPPORTS[region]:
                violations.append(
                    f"{region}: offset {offset} outside the admissible "
                    f"support for this region")
        if abs(total - 1.0) > SUM_TOL:
            violations.append(
                f"{region}: probabilities sum to {total!r}, not 1 "
                f"(tolerance 1e-12)")
    if violations:
        return violations

    violations.extend(_window_connectivity_violations(spec, window))
    return violations


def _window_adjacency(spec: RandomWalkSpec, window: int):
    """Forward adjacency of the chain restricted to {0..window}^2."""
    adj: Dict[State, List[State]] = {}
    for n1 in range(window + 1):
        for n2 in range(window + 1):
            s = (n1, n2)
            targets = []
            for (dx, dy), p in spec.laws[region_of(s)].probs.items():
                if p <= 0.0:
                    continue
                t = (n1 + dx, n2 + dy)
                if 0 <= t[0] <= window and 0 <= t[1] <= window:
                    targets.append(t)
            adj[s] = targets
    return adj


def _bfs(start: State, adj) -> Dict[State, int]:
    dist = {start: 0}
    queue = [start]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _window_connectivity_violations(spec: RandomWalkSpec,
                                    window: int) -> List[str]:
    violations = []
    adj = _window_adjacency(spec, window)
    origin = (0, 0)
    forward = _bfs(origin, adj)

    radj: Dict[State, List[State]] = {s: [] for s in adj}
    for u, targets in adj.items():
        for w in targets:
            radj[w].append(u)
    backward = _bfs(origin, radj)

    missing_fwd = [s for s in adj if s not in forward]
    missing_bwd = [s for s in adj if s not in backward]
    if missing_fwd:
        violations.append(
            f"window check: state {missing_fwd[0]} not reachable from the "
            f"origin within {{0..{window}}}^2 "
            f"({len(missing_fwd)} states total)")
    if missing_bwd:
        violations.append(
            f"window check: origin not reachable from state "
            f"{missing_bwd[0]} within {{0..{window}}}^2 "
            f"({len(missing_bwd)} states total)")
    if violations:
        return violations

    # Period of the strongly connected window graph: gcd of
    # d(u) + 1 - d(w) over all edges u -> w, where d is the BFS level.
    g = 0
    for u, targets in adj.items():
        for w in targets:
            g = math.gcd(g, forward[u] + 1 - forward[w])
            if g == 1:
                return []
    if g != 1:
        violations.append(
            f"window check: chain restricted to {{0..{window}}}^2 is "
            f"periodic with period {g}")
    return violations


def _case_a(mu_e, mu_f1, mu_f2, diag):
    checks = [
        ("mu1_interior < 0", mu_e.mu1, mu_e.mu1 < 0.0),
        ("mu2_interior < 0", mu_e.mu2, mu_e.mu2 < 0.0),
        ("wedge(interior, face1) < 0", wedge(mu_e, mu_f1),
         wedge(mu_e, mu_f1) < 0.0),
        ("wedge(interior, face2) > 0", wedge(mu_e, mu_f2),
         wedge(mu_e, mu_f2) > 0.0),
    ]
    ok = all(c[2] for c in checks)
    diag.extend(f"case A: {name} -> {value!r} ({'ok' if passed else 'fail'})"
                for name, value, passed in checks)
    return ok


def _case_b(mu_e, mu_f1, mu_f2, diag):
    checks = [
        ("mu1_interior >= 0", mu_e.mu1, mu_e.mu1 >= 0.0),
        ("mu2_interior < 0", mu_e.mu2, mu_e.mu2 < 0.0),
        ("wedge(interior, face1) < 0", wedge(mu_e, mu_f1),
         wedge(mu_e, mu_f1) < 0.0),
    ]
    if mu_f2.mu1 == 0.0:
        checks.append(("mu2_face2 < 0 (since mu1_face2 = 0)",
                       mu_f2.mu2, mu_f2.mu2 < 0.0))
    ok = all(c[2] for c in checks)
    diag.extend(f"case B: {name} -> {value!r} ({'ok' if passed else 'fail'})"
                for name, value, passed in checks)
    return ok


def _case_c(mu_e, mu_f1, mu_f2, diag):
    checks = [
        ("mu1_interior < 0", mu_e.mu1, mu_e.mu1 < 0.0),
        ("mu2_interior >= 0", mu_e.mu2, mu_e.mu2 >= 0.0),
        ("wedge(interior, face2) > 0", wedge(mu_e, mu_f2),
         wedge(mu_e, mu_f2) > 0.0),
    ]
    if mu_f1.mu2 == 0.0:
        checks.append(("mu1_face1 < 0 (since mu2_face1 = 0)",
                       mu_f1.mu1, mu_f1.mu1 < 0.0))
    ok = all(c[2] for c in checks)
    diag.extend(f"case C: {name} -> {value!r} ({'ok' if passed else 'fail'})"
                for name, value, passed in checks)
    return ok


def check_stability(spec: RandomWalkSpec) -> StabilityVerdict:
    """Evaluate the three-case stability condition on the mean drifts.

    Cases may overlap on parameter-space boundaries; the verdict reports
    the first matching case in the order A, B, C.  All inequalities are
    evaluated exactly as stated, strict versus non-strict.
    """
    mu_e = mean_drift(spec.law(INTERIOR))
    mu_f1 = mean_drift(spec.law(FACE1))
    mu_f2 = mean_drift(spec.law(FACE2))
    diag: List[str] = [
        f"mu_interior = ({mu_e.mu1!r}, {mu_e.mu2!r})",
        f"mu_face1 = ({mu_f1.mu1!r}, {mu_f1.mu2!r})",
        f"mu_face2 = ({mu_f2.mu1!r}, {mu_f2.mu2!r})",
    ]
    for case_name, case_fn in (("A", _case_a), ("B", _case_b),
                               ("C", _case_c)):
        if case_fn(mu_e, mu_f1, mu_f2, diag):
            return StabilityVerdict(True, case_name, diag)
    return StabilityVerdict(False, None, diag)


def check_assumption2(spec: RandomWalkSpec) -> Assumption2Verdict:
    """Negative own-coordinate drift on both faces, with positive wedge.

    Holds iff mu1_face1 < 0, mu2_face2 < 0 and
    wedge(mu_face1, mu_face2) > 0.  This is what guarantees a feasible
    positive tilt exists for the drift certificate.
    """
    mu_f1 = mean_drift(spec.law(FACE1))
    mu_f2 = mean_drift(spec.law(FACE2))
    w = wedge(mu_f1, mu_f2)
    checks = [
        ("mu1_face1 < 0", mu_f1.mu1, mu_f1.mu1 < 0.0),
        ("mu2_face2 < 0", mu_f2.mu2, mu_f2.mu2 < 0.0),
        ("wedge(face1, face2) > 0", w, w > 0.0),
    ]
    diag = [f"{name} -> {value!r} ({'ok' if passed else 'fail'})"
            for name, value, passed in checks]
    return Assumption2Verdict(all(c[2] for c in checks), diag)


def jackson_spec(params: JacksonParams) -> RandomWalkSpec:
    """Transition laws of the cooperative-server Jackson network.

    Uniformized to a discrete-time walk: arrivals move one step up in
    the corresponding coordinate, service completions move down or
    diagonally depending on routing, and while one node is empty both
    servers work at the occupied node (rate sigma1 + sigma2).
    """
    lam1, lam2 = params.lambda1, params.lambda2
    sig1, sig2 = params.sigma1, params.sigma2
    q1, q2 = params.q1, params.q2
    sig = sig1 + sig2

    origin = {(0, 0): sig, (1, 0): lam1, (0, 1): lam2}
    face1 = {
        (1, 0): lam1,
        (0, 1): lam2,
        (-1, 1): sig * q1,
        (-1, 0): sig * (1.0 - q1),
    }
    face2 = {
        (1, 0): lam1,
        (0, 1): lam2,
        (1, -1): sig * q2,
        (0, -1): sig * (1.0 - q2),
    }
    interior = {
        (1, 0): lam1,
        (0, 1): lam2,
        (-1, 1): sig1 * q1,
        (1, -1): sig2 * q2,
        (-1, 0): sig1 * (1.0 - q1),
        (0, -1): sig2 * (1.0 - q2),
    }
    return RandomWalkSpec(laws={
        ORIGIN: TransitionLaw(ORIGIN, origin),
        FACE1: TransitionLaw(FACE1, face1),
        FACE2: TransitionLaw(FACE2, face2),
        INTERIOR: TransitionLaw(INTERIOR, interior),
    })


def jackson_utilization(params: JacksonParams) -> Tuple[float, float]:
    """Node utilizations (rho1, rho2); the network is stable iff both < 1."""
    denom = 1.0 - params.q1 * params.q2
    rho1 = (params.lambda1 + params.lambda2 * params.q2) / (params.sigma1 * denom)
    rho2 = (params.lambda2 + params.lambda1 * params.q1) / (params.sigma2 * denom)
    return rho1, rho2


def step_distribution(spec: RandomWalkSpec,
                      state: State) -> Dict[State, float]:
    """One-step distribution from a state: the region law shifted there."""
    n1, n2 = state
    law = spec.law(region_of(state))
    out: Dict[State, float] = {}
    for (dx, dy), p in law.probs.items():
        if p <= 0.0:
            continue
        t = (n1 + dx, n2 + dy)
        if t[0] < 0 or t[1] < 0:
            raise ValueError(
                f"law for {law.region} moves {state} to {t}, outside the "
                f"quadrant; validate the spec first")
        out[t] = out.get(t, 0.0) + p
    return out

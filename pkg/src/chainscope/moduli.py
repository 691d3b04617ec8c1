"""Lipschitz-type moduli, continuity-class checks, and spike builders.

All moduli are finite suprema of |f(x)-f(y)| / d(x,y) over some pair set.
Conventions used throughout: an empty pair set has supremum 0, and a
zero-distance pair with differing values reports +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import ChainGraph
from .errors import (
    DegenerateSpace,
    EmptyFamily,
    MalformedInput,
    NonPositiveEpsilon,
    OverlappingBalls,
    ShortPrefix,
)
from .metric import MetricSpace
from .sequences import SequencePrefix, quasi_cauchy_test

__all__ = [
    "ScalarFunction",
    "ModulusReport",
    "WardResult",
    "EquiContinuityReport",
    "LpTailReport",
    "lipschitz_constant",
    "lits_modulus",
    "seq_lipschitz_constant",
    "local_lipschitz_profile",
    "ward_falsifier",
    "equi_chain_continuity_check",
    "lp_tail_criterion",
    "spike_function",
]


@dataclass(frozen=True)
class ScalarFunction:
    """Real values attached to every point of a space."""

    space: object
    values: np.ndarray
    name: str | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.space.n,):
            raise MalformedInput(
                f"function has {vals.shape} values for {self.space.n} points"
            )
        if not np.isfinite(vals).all():
            raise MalformedInput("function values must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, i):
        return float(self.values[self.space.check_index(i)])

    @classmethod
    def from_index_fn(cls, space, fn, name=None):
        return cls(space, [float(fn(i)) for i in range(space.n)], name)

    def to_json_dict(self):
        return {"values": [float(v) for v in self.values]}


@dataclass(frozen=True)
class ModulusReport:
    """A modulus value together with the pair that realizes it.

    witness holds space indices for the space-wide moduli and prefix
    positions for the sequence moduli; it is None exactly when no pair
    qualified (vacuous supremum 0).
    """

    kind: str
    constant: float
    scale: float | None = None
    witness: tuple | None = None

    def to_json_dict(self):
        return {
            "kind": self.kind,
            "constant": self.constant,
            "scale": self.scale,
            "witness": None if self.witness is None else list(self.witness),
        }


def _check_positive(value, name="eps"):
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise NonPositiveEpsilon(value)
    return value


def _sup_ratio(space, values, members=None, limit=None):
    """(constant, witness) of sup |f(x)-f(y)|/d(x,y) over pairs of members.

    Pairs at distance >= limit are excluded when limit is given.  First
    zero-distance pair with differing values short-circuits to +inf.
    Lexicographically first maximizing pair wins.
    """
    if members is None:
        members = np.arange(space.n)
    else:
        members = np.asarray(members, dtype=int)
    m = len(members)
    best = 0.0
    witness = None
    for a in range(m - 1):
        i = int(members[a])
        rest = members[a + 1:]
        d = space.pairwise(np.full(len(rest), i), rest)
        df = np.abs(values[rest] - values[i])
        if limit is not None:
            keep = d < limit
        else:
            keep = np.ones(len(rest), dtype=bool)
        zero = keep & (d == 0.0)
        if zero.any():
            hot = np.flatnonzero(zero & (df > 0.0))
            if hot.size:
                j = int(rest[hot[0]])
                return math.inf, (i, j)
            keep &= ~zero  # equal-value duplicates carry no information
        live = np.flatnonzero(keep)
        if not live.size:
            continue
        ratios = df[live] / d[live]
        top = int(np.argmax(ratios))
        if witness is None or ratios[top] > best:
            best = float(ratios[top])
            witness = (i, int(rest[live[top]]))
    return best, witness


def lipschitz_constant(f):
    """Global modulus: supremum of the pair ratio over the whole space."""
    if f.space.n == 1:
        raise DegenerateSpace("a single point admits no pair ratios")
    constant, witness = _sup_ratio(f.space, f.values)
    return ModulusReport("lipschitz", constant, None, witness)


def lits_modulus(f, delta):
    """Modulus over pairs strictly closer than delta."""
    delta = _check_positive(delta, "delta")
    if f.space.n == 1:
        raise DegenerateSpace("a single point admits no pair ratios")
    constant, witness = _sup_ratio(f.space, f.values, limit=delta)
    return ModulusReport("lits", constant, delta, witness)


def seq_lipschitz_constant(f, prefix, mode="consecutive"):
    """Pair-ratio supremum along a prefix.

    mode "consecutive" scans the steps (k, k+1); mode "all-pairs" scans
    every pair of positions.  Witness is a pair of prefix positions.
    """
    if len(prefix) < 2:
        raise ShortPrefix(len(prefix))
    idx = np.asarray(prefix.indices, dtype=int)
    vals = f.values[idx]
    if mode == "consecutive":
        d = prefix.gaps()
        df = np.abs(np.diff(vals))
        zero = d == 0.0
        hot = np.flatnonzero(zero & (df > 0.0))
        if hot.size:
            k = int(hot[0])
            return ModulusReport("qc-seq", math.inf, None, (k, k + 1))
        live = np.flatnonzero(~zero)
        if not live.size:
            return ModulusReport("qc-seq", 0.0, None, None)
        ratios = df[live] / d[live]
        top = int(np.argmax(ratios))
        k = int(live[top])
        return ModulusReport("qc-seq", float(ratios[top]), None, (k, k + 1))
    if mode != "all-pairs":
        raise MalformedInput(f"unknown sequence modulus mode {mode!r}")
    n = len(idx)
    best = 0.0
    witness = None
    for k in range(n - 1):
        d = prefix.space.pairwise(np.full(n - k - 1, idx[k]), idx[k + 1:])
        df = np.abs(vals[k + 1:] - vals[k])
        zero = d == 0.0
        hot = np.flatnonzero(zero & (df > 0.0))
        if hot.size:
            return ModulusReport(
                "cauchy-seq", math.inf, None, (k, k + 1 + int(hot[0]))
            )
        live = np.flatnonzero(~zero)
        if not live.size:
            continue
        ratios = df[live] / d[live]
        top = int(np.argmax(ratios))
        if witness is None or ratios[top] > best:
            best = float(ratios[top])
            witness = (k, k + 1 + int(live[top]))
    return ModulusReport("cauchy-seq", best, None, witness)


def local_lipschitz_profile(f, delta):
    """Per-point Lipschitz constant of f restricted to the open delta-ball."""
    delta = _check_positive(delta, "delta")
    space = f.space
    out = np.zeros(space.n)
    for x in range(space.n):
        ball = np.flatnonzero(space.distances_from(x) < delta)
        if len(ball) < 2:
            out[x] = 0.0
            continue
        constant, _ = _sup_ratio(space, f.values, members=ball)
        out[x] = constant
    return out


@dataclass(frozen=True)
class WardResult:
    """Outcome of the gap-transport search.

    status "witness": prefix passes the quasi-Cauchy test at the schedule
    while the image of its final step jumps by at least eps_img.  status
    "exhausted": the budget ran out or no candidate pair exists; this is
    never a continuity certificate.
    """

    status: str
    eps_img: float
    budget: int
    evaluations: int
    prefix: object | None = None
    pair: tuple | None = None
    image_gap: float | None = None

    @property
    def found(self):
        return self.status == "witness"

    def to_json_dict(self):
        out = {
            "status": self.status,
            "eps_img": self.eps_img,
            "budget": self.budget,
            "evaluations": self.evaluations,
        }
        if self.found:
            out["prefix"] = self.prefix.to_json_list()
            out["pair"] = list(self.pair)
            out["image_gap"] = self.image_gap
        return out


def ward_falsifier(f, space, eps_img, schedule, budget=1000):
    """Search for a schedule-consistent prefix whose image gap is large.

    Candidate pairs (a, b) with d(a, b) below the schedule's finest eps are
    tried in ascending distance order; each is wrapped into the prefix
    a, a, ..., a, b whose lone positive gap sits past every stage start, and
    the prefix is verified with quasi_cauchy_test before the image gap
    |f(b) - f(a)| >= eps_img is claimed.  Each verified prefix costs one
    evaluation from the budget.  Exhaustion is not a continuity proof.
    """
    eps_img = _check_positive(eps_img, "eps_img")
    budget = int(budget)
    if budget < 1:
        raise MalformedInput("budget must be at least 1")
    finest = schedule.finest_eps
    n = space.n
    pairs = []
    for i in range(n - 1):
        rest = np.arange(i + 1, n)
        d = space.pairwise(np.full(len(rest), i), rest)
        close = np.flatnonzero(d < finest)
        pairs.extend((float(d[c]), i, int(rest[c])) for c in close)
    pairs.sort()
    tail_len = schedule.stages[-1][1] + 1
    evals = 0
    for dist, a, b in pairs:
        if evals >= budget:
            break
        evals += 1
        prefix = SequencePrefix(space, (a,) * tail_len + (b,))
        if not quasi_cauchy_test(prefix, schedule).consistent:
            continue  # cannot happen for dist < finest; kept as verification
        gap = abs(f.values[b] - f.values[a])
        if gap >= eps_img:
            return WardResult(
                "witness", eps_img, budget, evals,
                prefix=prefix, pair=(a, b), image_gap=float(gap),
            )
    return WardResult("exhausted", eps_img, budget, evals)


def _violation_distances(space, values, eps):
    """Per point x: min distance to y with |f(y)-f(x)| >= eps (+inf if none)."""
    n = space.n
    out = np.full(n, math.inf)
    for x in range(n):
        d = space.distances_from(x)
        mask = np.abs(values - values[x]) >= eps
        if mask.any():
            out[x] = float(d[mask].min())
    return out


@dataclass(frozen=True)
class EquiContinuityReport:
    """Family-level continuity check result.

    In chain mode each function delegates to the best certificate inside
    its eps-chain component of the family (sup metric); in plain mode each
    function must answer for itself.  delta_by_point[x] is the largest
    scale below which every certificate's oscillation at x stays under eps.
    """

    eps: float
    mode: str  # "chain" | "plain"
    delta: float | None
    passed: bool
    certificates: dict
    delta_by_point: np.ndarray
    uniform_delta: float
    witness: tuple | None = None  # (x, f_index, partner, oscillation)

    def to_json_dict(self):
        out = {
            "eps": self.eps,
            "mode": self.mode,
            "delta": self.delta,
            "passed": self.passed,
            "certificates": {str(k): v for k, v in self.certificates.items()},
            "uniform_delta": self.uniform_delta,
            "delta_by_point": [float(v) for v in self.delta_by_point],
        }
        if self.witness is not None:
            x, fi, y, osc = self.witness
            out["witness"] = {
                "point": x, "function": fi, "partner": y, "oscillation": osc,
            }
        return out


def equi_chain_continuity_check(family, eps, chain=True, delta=None):
    """Check a family of functions for chain-delegated equi-continuity.

    With chain=True every function may delegate its modulus to the member
    of its eps-chain component (component of the family under the sup
    metric) whose worst-point violation distance is largest; with
    chain=False each function certifies for itself, which is the plain
    equi-continuity check.  With delta=None the verdict asks only for
    positive per-point scales; a fixed delta demands every per-point scale
    reach it.  Certificates are chosen per function and scale, not per
    point; that is the strictest reading of the quantifiers.
    """
    if not family:
        raise EmptyFamily("no functions to check")
    eps = _check_positive(eps)
    space = family[0].space
    for g in family[1:]:
        if g.space is not space:
            raise MalformedInput("family members live on different spaces")
    if delta is not None:
        delta = _check_positive(delta, "delta")
    values = np.vstack([g.values for g in family])
    viol = np.vstack(
        [_violation_distances(space, values[k], eps) for k in range(len(family))]
    )
    min_viol = viol.min(axis=1)

    certificates = {}
    if chain:
        fam_space = MetricSpace("function-sup", values, param=space.n)
        graph = ChainGraph(fam_space, eps)
        for members in graph.components():
            cert = members[0]
            for cand in members[1:]:
                if min_viol[cand] > min_viol[cert]:
                    cert = cand
            for k in members:
                certificates[k] = cert
    else:
        certificates = {k: k for k in range(len(family))}

    cert_per_fn = np.asarray([certificates[k] for k in range(len(family))])
    delta_by_point = viol[cert_per_fn].min(axis=0)
    uniform = float(delta_by_point.min())
    floor = 0.0 if delta is None else delta
    passed = uniform > floor if delta is None else uniform >= floor

    witness = None
    if not passed:
        x = int(np.argmin(delta_by_point))
        fi = int(np.argmin(viol[cert_per_fn, x]))
        g = int(cert_per_fn[fi])
        d = space.distances_from(x)
        radius = delta if delta is not None else math.inf
        ball = np.flatnonzero(d < radius)
        osc = np.abs(values[g, ball] - values[g, x])
        top = int(np.argmax(osc))
        witness = (x, fi, int(ball[top]), float(osc[top]))
    return EquiContinuityReport(
        eps=eps,
        mode="chain" if chain else "plain",
        delta=delta,
        passed=bool(passed),
        certificates=certificates,
        delta_by_point=delta_by_point,
        uniform_delta=uniform,
        witness=witness,
    )


@dataclass(frozen=True)
class LpTailReport:
    """Which family members can delegate to a small-tail neighbor."""

    passed: bool
    p: float
    eps: float
    n0: int
    certificates: dict
    failures: tuple

    def to_json_dict(self):
        return {
            "passed": self.passed,
            "p": self.p,
            "eps": self.eps,
            "n0": self.n0,
            "certificates": {str(k): v for k, v in self.certificates.items()},
            "failures": list(self.failures),
        }


def lp_tail_criterion(family, p, eps, n0):
    """Every member must chain at scale eps to one with small p-tail mass.

    family is a list of sparse vectors under the p-norm metric; x certifies
    via the first member y of its eps-chain component whose mass beyond
    coordinate n0 is strictly below eps^p.
    """
    if not family:
        raise EmptyFamily("no vectors to check")
    p = float(p)
    if p < 1:
        raise MalformedInput(f"p must be >= 1, got {p}")
    eps = _check_positive(eps)
    n0 = int(n0)
    if n0 < 0:
        raise MalformedInput("n0 must be nonnegative")
    space = MetricSpace("p-norm-sparse", list(family), param=p)
    graph = ChainGraph(space, eps)
    tails = np.asarray([v.tail_mass(p, n0) for v in family])
    bound = eps**p
    certificates = {}
    failures = []
    for x in range(len(family)):
        members = graph.component_members(x)
        y = next((m for m in members if tails[m] < bound), None)
        if y is None:
            failures.append(x)
        else:
            certificates[x] = y
    return LpTailReport(
        passed=not failures,
        p=p,
        eps=eps,
        n0=n0,
        certificates=certificates,
        failures=tuple(failures),
    )


def spike_function(space, centers, radii, heights):
    """Tent spikes on disjoint strict balls, zero elsewhere.

    Inside ball k the value ramps linearly from heights[k] at the center to
    0 at the ball edge.  A point lying inside two balls is rejected.
    """
    centers = [space.check_index(c) for c in centers]
    radii = [float(r) for r in radii]
    heights = [float(h) for h in heights]
    if not len(centers) == len(radii) == len(heights):
        raise MalformedInput("centers, radii, heights must align")
    for r in radii:
        if not r > 0 or not math.isfinite(r):
            raise MalformedInput(f"spike radius must be positive, got {r}")
    values = np.zeros(space.n)
    owner = np.full(space.n, -1)
    for k, (c, r, h) in enumerate(zip(centers, radii, heights)):
        d = space.distances_from(c)
        inside = np.flatnonzero(d < r)
        clash = inside[owner[inside] >= 0]
        if clash.size:
            x = int(clash[0])
            raise OverlappingBalls(int(owner[x]), k, x)
        owner[inside] = k
        values[inside] = h * (1.0 - d[inside] / r)
    return ScalarFunction(space, values, name="spike")

"""Level-window decomposition and the small-step uniform approximant.

Overlapping open windows ((n-1)eps, (n+1)eps) slice the range of f; each
window gets a cutoff g_n measuring the distance to its complement, and the
normalized window-index average h turns the slices back into a function.
eps*h approximates f uniformly within eps while moving slowly between
nearby points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentLevels,
    MalformedInput,
    NonPositiveEpsilon,
    NoValidDelta,
)
from .moduli import ScalarFunction
from .sequences import quasi_cauchy_test

__all__ = [
    "LevelDecomposition",
    "BoundsReport",
    "level_sets",
    "partition_functions",
    "approximate",
    "proof_bounds_report",
]


def _check_eps(eps):
    eps = float(eps)
    if not eps > 0 or not math.isfinite(eps):
        raise NonPositiveEpsilon(eps)
    return eps


def level_sets(f, eps):
    """Window membership: x lands in every n with (n-1)eps < f(x) < (n+1)eps.

    The inequalities are strict with no tolerance, so a value sitting
    exactly on a window boundary n*eps belongs to window n alone.
    """
    eps = _check_eps(eps)
    levels = {}
    for x in range(f.space.n):
        t = f.values[x] / eps
        base = math.floor(t)
        for n in (base, base + 1):
            if (n - 1) * eps < f.values[x] < (n + 1) * eps:
                levels.setdefault(n, []).append(x)
    return {n: sorted(members) for n, members in sorted(levels.items())}


def partition_functions(space, levels):
    """Window cutoffs g_n(x) = min(1, d(x, complement of C_n)) and their sum.

    d(x, empty set) is +inf, so a window holding the whole space
    contributes the constant 1.  The sum g must land in (0, 2]: a zero
    would mean some point touches the complement of every window that
    contains its value, which only zero-distance twins with clashing
    values can produce.
    """
    n_pts = space.n
    g_parts = {}
    total = np.zeros(n_pts)
    covered = np.zeros(n_pts, dtype=bool)
    for n, members in levels.items():
        vals = np.zeros(n_pts)
        comp = np.asarray(
            sorted(set(range(n_pts)) - set(members)), dtype=int
        )
        for x in members:
            if comp.size == 0:
                vals[x] = 1.0
            else:
                d = space.pairwise(np.full(comp.size, x), comp).min()
                vals[x] = min(1.0, float(d))
        g_parts[n] = ScalarFunction(space, vals, name=f"g[{n}]")
        total += vals
        covered[list(members)] = True
    if not covered.all():
        missing = int(np.flatnonzero(~covered)[0])
        raise InconsistentLevels(f"point {missing} lies in no window")
    if not (total > 0).all():
        dead = int(np.flatnonzero(total <= 0)[0])
        raise InconsistentLevels(
            f"g({dead}) = 0: a zero-distance twin with a clashing value "
            "touches the complement of every window containing the point"
        )
    if not (total <= 2.0).all():
        worst = int(np.argmax(total))
        raise InconsistentLevels(
            f"g({worst}) = {total[worst]} exceeds 2; windows overlap too much"
        )
    return g_parts, ScalarFunction(space, total, name="g")


@dataclass(frozen=True)
class LevelDecomposition:
    """Everything the construction produces for one (f, eps)."""

    f: ScalarFunction
    eps: float
    levels: dict
    g_parts: dict
    g: ScalarFunction
    h: ScalarFunction
    approx: ScalarFunction

    @property
    def sup_error(self):
        return float(np.max(np.abs(self.approx.values - self.f.values)))

    def to_json_dict(self):
        return {
            "eps": self.eps,
            "levels": {str(n): list(m) for n, m in self.levels.items()},
            "g": [float(v) for v in self.g.values],
            "h": [float(v) for v in self.h.values],
            "sup_error": self.sup_error,
        }


def approximate(f, eps):
    """Run the whole pipeline and verify its guarantees.

    The sup-error bound |eps*h - f| < eps and the window-sum bound
    0 < g <= 2 are structural: a violation is an implementation bug, so
    both are enforced with hard assertions rather than returned as data.
    """
    eps = _check_eps(eps)
    levels = level_sets(f, eps)
    g_parts, g = partition_functions(f.space, levels)
    weighted = np.zeros(f.space.n)
    for n, part in g_parts.items():
        weighted += n * part.values
    h_vals = weighted / g.values
    h = ScalarFunction(f.space, h_vals, name="h")
    approx = ScalarFunction(f.space, eps * h_vals, name="approx")
    decomp = LevelDecomposition(f, eps, levels, g_parts, g, h, approx)
    if not decomp.sup_error < eps:
        raise AssertionError(
            f"sup error {decomp.sup_error} failed to stay below {eps}; "
            "the level construction is broken"
        )
    return decomp


@dataclass(frozen=True)
class BoundsReport:
    """Measured slopes of g and h along a prefix tail against their bounds.

    delta is the largest realized distance below which f moves less than
    eps/4 around every prefix point; the h slope answers to 10/delta^2 and
    the g slope to the constant 3.  Margins are the worst-case slack,
    sharp values the largest measured ratios.
    """

    eps: float
    delta: float
    n0: int
    pairs_checked: int
    g_bound_ok: bool
    h_bound_ok: bool
    g_margin: float
    h_margin: float
    g_sharp: float
    h_sharp: float
    violations: tuple

    @property
    def all_ok(self):
        return self.g_bound_ok and self.h_bound_ok

    def to_json_dict(self):
        return {
            "eps": self.eps,
            "delta": self.delta,
            "n0": self.n0,
            "pairs_checked": self.pairs_checked,
            "g_bound_ok": self.g_bound_ok,
            "h_bound_ok": self.h_bound_ok,
            "g_margin": self.g_margin,
            "h_margin": self.h_margin,
            "g_sharp": self.g_sharp,
            "h_sharp": self.h_sharp,
            "violations": [list(v) for v in self.violations],
        }


def proof_bounds_report(decomp, prefix, schedule):
    """Check the two slope estimates along a schedule-consistent prefix.

    The prefix must pass the quasi-Cauchy test at the supplied schedule;
    pairs from the first stage start onward are then measured.  delta is
    derived from the data: the largest realized-distance breakpoint whose
    open balls around every prefix point confine f within eps/4.  Only a
    zero-distance pair with values eps/4 apart (or a space with no
    positive distances at all) leaves no valid breakpoint.
    """
    if not quasi_cauchy_test(prefix, schedule).consistent:
        raise MalformedInput(
            "prefix is not quasi-Cauchy-consistent at the supplied schedule"
        )
    space = decomp.f.space
    f_vals = decomp.f.values
    quarter = decomp.eps / 4.0

    min_viol = math.inf
    for x in set(prefix.indices):
        d = space.distances_from(x)
        mask = np.abs(f_vals - f_vals[x]) >= quarter
        if mask.any():
            min_viol = min(min_viol, float(d[mask].min()))
    breakpoints = space.realized_distances()
    if math.isinf(min_viol):
        if breakpoints.size == 0:
            raise NoValidDelta(
                "space realizes no positive distance to anchor delta"
            )
        delta = float(breakpoints[-1])
    elif min_viol <= 0:
        raise NoValidDelta(
            "a zero-distance pair moves f by eps/4; no positive scale works"
        )
    else:
        delta = min_viol  # itself a realized distance, hence the largest
        # breakpoint compatible with the containment

    n0 = schedule.first_start
    g_vals = decomp.g.values
    h_vals = decomp.h.values
    idx = np.asarray(prefix.indices, dtype=int)
    gaps = prefix.gaps()
    h_const = 10.0 / delta**2

    pairs = 0
    g_ok = True
    h_ok = True
    g_margin = math.inf
    h_margin = math.inf
    g_sharp = 0.0
    h_sharp = 0.0
    violations = []
    for k in range(n0, len(idx) - 1):
        a, b = idx[k], idx[k + 1]
        d = float(gaps[k])
        dg = abs(float(g_vals[b] - g_vals[a]))
        dh = abs(float(h_vals[b] - h_vals[a]))
        pairs += 1
        if dg > 3.0 * d:
            g_ok = False
            violations.append(("g", k, dg, 3.0 * d))
        if dh > h_const * d:
            h_ok = False
            violations.append(("h", k, dh, h_const * d))
        g_margin = min(g_margin, 3.0 * d - dg)
        h_margin = min(h_margin, h_const * d - dh)
        if d > 0:
            g_sharp = max(g_sharp, dg / d)
            h_sharp = max(h_sharp, dh / d)
    return BoundsReport(
        eps=decomp.eps,
        delta=delta,
        n0=n0,
        pairs_checked=pairs,
        g_bound_ok=g_ok,
        h_bound_ok=h_ok,
        g_margin=g_margin,
        h_margin=h_margin,
        g_sharp=g_sharp,
        h_sharp=h_sharp,
        violations=tuple(violations),
    )

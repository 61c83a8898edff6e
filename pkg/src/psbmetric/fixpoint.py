"""Picard iteration with convergence, Cauchy, and envelope diagnostics."""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass

from .comparison import MATKOWSKI, ComparisonFn
from .contraction import SelfMap
from .errors import NotAFixedPoint, TraceTooShort
from .numerics import leq, point_label, point_sort_key, points_close
from .spaces import PartialSbSpace, evaluate_metric

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 1000
DEFAULT_TAIL = 8


@dataclass(frozen=True)
class IterationTrace:
    orbit: tuple
    gaps: tuple
    self_distances: tuple
    converged: bool
    limit: object
    limit_gap: float | None

    def to_dict(self) -> dict:
        return {
            "orbit": [point_label(x) for x in self.orbit],
            "gaps": list(self.gaps),
            "self_distances": list(self.self_distances),
            "converged": self.converged,
            "limit": None if self.limit is None else point_label(self.limit),
            "limit_gap": self.limit_gap,
        }


def picard_iterate(
    space: PartialSbSpace,
    mapping: SelfMap,
    a0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> IterationTrace:
    """Iterate a_{k+1} = S(a_k) until the orbit repeats its last point
    (exactly for discrete points, within tol for continuous ones) or the
    iteration budget runs out. Non-convergence is a reported outcome."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    orbit = [a0]
    converged = False
    for _ in range(max_iter):
        nxt = mapping(orbit[-1])
        orbit.append(nxt)
        if points_close(nxt, orbit[-2], tol):
            converged = True
            break
    gaps = tuple(
        evaluate_metric(space, orbit[k], orbit[k], orbit[k + 1])
        for k in range(len(orbit) - 1)
    )
    self_distances = tuple(evaluate_metric(space, x, x, x) for x in orbit)
    return IterationTrace(
        orbit=tuple(orbit),
        gaps=gaps,
        self_distances=self_distances,
        converged=converged,
        limit=orbit[-1] if converged else None,
        limit_gap=gaps[-1] if converged else None,
    )


def verify_fixed_point(space: PartialSbSpace, mapping: SelfMap, a, tol: float = DEFAULT_TOL):
    """(is_fixed, self_distance_zero): S(a) = a, and dist(a,a,a) <= tol.
    The two conclusions are independent checks."""
    is_fixed = mapping(a) == a
    self_distance_zero = evaluate_metric(space, a, a, a) <= tol
    return is_fixed, self_distance_zero


@dataclass(frozen=True)
class ConvergenceReport:
    gap_monotone_nonincreasing: bool
    gap_limit: float
    cauchy_pairs_checked: int
    max_pair_deviation: float
    self_distance_at_limit: float

    def to_dict(self) -> dict:
        return {
            "gap_monotone_nonincreasing": self.gap_monotone_nonincreasing,
            "gap_limit": self.gap_limit,
            "cauchy_pairs_checked": self.cauchy_pairs_checked,
            "max_pair_deviation": self.max_pair_deviation,
            "self_distance_at_limit": self.self_distance_at_limit,
        }


def cauchy_diagnostic(space: PartialSbSpace, trace: IterationTrace, tail: int = DEFAULT_TAIL) -> ConvergenceReport:
    """Pairwise distances over the last `tail` orbit points, compared against
    the self-distance at the trace's final point."""
    if tail < 1:
        raise ValueError("tail must be >= 1")
    if len(trace.orbit) < tail + 2:
        raise TraceTooShort(f"need at least {tail + 2} orbit points, have {len(trace.orbit)}")
    window = trace.orbit[-tail:]
    last = trace.orbit[-1]
    reference = evaluate_metric(space, last, last, last)
    deviation = 0.0
    pairs = 0
    for i, u in enumerate(window):
        for j, v in enumerate(window):
            if i == j:
                continue
            pairs += 1
            deviation = max(deviation, abs(evaluate_metric(space, u, u, v) - reference))
    monotone = all(leq(b, a) for a, b in zip(trace.gaps, trace.gaps[1:]))
    return ConvergenceReport(
        gap_monotone_nonincreasing=monotone,
        gap_limit=trace.gaps[-1],
        cauchy_pairs_checked=pairs,
        max_pair_deviation=deviation,
        self_distance_at_limit=reference,
    )


def matkowski_envelope_check(trace: IterationTrace, fn: ComparisonFn):
    """gaps[k] <= fn^k(gaps[0]) for all k; returns (ok, first violating index)."""
    if fn.kind != MATKOWSKI:
        raise ValueError("envelope check needs a Matkowski-tagged comparison function")
    if not trace.gaps:
        return True, None
    envelope = trace.gaps[0]
    for k, gap in enumerate(trace.gaps):
        if k > 0:
            envelope = fn(envelope)
        if not leq(gap, envelope):
            return False, k
    return True, None


def uniqueness_check(space: PartialSbSpace, mapping: SelfMap, sample, claimed, tol: float = DEFAULT_TOL):
    """True when no sampled point other than `claimed` is fixed; otherwise
    False with the first counterexample in sorted point order."""
    is_fixed, _ = verify_fixed_point(space, mapping, claimed, tol)
    if not is_fixed:
        raise NotAFixedPoint(f"{point_label(claimed)} is not fixed by {mapping.name}")
    for x in sorted(sample, key=point_sort_key):
        if x == claimed:
            continue
        if mapping(x) == x:
            return False, x
    return True, None


def trace_to_csv(trace: IterationTrace) -> str:
    """Rows of (k, a_k, gap_k); the final row has no gap."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["k", "a_k", "gap_k"])
    for k, x in enumerate(trace.orbit):
        gap = trace.gaps[k] if k < len(trace.gaps) else ""
        writer.writerow([k, point_label(x), gap])
    return buffer.getvalue()

"""Carriers, triple-distance evaluators, and axiom checking.

A space bundles a carrier (explicit finite point list, or isolated points
plus truncated real intervals), a three-argument distance, and a relaxation
coefficient t >= 1. Validity against an axiom set is a checked property, not
a construction guarantee, so deliberately broken tables are representable
for counterexample work.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Mapping

from .errors import (
    IncompleteTable,
    InfeasibleExhaustive,
    NegativeValue,
    ParseError,
    UnknownBuiltin,
    UnknownPoint,
)
from .numerics import leq, point_label, point_sort_key, values_equal

Point = int | float | str

DEFAULT_SAMPLE_COUNT = 32
DEFAULT_REGION_BOUND = 64


# --------------------------------------------------------------------------
# Carriers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteCarrier:
    """Explicit finite point list, duplicates rejected."""

    points: tuple

    def __post_init__(self):
        if not self.points:
            raise ValueError("carrier must contain at least one point")
        if len(set(self.points)) != len(self.points):
            raise ValueError("carrier points must be distinct")


@dataclass(frozen=True)
class RegionCarrier:
    """Isolated points plus real intervals.

    Intervals are (lo, hi) pairs with hi = None for an unbounded ray;
    sampling and witness searches truncate unbounded ends at `bound`.
    """

    isolated: tuple = ()
    intervals: tuple = ()
    bound: int | float = DEFAULT_REGION_BOUND

    def truncated_intervals(self, cap=None):
        cap = self.bound if cap is None else min(cap, self.bound)
        spans = []
        for lo, hi in self.intervals:
            hi = cap if hi is None else min(hi, cap)
            if hi >= lo:
                spans.append((lo, hi))
        return spans


Carrier = FiniteCarrier | RegionCarrier


# --------------------------------------------------------------------------
# Triple metrics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TabulatedMetric:
    """Distance given by an explicit value per ordered triple of points."""

    points: tuple
    table: Mapping

    def __call__(self, p, q, r):
        try:
            return self.table[(p, q, r)]
        except KeyError:
            for x in (p, q, r):
                if x not in self.points:
                    raise UnknownPoint(f"point {point_label(x)} is not in the carrier") from None
            raise IncompleteTable(
                f"no table entry for triple ({point_label(p)}, {point_label(q)}, {point_label(r)})"
            ) from None


@dataclass(frozen=True)
class RuleMetric:
    """Distance given by a named analytic rule."""

    name: str
    rule: Callable

    def __call__(self, p, q, r):
        return self.rule(p, q, r)


def quintic(p, q, r):
    """Fifth-power distance: p^5 when all equal, 2(p^5+r^5) when p=q only,
    p^5+q^5+r^5 otherwise. Integer points stay in exact integer arithmetic."""
    if p == q == r:
        return p ** 5
    if p == q:
        return 2 * (p ** 5 + r ** 5)
    return p ** 5 + q ** 5 + r ** 5


@dataclass(frozen=True)
class PartialSbSpace:
    carrier: Carrier
    metric: TabulatedMetric | RuleMetric
    coefficient: int | float = 1

    def __post_init__(self):
        if self.coefficient < 1:
            raise ValueError("coefficient must be >= 1")


def evaluate_metric(space: PartialSbSpace, p, q, r):
    """Evaluate the space's triple distance at (p, q, r)."""
    return space.metric(p, q, r)


def exhaustive_points(space: PartialSbSpace) -> tuple:
    if isinstance(space.carrier, FiniteCarrier):
        return space.carrier.points
    raise InfeasibleExhaustive("exhaustive enumeration needs a finite carrier")


def sample_carrier(space: PartialSbSpace, count: int = DEFAULT_SAMPLE_COUNT, seed: int = 0) -> list:
    """Deterministic point sample of the carrier.

    Finite carriers return all their points (count ignored). Region carriers
    return every isolated point plus a grid+jitter sample of the truncated
    continuous parts, count points in total; repeatable for fixed (count, seed).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    carrier = space.carrier
    if isinstance(carrier, FiniteCarrier):
        return list(carrier.points)
    rng = random.Random(f"psbm:sample:{seed}")
    points = list(carrier.isolated)
    spans = carrier.truncated_intervals()
    remaining = max(0, count - len(points))
    if not spans or remaining == 0:
        return points
    total = sum(hi - lo for lo, hi in spans)
    if total == 0:
        return points + [lo for lo, _ in spans]
    for i, (lo, hi) in enumerate(spans):
        if i == len(spans) - 1:
            m = remaining - sum(
                max(1, round(remaining * (h - l) / total)) for l, h in spans[:-1]
            )
            m = max(1, m)
        else:
            m = max(1, round(remaining * (hi - lo) / total))
        width = (hi - lo) / m
        for cell in range(m):
            points.append(lo + (cell + rng.uniform(0.1, 0.9)) * width)
    return points


# --------------------------------------------------------------------------
# Axiom sets
# --------------------------------------------------------------------------

class AxiomSet(Enum):
    S_METRIC = "s-metric"
    PARTIAL_S = "partial-s"
    SB_METRIC = "sb-metric"
    PARTIAL_SB = "partial-sb"


@dataclass(frozen=True)
class Violation:
    axiom: int
    witness: tuple
    lhs: float
    rhs: float


@dataclass(frozen=True)
class AxiomReport:
    variant: AxiomSet
    checked_count: int
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "checked": self.checked_count,
            "passed": self.passed,
            "violations": [
                {
                    "axiom": v.axiom,
                    "witness": [point_label(x) for x in v.witness],
                    "lhs": v.lhs,
                    "rhs": v.rhs,
                }
                for v in self.violations
            ],
        }


def _all_equal(*values) -> bool:
    first = values[0]
    return all(values_equal(first, v) for v in values[1:])


def _check_zero_iff(space, tpl):
    u, v, w = tpl
    val = space.metric(u, v, w)
    if u == v == w and not values_equal(val, 0):
        return (val, 0)
    if values_equal(val, 0) and not (u == v == w):
        return (val, 0)
    return None


def _check_partial_s_identity(space, tpl):
    # u = v iff all four of S(u,v,w), S(u,u,u), S(v,v,v), S(w,w,w) agree.
    u, v, w = tpl
    val = space.metric(u, v, w)
    selfs = (space.metric(u, u, u), space.metric(v, v, v), space.metric(w, w, w))
    agrees = _all_equal(val, *selfs)
    if (u == v) and not agrees:
        return (val, selfs[0])
    if agrees and not (u == v):
        return (val, selfs[0])
    return None


def _check_psb_identity(space, tpl):
    # p = q = r iff the triple value equals all three self-distances.
    p, q, r = tpl
    val = space.metric(p, q, r)
    selfs = (space.metric(p, p, p), space.metric(q, q, q), space.metric(r, r, r))
    agrees = _all_equal(val, *selfs)
    if (p == q == r) and not agrees:
        return (val, selfs[0])
    if agrees and not (p == q == r):
        return (val, selfs[0])
    return None


def _check_self_min(space, tpl):
    p, q, r = tpl
    lhs = space.metric(p, p, p)
    rhs = space.metric(p, q, r)
    if not leq(lhs, rhs):
        return (lhs, rhs)
    return None


def _check_symmetry(space, tpl):
    p, q = tpl
    a = space.metric(p, p, q)
    b = space.metric(q, q, p)
    if not values_equal(a, b):
        return (a, b)
    return None


def _rectangle(space, tpl, scaled: bool, partial: bool):
    p, q, r, s = tpl
    lhs = space.metric(p, q, r)
    total = space.metric(p, p, s) + space.metric(q, q, s) + space.metric(r, r, s)
    rhs = space.coefficient * total if scaled else total
    if partial:
        rhs = rhs - space.metric(s, s, s)
    if not leq(lhs, rhs):
        return (lhs, rhs)
    return None


def _check_s_triangle(space, tpl):
    return _rectangle(space, tpl, scaled=False, partial=False)


def _check_partial_s_rectangle(space, tpl):
    return _rectangle(space, tpl, scaled=False, partial=True)


def _check_sb_rectangle(space, tpl):
    return _rectangle(space, tpl, scaled=True, partial=False)


def _check_psb_rectangle(space, tpl):
    return _rectangle(space, tpl, scaled=True, partial=True)


# (axiom index, tuple arity, checker); exactly the listed axioms per variant.
_AXIOMS = {
    AxiomSet.S_METRIC: (
        (1, 3, _check_zero_iff),
        (2, 4, _check_s_triangle),
    ),
    AxiomSet.PARTIAL_S: (
        (1, 3, _check_partial_s_identity),
        (2, 3, _check_self_min),
        (3, 2, _check_symmetry),
        (4, 4, _check_partial_s_rectangle),
    ),
    AxiomSet.SB_METRIC: (
        (1, 3, _check_zero_iff),
        (2, 2, _check_symmetry),
        (3, 4, _check_sb_rectangle),
    ),
    AxiomSet.PARTIAL_SB: (
        (1, 3, _check_psb_identity),
        (2, 3, _check_self_min),
        (3, 2, _check_symmetry),
        (4, 4, _check_psb_rectangle),
    ),
}


def check_axioms(
    space: PartialSbSpace,
    variant: AxiomSet = AxiomSet.PARTIAL_SB,
    sample_count: int | None = None,
    seed: int = 0,
    pool_size: int = DEFAULT_SAMPLE_COUNT,
) -> AxiomReport:
    """Check every axiom of `variant` over exhaustive or sampled point tuples.

    sample_count None means exhaustive enumeration (finite carriers only);
    otherwise that many quadruples are drawn from a deterministic carrier
    sample and lower-arity axioms see the quadruples' leading coordinates,
    so any sampled violation is also found by the exhaustive scan.
    """
    axioms = _AXIOMS[variant]
    if sample_count is None:
        pts = exhaustive_points(space)

        def tuples_of(arity: int) -> Iterator[tuple]:
            return itertools.product(pts, repeat=arity)
    else:
        if sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        pool = sample_carrier(space, count=pool_size, seed=seed)
        rng = random.Random(f"psbm:axioms:{seed}")
        quads = [tuple(rng.choice(pool) for _ in range(4)) for _ in range(sample_count)]

        def tuples_of(arity: int) -> Iterator[tuple]:
            return (q[:arity] for q in quads)

    checked = 0
    found = {}
    for index, arity, checker in axioms:
        for tpl in tuples_of(arity):
            checked += 1
            bad = checker(space, tpl)
            if bad is not None:
                found.setdefault((index, tpl), bad)
    violations = tuple(
        Violation(index, tpl, lhs, rhs)
        for (index, tpl), (lhs, rhs) in sorted(
            found.items(),
            key=lambda kv: (kv[0][0], tuple(point_sort_key(x) for x in kv[0][1])),
        )
    )
    return AxiomReport(variant, checked, violations)


# --------------------------------------------------------------------------
# Builtin spaces
# --------------------------------------------------------------------------

_TWO_POINT_A_TABLE = {
    (1, 1, 1): 8, (1, 1, 2): 8, (2, 2, 1): 8,
    (1, 2, 1): 8, (2, 1, 1): 8, (1, 2, 2): 8,
    (2, 2, 2): 4, (2, 1, 2): 4,
}

_TWO_POINT_B_TABLE = {
    (1, 1, 1): 4, (2, 2, 2): 4,
    (1, 1, 2): 8, (2, 2, 1): 8, (1, 2, 1): 8,
    (2, 1, 1): 8, (1, 2, 2): 8, (2, 1, 2): 8,
}

BUILTIN_SPACES = ("quintic_ray", "two_point_a", "two_point_b", "quintic_gap")


def builtin_space(name: str) -> PartialSbSpace:
    """Return a registered space: quintic_ray, two_point_a, two_point_b,
    or quintic_gap. All carry coefficient t = 1."""
    if name == "quintic_ray":
        return PartialSbSpace(
            RegionCarrier(intervals=((1, None),)), RuleMetric("quintic", quintic)
        )
    if name == "quintic_gap":
        return PartialSbSpace(
            RegionCarrier(isolated=(0, 3), intervals=((4, None),)),
            RuleMetric("quintic", quintic),
        )
    if name == "two_point_a":
        return tabulated_space((1, 2), _TWO_POINT_A_TABLE)
    if name == "two_point_b":
        return tabulated_space((1, 2), _TWO_POINT_B_TABLE)
    raise UnknownBuiltin(f"no builtin space named {name!r}")


def tabulated_space(points, table, coefficient=1) -> PartialSbSpace:
    """Build a finite tabulated space, requiring a value for every ordered
    triple. Axiom validity is NOT checked here; use check_axioms."""
    points = tuple(points)
    carrier = FiniteCarrier(points)
    for tpl in itertools.product(points, repeat=3):
        if tpl not in table:
            labels = ", ".join(point_label(x) for x in tpl)
            raise IncompleteTable(f"no table entry for triple ({labels})")
    return PartialSbSpace(carrier, TabulatedMetric(points, dict(table)), coefficient)


# --------------------------------------------------------------------------
# Space files
# --------------------------------------------------------------------------

def parse_point(token: str):
    """Integer if the token looks like one, then float, else a string label."""
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        return token


def _parse_number(token: str, where: str):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"{where}: {token!r} is not a number") from None


def load_tabulated_space(text: str) -> PartialSbSpace:
    """Parse the line-based space-file format.

    Line 1: `points: <label> ...`; line 2: `coefficient: <real>`; every other
    non-comment line `<i> <j> <k> <value>`. `#` starts a comment. Each ordered
    triple must appear exactly once; missing triples are an error.
    """
    lines = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append(stripped)
    if len(lines) < 2:
        raise ParseError("space file needs a points line and a coefficient line")

    head = lines[0]
    if not head.startswith("points:"):
        raise ParseError("first line must start with 'points:'")
    labels = [parse_point(tok) for tok in head[len("points:"):].split()]
    if not labels:
        raise ParseError("empty point list")
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate carrier points")

    coeff_line = lines[1]
    if not coeff_line.startswith("coefficient:"):
        raise ParseError("second line must start with 'coefficient:'")
    coefficient = _parse_number(coeff_line[len("coefficient:"):].strip(), "coefficient")
    if coefficient < 1:
        raise ParseError("coefficient must be >= 1")

    known = set(labels)
    table = {}
    for line in lines[2:]:
        tokens = line.split()
        if len(tokens) != 4:
            raise ParseError(f"expected '<i> <j> <k> <value>', got {line!r}")
        triple = tuple(parse_point(tok) for tok in tokens[:3])
        for x in triple:
            if x not in known:
                raise ParseError(f"unknown point {point_label(x)} in line {line!r}")
        value = _parse_number(tokens[3], f"value in line {line!r}")
        if value < 0:
            raise NegativeValue(f"negative distance in line {line!r}")
        if triple in table:
            raise ParseError(f"duplicate triple in line {line!r}")
        table[triple] = value
    return tabulated_space(labels, table, coefficient)


# --------------------------------------------------------------------------
# Random tables (search fodder for property tests)
# --------------------------------------------------------------------------

def random_tabulated_space(rng: random.Random, labels=(1, 2, 3)) -> PartialSbSpace:
    """One random integer table over `labels`, symmetric in the (p,p,q) slots.

    Biased so most draws satisfy the partial-Sb axioms, but not guaranteed
    valid; pair with check_axioms.
    """
    labels = tuple(labels)
    selfs = {x: rng.randint(0, 5) for x in labels}
    floor = max(selfs.values())
    span = max(floor, 3)
    table = {(x, x, x): selfs[x] for x in labels}
    for tpl in itertools.product(labels, repeat=3):
        if tpl in table:
            continue
        p, q, r = tpl
        if p == q and (r, r, p) in table:
            table[tpl] = table[(r, r, p)]
        else:
            table[tpl] = rng.randint(floor, floor + span)
    return tabulated_space(labels, table)


def random_valid_space(rng: random.Random, labels=(1, 2, 3), max_attempts: int = 10000) -> PartialSbSpace:
    """Draw random tables until one passes the exhaustive partial-Sb check."""
    for _ in range(max_attempts):
        space = random_tabulated_space(rng, labels)
        if check_axioms(space, AxiomSet.PARTIAL_SB).passed:
            return space
    raise RuntimeError("no valid random table found within the attempt budget")

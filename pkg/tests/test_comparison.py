import json

import pytest
from hypothesis import given, settings, strategies as st

from psbmetric import (
    BOYD_WONG,
    ComparisonFn,
    DEFAULT_GRID,
    MATKOWSKI,
    ParseError,
    UnknownBuiltin,
    builtin_comparison,
    check_boyd_wong_properties,
    check_matkowski_properties,
    iterate_comparison,
    load_piecewise,
    piecewise_linear,
)

TAU = builtin_comparison("paper_tau")
HALF = builtin_comparison("half")
IDENTITY = builtin_comparison("identity")


class TestBuiltins:
    def test_paper_tau_branches(self):
        assert TAU(0) == 0
        assert TAU(1) == 0.9
        assert TAU(2) == 1.0
        assert TAU(2113) == 1056.5

    def test_kinds(self):
        assert TAU.kind == BOYD_WONG
        assert HALF.kind == MATKOWSKI
        assert IDENTITY.kind is None

    def test_unknown(self):
        with pytest.raises(UnknownBuiltin):
            builtin_comparison("missing")


class TestIterate:
    def test_half_three_times(self):
        assert iterate_comparison(HALF, 486, 3) == 486 / 2**3 == 60.75

    def test_zero_iterations_identity(self):
        for fn in (TAU, HALF, IDENTITY):
            assert iterate_comparison(fn, 7.25, 0) == 7.25

    def test_tau_once_above_branch(self):
        assert iterate_comparison(TAU, 2113, 1) == 1056.5

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            iterate_comparison(HALF, 1, -1)


class TestBoydWongChecks:
    def test_paper_tau_passes_small_grid(self):
        assert check_boyd_wong_properties(TAU, (0.5, 1.0, 2.0, 100.0)).passed

    def test_paper_tau_passes_default_grid(self):
        assert check_boyd_wong_properties(TAU).passed

    def test_identity_fails_below_identity_with_witness(self):
        report = check_boyd_wong_properties(IDENTITY)
        check = report.check("below-identity")
        assert not check.passed
        assert check.witness in DEFAULT_GRID

    def test_monotone_across_tau_branch_point(self):
        assert TAU(1) == 0.9 and TAU(1.9) == 0.95
        report = check_boyd_wong_properties(TAU, (1.0, 1.9))
        assert report.check("monotone").passed

    def test_tau_fails_monotone_on_adversarial_grid(self):
        # Just past the branch point the function halves, dipping below 0.9.
        report = check_boyd_wong_properties(TAU, (1.0, 1.1))
        assert not report.check("monotone").passed

    def test_usc_probe_catches_upward_jump(self):
        jump = ComparisonFn("jump", lambda a: 0.1 * a if a <= 2 else 0.9 * a, BOYD_WONG)
        report = check_boyd_wong_properties(jump, (1.0, 2.0, 8.0))
        check = report.check("usc-probe")
        assert not check.passed and check.witness == 2.0

    def test_usc_probe_accepts_continuous_functions(self):
        for fn in (TAU, HALF, IDENTITY):
            assert check_boyd_wong_properties(fn).check("usc-probe").passed

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            check_boyd_wong_properties(TAU, ())
        with pytest.raises(ValueError):
            check_boyd_wong_properties(TAU, (0.0, 1.0))
        with pytest.raises(ValueError):
            check_boyd_wong_properties(TAU, (2.0, 1.0))


class TestMatkowskiChecks:
    def test_half_passes_requested_grid(self):
        assert check_matkowski_properties(HALF, (1.0, 486.0, 34100.0), 64).passed

    def test_half_passes_default_grid(self):
        assert check_matkowski_properties(HALF).passed

    def test_identity_fails_iterate_decay_with_witness(self):
        report = check_matkowski_properties(IDENTITY)
        check = report.check("iterate-decay")
        assert not check.passed
        assert check.witness in DEFAULT_GRID

    def test_half_stays_below_identity(self):
        assert HALF(2) == 1 < 2
        assert check_matkowski_properties(HALF).check("below-identity").passed

    def test_reports_are_deterministic(self):
        assert check_matkowski_properties(HALF) == check_matkowski_properties(HALF)


class TestPiecewiseLinear:
    def test_interpolates_breakpoints(self):
        fn = piecewise_linear([(0, 0), (2, 1), (4, 1.5)])
        assert fn(0) == 0
        assert fn(2) == 1
        assert fn(1) == 0.5
        assert fn(3) == 1.25

    def test_extends_by_last_slope(self):
        fn = piecewise_linear([(0, 0), (2, 1)])
        assert fn(6) == 3.0

    def test_clamps_at_zero(self):
        fn = piecewise_linear([(0, 2), (1, 1)])
        assert fn(4) == 0.0

    def test_loads_json_breakpoints(self):
        fn = load_piecewise(json.dumps([[0, 0], [10, 5]]), kind=MATKOWSKI)
        assert fn(4) == 2.0 and fn.kind == MATKOWSKI

    def test_rejects_bad_input(self):
        with pytest.raises(ParseError):
            load_piecewise("not json")
        with pytest.raises(ParseError):
            load_piecewise(json.dumps([[0, 0]]))
        with pytest.raises(ParseError):
            piecewise_linear([(0, 0), (0, 1)])
        with pytest.raises(ParseError):
            piecewise_linear([(0, 0), (1, -1)])


def shrinking_maps():
    """Monotone piecewise-linear functions kept strictly under the identity,
    built from breakpoints y_i = running max of c_i * x_i with c_i < 0.9."""

    def build(draw_xs, draw_cs):
        xs = [0.0] + sorted(set(draw_xs))
        cs = draw_cs[: len(xs)]
        ys, top = [], 0.0
        for x, c in zip(xs, [0.0] + cs):
            top = max(top, c * x)
            ys.append(top)
        return piecewise_linear(list(zip(xs, ys)), kind=MATKOWSKI), xs[1:]

    return st.builds(
        build,
        st.lists(st.floats(min_value=0.01, max_value=1000), min_size=2, max_size=6),
        st.lists(st.floats(min_value=0.1, max_value=0.85), min_size=7, max_size=7),
    )


class TestMatkowskiLemmaConsequence:
    @settings(max_examples=50, deadline=None)
    @given(shrinking_maps())
    def test_monotone_decay_implies_below_identity(self, built):
        fn, grid_points = built
        grid = sorted(set(grid_points))
        report = check_matkowski_properties(fn, grid, iter_budget=2000)
        assert report.check("monotone").passed
        assert report.check("iterate-decay").passed
        # Consequence of monotonicity plus vanishing iterates:
        for v in grid:
            assert fn(v) < v
        assert fn(0) == 0

    @settings(max_examples=25, deadline=None)
    @given(shrinking_maps(), st.integers(min_value=0, max_value=12))
    def test_iterates_nonincreasing_at_grid_points(self, built, k):
        fn, grid_points = built
        for v in grid_points:
            assert iterate_comparison(fn, v, k + 1) <= iterate_comparison(fn, v, k)

import itertools
import random

import pytest

from psbmetric import (
    CoverFamily,
    EmptySubfamily,
    FiniteTopology,
    InfeasibleExhaustive,
    NotInBall,
    UnknownPoint,
    builtin_space,
    canonical_radii,
    evaluate_metric,
    exhaustive_points,
    generate_topology,
    inner_ball_radius,
    is_T0,
    is_T1,
    is_T2,
    is_compact,
    is_connected,
    open_ball,
    random_valid_space,
    sample_carrier,
    separation_report,
    tabulated_space,
    uncovered_witness,
    verify_topology_axioms,
    witness_candidates,
)

TWO_A = builtin_space("two_point_a")
TWO_B = builtin_space("two_point_b")
RAY = builtin_space("quintic_ray")

SIERPINSKI = frozenset({frozenset(), frozenset({2}), frozenset({1, 2})})
DISCRETE = frozenset({frozenset(), frozenset({1}), frozenset({2}), frozenset({1, 2})})


def brute_force_topology(space):
    """Oracle: sweep a dense radius grid over every center and close the
    resulting balls under all unions, with no canonical-radius shortcut."""
    pts = exhaustive_points(space)
    balls = set()
    for center in pts:
        for quarter in range(1, 41):
            balls.add(open_ball(space, center, quarter / 4, pts).members)
    opens = set()
    distinct = sorted(balls, key=sorted)
    for size in range(len(distinct) + 1):
        for group in itertools.combinations(distinct, size):
            opens.add(frozenset().union(*group) if group else frozenset())
    return opens


class TestOpenBall:
    def test_ray_ball_of_radius_three_is_singleton(self):
        ball = open_ball(RAY, 1, 3, [1, 2, 3, 4])
        assert ball.members == frozenset({1})

    def test_center_always_member(self):
        for space, center in ((TWO_A, 1), (TWO_A, 2), (TWO_B, 1)):
            for radius in (0.01, 1, 5):
                assert center in open_ball(space, center, radius, [1, 2]).members

    def test_two_point_a_small_ball_at_2(self):
        assert open_ball(TWO_A, 2, 1, [1, 2]).members == frozenset({2})

    def test_two_point_b_half_radius_ball(self):
        assert open_ball(TWO_B, 1, 0.5, [1, 2]).members == frozenset({1})

    def test_center_must_be_candidate(self):
        with pytest.raises(UnknownPoint):
            open_ball(TWO_A, 1, 1, [2])

    def test_radius_must_be_positive(self):
        with pytest.raises(ValueError):
            open_ball(TWO_A, 1, 0, [1, 2])


class TestInnerBall:
    def test_two_point_a_inner_ball(self):
        c, verdict = inner_ball_radius(TWO_A, 1, 1, 2, [1, 2])
        assert c == 0.25 and verdict
        inner = open_ball(TWO_A, 2, c, [1, 2]).members
        outer = open_ball(TWO_A, 1, 1, [1, 2]).members
        assert inner == frozenset({2}) and outer == frozenset({1, 2})

    def test_same_center_keeps_radius(self):
        c, verdict = inner_ball_radius(TWO_A, 1, 1, 1, [1, 2])
        assert c == 1 and verdict

    def test_ray_reflexive_containment(self):
        candidates = sorted(set(sample_carrier(RAY)) | {1})
        c, verdict = inner_ball_radius(RAY, 1, 3, 1, candidates)
        assert c == 3 and verdict

    def test_not_in_ball(self):
        with pytest.raises(NotInBall):
            inner_ball_radius(TWO_B, 1, 0.5, 2, [1, 2])

    def test_default_candidates_come_from_carrier_sample(self):
        c, verdict = inner_ball_radius(TWO_A, 1, 1, 2)
        assert c == 0.25 and verdict

    def test_every_ball_member_gets_an_inner_ball(self):
        # Openness of balls, checked over every canonical ball of the
        # finite builtins.
        for space in (TWO_A, TWO_B):
            pts = list(exhaustive_points(space))
            for center in pts:
                for radius in canonical_radii(space, center, pts):
                    ball = open_ball(space, center, radius, pts)
                    for member in ball.members:
                        _, verdict = inner_ball_radius(space, center, radius, member, pts)
                        assert verdict


class TestCanonicalRadii:
    def test_two_point_a_center_2_realizes_both_balls(self):
        gaps = sorted(
            evaluate_metric(TWO_A, 2, 2, z) - evaluate_metric(TWO_A, 2, 2, 2)
            for z in (1, 2)
        )
        assert gaps == [0, 4]
        radii = canonical_radii(TWO_A, 2, [1, 2])
        balls = {open_ball(TWO_A, 2, r, [1, 2]).members for r in radii}
        assert balls == {frozenset({2}), frozenset({1, 2})}

    def test_single_candidate(self):
        radii = canonical_radii(TWO_A, 2, [2])
        assert len(radii) == 1
        assert open_ball(TWO_A, 2, radii[0], [2]).members == frozenset({2})

    def test_two_point_b_center_1_realizes_both_balls(self):
        radii = canonical_radii(TWO_B, 1, [1, 2])
        balls = {open_ball(TWO_B, 1, r, [1, 2]).members for r in radii}
        assert balls == {frozenset({1}), frozenset({1, 2})}

    def test_negative_gap_table_still_yields_a_radius(self):
        # A deliberately invalid table with dist(1,1,2) below the self
        # distance: the only threshold is nonpositive, so a single radius
        # realizing the full candidate set remains.
        table = dict(TWO_B.metric.table)
        table[(1, 1, 2)] = 1
        space = tabulated_space((1, 2), table)
        radii = canonical_radii(space, 1, [1, 2])
        assert radii == [1]
        assert open_ball(space, 1, radii[0], [1, 2]).members == frozenset({1, 2})

    def test_radii_realize_every_ball_of_dense_sweep(self):
        for space in (TWO_A, TWO_B):
            pts = list(exhaustive_points(space))
            for center in pts:
                sweep = {
                    open_ball(space, center, k / 4, pts).members for k in range(1, 41)
                }
                canonical = {
                    open_ball(space, center, r, pts).members
                    for r in canonical_radii(space, center, pts)
                }
                assert canonical == sweep


class TestGenerateTopology:
    def test_two_point_a_is_sierpinski(self):
        assert generate_topology(TWO_A).opens == SIERPINSKI

    def test_two_point_b_is_discrete(self):
        assert generate_topology(TWO_B).opens == DISCRETE

    def test_one_point_space(self):
        space = tabulated_space(("x",), {("x", "x", "x"): 0})
        assert generate_topology(space).opens == frozenset({frozenset(), frozenset({"x"})})

    def test_matches_brute_force_oracle(self):
        for space in (TWO_A, TWO_B):
            assert generate_topology(space).opens == brute_force_topology(space)

    def test_region_carrier_rejected(self):
        with pytest.raises(InfeasibleExhaustive):
            generate_topology(RAY)

    def test_opens_are_unions_of_open_canonical_balls(self):
        for space in (TWO_A, TWO_B):
            pts = list(exhaustive_points(space))
            topology = generate_topology(space)
            balls = {
                open_ball(space, c, r, pts).members
                for c in pts
                for r in canonical_radii(space, c, pts)
            }
            assert balls <= topology.opens
            for o in topology.opens:
                pieces = [b for b in balls if b <= o]
                assert frozenset().union(*pieces) == o if pieces else o == frozenset()


class TestTopologyAxioms:
    def test_generated_topologies_verify(self):
        for space in (TWO_A, TWO_B):
            assert verify_topology_axioms(generate_topology(space))

    def test_missing_carrier_fails(self):
        family = FiniteTopology(frozenset({1, 2}), frozenset({frozenset(), frozenset({1})}))
        assert not verify_topology_axioms(family)

    def test_discrete_family_verifies(self):
        assert verify_topology_axioms(FiniteTopology(frozenset({1, 2}), DISCRETE))

    def test_union_gap_fails(self):
        family = FiniteTopology(
            frozenset({1, 2, 3}),
            frozenset(
                {
                    frozenset(),
                    frozenset({1}),
                    frozenset({2}),
                    frozenset({1, 2, 3}),
                }
            ),
        )
        assert not verify_topology_axioms(family)


class TestSeparation:
    def test_two_point_a_is_t0_only(self):
        report = separation_report(generate_topology(TWO_A))
        assert (report.t0, report.t1, report.t2) == (True, False, False)
        assert report.witnesses["t1"] == [(1, 2)]

    def test_two_point_b_is_t2(self):
        topology = generate_topology(TWO_B)
        assert is_T0(topology) and is_T1(topology) and is_T2(topology)

    def test_one_point_space_separates_trivially(self):
        topology = generate_topology(tabulated_space(("x",), {("x", "x", "x"): 0}))
        report = separation_report(topology)
        assert (report.t0, report.t1, report.t2) == (True, True, True)

    def test_implication_chain_on_random_valid_spaces(self):
        rng = random.Random("sep-chain")
        for _ in range(25):
            report = separation_report(generate_topology(random_valid_space(rng)))
            assert report.t1 <= report.t0
            assert report.t2 <= report.t1

    def test_t0_holds_for_random_valid_spaces(self):
        rng = random.Random("t0-sample")
        for _ in range(25):
            space = random_valid_space(rng)
            assert is_T0(generate_topology(space))


class TestConnected:
    def test_two_point_b_disconnects(self):
        connected, witness = is_connected(generate_topology(TWO_B))
        assert not connected
        assert witness == (frozenset({1}), frozenset({2}))

    def test_two_point_a_is_connected(self):
        assert is_connected(generate_topology(TWO_A)) == (True, None)

    def test_one_point_is_connected(self):
        topology = generate_topology(tabulated_space(("x",), {("x", "x", "x"): 0}))
        assert is_connected(topology) == (True, None)

    def test_finite_topologies_are_compact(self):
        assert is_compact(generate_topology(TWO_A))


class TestCoverWitness:
    FAMILY = CoverFamily(center=1, indices=tuple(range(3, 21)))

    def test_subfamily_3_5_escapes_at_2(self):
        witness = uncovered_witness(RAY, self.FAMILY, [3, 5], 64)
        assert witness == 2
        assert evaluate_metric(RAY, 1, 1, 2) == 66
        self_d = evaluate_metric(RAY, 1, 1, 1)
        for n in (3, 5):
            assert evaluate_metric(RAY, 1, 1, 2) >= n + self_d

    def test_finite_space_fully_covered(self):
        family = CoverFamily(center=1, indices=(1,))
        assert open_ball(TWO_A, 1, 1, [1, 2]).members == frozenset({1, 2})
        assert uncovered_witness(TWO_A, family, [1], 64) is None

    def test_empty_subfamily(self):
        with pytest.raises(EmptySubfamily):
            uncovered_witness(RAY, self.FAMILY, [], 64)

    def test_subfamily_must_be_subset(self):
        with pytest.raises(ValueError):
            uncovered_witness(RAY, self.FAMILY, [99], 64)

    def test_escape_threshold_property(self):
        # A witness exists whenever the scan reaches past ((N-1)/2)^(1/5).
        self_d = evaluate_metric(RAY, 1, 1, 1)
        for top in range(3, 21):
            subfamily = list(range(3, top + 1))
            threshold = ((top - 1) / 2) ** 0.2
            for bound in (threshold * (1 + 1e-6), threshold + 0.5, 64):
                witness = uncovered_witness(RAY, self.FAMILY, subfamily, bound)
                assert witness is not None
                d = evaluate_metric(RAY, 1, 1, witness)
                assert all(d >= n + self_d for n in subfamily)

    def test_precomputed_candidates_agree(self):
        candidates = witness_candidates(RAY, 64)
        for subfamily in ([3], [3, 5, 8], list(range(3, 21))):
            assert uncovered_witness(
                RAY, self.FAMILY, subfamily, 64, candidates=candidates
            ) == uncovered_witness(RAY, self.FAMILY, subfamily, 64)

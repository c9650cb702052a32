"""Equilibrium verification, solving, deviation-proofness, and dynamics."""

import random
from fractions import Fraction

import pytest

from nbg import (DimensionMismatchError, EquilibriumFamily, EquilibriumPoint,
                 Game, PHI, QuadExt, UnsupportedGameError, affine,
                 affine_coefficients, best_response_dynamics, brouwer_iterate,
                 brouwer_map, cost_vector, dilemma_game, distribution,
                 family_cost_range, influence_from_triples, make_family,
                 no_equilibrium_game, opaque, path_determinant,
                 solve_affine_by_supports, three_equilibria_game,
                 uniform_cost_solve, unique_nonstrong_game,
                 verify_delta_strong, verify_equilibrium)
from util import (dense_costs, families_of, family_matches, grid_delta_strong,
                  is_equilibrium_oracle, point_masses,
                  random_affine_symmetric_game, random_affine_game,
                  random_fraction, random_masses)


def two_vertex_affine_equilibria(game):
    """Independent closed-form equilibrium set for exact affine games on
    two vertices. Returns ("points", {x1 values}) or ("family", None) when
    the two costs coincide identically."""
    a1, b1 = game.vertex_costs[0].as_affine()
    a2, b2 = game.vertex_costs[1].as_affine()
    to0 = game.influence.value(1, 0)
    to1 = game.influence.value(0, 1)
    r = game.r
    # g(t) = C1 - C2 along x = (t, r - t)
    g0 = (b1 + to0 * r) - (b2 + a2 * r)
    slope = (a1 - to0) - (to1 - a2)
    if slope == 0 and g0 == 0:
        return "family", None
    values = set()
    if g0 >= 0:
        values.add(Fraction(0))
    if g0 + slope * r <= 0:
        values.add(Fraction(r))
    if slope != 0:
        root = -Fraction(g0) / slope
        if 0 < root < r:
            values.add(root)
    return "points", values


class TestVerifyEquilibrium:
    def test_dilemma_equilibria(self):
        game = dilemma_game()
        for t in (Fraction(0), Fraction(3, 4), Fraction(1)):
            report = verify_equilibrium(game, (t, 1 - t))
            assert report.is_equilibrium
            assert report.worst_gap == 0
            assert report.tolerance == 0
        report = verify_equilibrium(game, (Fraction(1, 2), Fraction(1, 2)))
        assert not report.is_equilibrium
        assert report.worst_gap == Fraction(1, 2)
        assert report.common_cost is None

    def test_common_cost_and_charged(self):
        game = dilemma_game()
        report = verify_equilibrium(game, (Fraction(3, 4), Fraction(1, 4)))
        assert report.common_cost == Fraction(3, 4)
        assert report.charged == (0, 1)
        corner = verify_equilibrium(game, (Fraction(0), Fraction(1)))
        assert corner.charged == (1,)
        assert corner.common_cost == 0

    def test_explicit_tolerance(self):
        game = dilemma_game()
        x = (Fraction(740, 1000), Fraction(260, 1000))
        assert not verify_equilibrium(game, x).is_equilibrium
        assert verify_equilibrium(game, x, tol=Fraction(1, 10)).is_equilibrium

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            verify_equilibrium(dilemma_game(), (1,))

    def test_no_equilibrium_game_rejects_a_grid(self):
        game = no_equilibrium_game()
        for k in range(51):
            t = Fraction(k, 50)
            assert not verify_equilibrium(game, (t, 1 - t)).is_equilibrium

    def test_matches_definition_oracle_on_random_games(self):
        rng = random.Random(41)
        for _ in range(80):
            n = rng.randint(2, 5)
            game = random_affine_game(rng, n)
            masses = random_masses(rng, n)
            report = verify_equilibrium(game, masses)
            assert report.is_equilibrium == is_equilibrium_oracle(game, masses)
            costs = dense_costs(game, masses)
            floor = min(costs)
            expected_gap = max([costs[i] - floor for i in range(n)
                                if masses[i] > 0], default=0)
            assert report.worst_gap == expected_gap


class TestAffineCoefficients:
    def test_reproduces_cost_vector(self):
        rng = random.Random(43)
        for _ in range(40):
            n = rng.randint(1, 5)
            game = random_affine_game(rng, n)
            matrix, offsets = affine_coefficients(game)
            masses = random_masses(rng, n)
            rebuilt = [offsets[i] + sum(matrix[j][i] * masses[j]
                                        for j in range(n))
                       for i in range(n)]
            assert rebuilt == list(cost_vector(game, masses))

    def test_refuses_non_affine(self):
        with pytest.raises(UnsupportedGameError):
            affine_coefficients(dilemma_game())
        curved = Game.graphical(1, 1, [opaque(lambda t: t * t)],
                                influence_from_triples(1, []))
        with pytest.raises(UnsupportedGameError):
            affine_coefficients(curved)


class TestSolveBySupports:
    def test_two_vertex_completeness_against_closed_form(self):
        rng = random.Random(47)
        checked_points = 0
        checked_families = 0
        for _ in range(150):
            r = rng.choice([1, Fraction(2), Fraction(3, 2)])
            game = Game.graphical(
                2, r,
                [affine(random_fraction(rng, 0, 2), random_fraction(rng, 0, 2))
                 for _ in range(2)],
                influence_from_triples(2, [
                    (0, 1, random_fraction(rng, 0, 2)),
                    (1, 0, random_fraction(rng, 0, 2))]))
            kind, expected = two_vertex_affine_equilibria(game)
            solved = solve_affine_by_supports(game)
            if kind == "family":
                families = families_of(solved)
                assert len(families) == 1
                assert families[0].contains((r, 0 * r)) is not None
                assert families[0].contains((0 * r, r)) is not None
                checked_families += 1
            else:
                assert point_masses(solved) == {(t, r - t) for t in expected}
                checked_points += 1
        assert checked_points > 100

    def test_outputs_verify_and_are_deduplicated(self):
        rng = random.Random(53)
        for _ in range(25):
            n = rng.randint(2, 5)
            game = random_affine_symmetric_game(rng, n)
            solved = solve_affine_by_supports(game)
            assert solved, "affine games admit an equilibrium"
            seen = set()
            for item in solved:
                samples = (item.sample_points(3)
                           if isinstance(item, EquilibriumFamily) else [item])
                for point in samples:
                    report = verify_equilibrium(game, point.x)
                    assert report.is_equilibrium
                    if isinstance(item, EquilibriumPoint):
                        assert report.common_cost == item.cost
                        key = point.x.masses
                        assert key not in seen
                        seen.add(key)
                        assert not any(
                            f.contains(point.x) is not None
                            for f in families_of(solved))

    def test_pinched_families_are_demoted(self):
        # supports like {1,2,4,5} on this game equalise costs on a plane,
        # but the uncharged-vertex conditions pin that plane to a single
        # point; the solver must report the point, not the plane
        game = make_family("path", Fraction(1), n=6)
        solved = solve_affine_by_supports(game)
        assert point_masses(solved) == {
            (0, Fraction(1, 2), 0, 0, Fraction(1, 2), 0)}
        families = families_of(solved)
        assert [f.support for f in families] == [(0, 1, 3, 5), (0, 2, 3, 5),
                                                 (0, 2, 4, 5)]
        for family in families:
            assert family.dimension == 1
            assert family.interval == (Fraction(0), Fraction(1, 3))
        for item in solved:
            samples = (item.sample_points(5)
                       if isinstance(item, EquilibriumFamily) else [item])
            for point in samples:
                assert verify_equilibrium(game, point.x).is_equilibrium

    def test_multiparameter_samples_respect_uncharged_costs(self):
        # full-support plane on the 6-cycle: every nonnegative member is
        # an equilibrium, and samples stay inside the stored constraints
        game = make_family("cycle", Fraction(1), n=6)
        families = families_of(solve_affine_by_supports(game))
        plane = [f for f in families if f.dimension >= 2]
        assert len(plane) == 1
        assert plane[0].support == tuple(range(6))
        assert plane[0].constraints
        for family in families:
            for point in family.sample_points(5):
                assert verify_equilibrium(game, point.x).is_equilibrium

    def test_results_sorted_by_support_bitmask(self):
        rng = random.Random(59)
        for _ in range(20):
            game = random_affine_symmetric_game(rng, rng.randint(2, 5))
            solved = solve_affine_by_supports(game)
            masks = [e.bitmask for e in solved]
            assert masks == sorted(masks)

    def test_unique_nonstrong_game_has_one_equilibrium(self):
        solved = solve_affine_by_supports(unique_nonstrong_game())
        assert len(solved) == 1
        point = solved[0]
        assert point.x.masses == (Fraction(0), Fraction(1))
        assert point.cost == 5
        assert point.support == (1,)

    def test_size_and_structure_guards(self):
        big = make_family("path", Fraction(1, 4), n=17)
        with pytest.raises(UnsupportedGameError):
            solve_affine_by_supports(big)
        with pytest.raises(UnsupportedGameError):
            solve_affine_by_supports(dilemma_game())


class TestFamilyMechanics:
    def family(self):
        game = make_family("complete_bipartite", Fraction(1, 2), p=2, q=2)
        solved = solve_affine_by_supports(game)
        families = families_of(solved)
        assert len(families) == 1
        return game, families[0]

    def test_point_at_and_contains_round_trip(self):
        _, fam = self.family()
        assert fam.dimension == 1
        lo, hi = fam.interval
        for k in range(5):
            t = lo + (hi - lo) * Fraction(k, 4)
            point = fam.point_at((t,))
            assert fam.contains(point.x) == (t,)
        with pytest.raises(DimensionMismatchError):
            fam.point_at((lo, hi))
        with pytest.raises(DimensionMismatchError):
            fam.contains((1, 0, 0))

    def test_contains_rejects_off_hull_points(self):
        _, fam = self.family()
        assert fam.contains((Fraction(1, 2), Fraction(1, 4),
                             Fraction(1, 8), Fraction(1, 8))) is None

    def test_sample_points_cover_interval_ends(self):
        game, fam = self.family()
        samples = fam.sample_points(5)
        assert len(samples) == 5
        params = [fam.contains(p.x)[0] for p in samples]
        assert params[0] == fam.interval[0]
        assert params[-1] == fam.interval[1]
        assert params == sorted(params)
        for point in samples:
            assert verify_equilibrium(game, point.x).is_equilibrium

    def test_cost_range(self):
        game, fam = self.family()
        (lo, hi), exact = family_cost_range(game, fam)
        assert exact
        assert lo == hi == Fraction(1, 2)

    def test_multiparameter_family_lp_sampling(self):
        game = make_family("path", Fraction(1), n=5)
        solved = solve_affine_by_supports(game)
        wide = [f for f in families_of(solved) if f.dimension == 2]
        assert wide
        fam = wide[0]
        samples = fam.sample_points(4)
        assert len(samples) >= 2
        for point in samples:
            assert verify_equilibrium(game, point.x).is_equilibrium
            # mass splits in halves across the uncharged middle vertex
            m = point.x.masses
            assert abs(float(m[0] + m[1]) - 0.5) < 1e-7
            assert abs(float(m[3] + m[4]) - 0.5) < 1e-7
        (lo, hi), exact = family_cost_range(game, fam)
        assert float(lo) == pytest.approx(0.5, abs=1e-7)
        assert float(hi) == pytest.approx(0.5, abs=1e-7)


class TestGoldenRatioPath:
    def test_determinant_vanishes_exactly(self):
        assert path_determinant(4, PHI) == 0
        assert path_determinant(4, Fraction(61803, 100000)) != 0

    def test_uniform_cost_family_over_the_extension_field(self):
        game = make_family("path", PHI, n=4)
        system = uniform_cost_solve(game, "path")
        assert system.status == "family"
        assert system.determinant == 0
        assert len(system.directions) == 1
        direction, _ = system.directions[0]
        # exact nonnegativity window along the family
        lo, hi = None, None
        for b, d in zip(system.base_masses, direction):
            if d == 0:
                assert (b >= 0) or not system.nonnegative
                continue
            bound = -b / d
            if d > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        window = lo is not None and hi is not None and lo <= hi
        assert window == system.nonnegative
        assert window, "the singular path system should still admit masses"
        for t in (lo, hi, (lo + hi) / 2):
            masses = tuple(b + t * d
                           for b, d in zip(system.base_masses, direction))
            report = verify_equilibrium(game, distribution(masses, total=1))
            assert report.is_equilibrium
            assert report.tolerance == 0
        values = list(system.base_masses) + list(direction)
        assert any(isinstance(v, QuadExt) for v in values)


class TestDeltaStrong:
    def test_three_equilibria_thresholds(self):
        game = three_equilibria_game()
        rest = distribution([Fraction(0), Fraction(1)])
        assert verify_delta_strong(game, rest, Fraction(1, 4)).is_delta_strong
        cert = verify_delta_strong(game, rest, Fraction(1, 4) + Fraction(1, 100))
        assert not cert.is_delta_strong
        assert cert.method == "sampled"
        assert cert.witness[0] == 1 and cert.witness[1] == 0

        interior = distribution([Fraction(3, 4), Fraction(1, 4)])
        weak = verify_delta_strong(game, interior, Fraction(1, 1000))
        assert not weak.is_delta_strong

        corner = distribution([Fraction(1), Fraction(0)])
        assert verify_delta_strong(game, corner, Fraction(5)).is_delta_strong

    def test_zero_delta_is_trivial_and_negative_rejected(self):
        game = three_equilibria_game()
        x = distribution([Fraction(1), Fraction(0)])
        cert = verify_delta_strong(game, x, 0)
        assert cert.is_delta_strong and cert.witness is None
        with pytest.raises(ValueError):
            verify_delta_strong(game, x, -1)

    def test_base_failure_reports_worst_and_best(self):
        game = three_equilibria_game()
        cert = verify_delta_strong(game, (Fraction(1, 2), Fraction(1, 2)),
                                   Fraction(1, 10))
        assert not cert.is_delta_strong
        assert cert.witness[2] == 0

    def test_unique_nonstrong_fails_every_delta(self):
        game = unique_nonstrong_game()
        x = distribution([Fraction(0), Fraction(1)])
        for delta in (Fraction(1, 1000), Fraction(1, 10), Fraction(1)):
            cert = verify_delta_strong(game, x, delta)
            assert not cert.is_delta_strong
            assert cert.method == "exact"
            assert not grid_delta_strong(game, x, delta, steps=7)

    def test_agrees_with_definition_grid(self):
        game = three_equilibria_game()
        for masses, delta in [
            ((Fraction(0), Fraction(1)), Fraction(1, 5)),
            ((Fraction(0), Fraction(1)), Fraction(2, 5)),
            ((Fraction(1), Fraction(0)), Fraction(1, 2)),
            ((Fraction(3, 4), Fraction(1, 4)), Fraction(1, 8)),
        ]:
            x = distribution(list(masses))
            got = verify_delta_strong(game, x, delta).is_delta_strong
            assert got == grid_delta_strong(game, x, delta)

    def test_exact_and_sampled_routes_agree_on_affine_games(self):
        rng = random.Random(61)
        compared = 0
        for _ in range(12):
            n = rng.randint(2, 4)
            game = random_affine_symmetric_game(rng, n)
            shadow = Game.graphical(
                n, game.r, [opaque(f.value) for f in game.vertex_costs],
                game.influence)
            for item in solve_affine_by_supports(game):
                if not isinstance(item, EquilibriumPoint):
                    continue
                delta = game.r / Fraction(max(len(item.support), 1))
                fast = verify_delta_strong(game, item.x, delta)
                slow = verify_delta_strong(shadow, item.x, delta)
                assert fast.method == "exact" and slow.method == "sampled"
                assert fast.is_delta_strong == slow.is_delta_strong
                compared += 1
        assert compared >= 10

    def test_failed_certificates_carry_a_checkable_witness(self):
        rng = random.Random(67)
        replayed = 0
        for _ in range(15):
            game = random_affine_symmetric_game(rng, rng.randint(2, 4))
            for item in solve_affine_by_supports(game):
                if not isinstance(item, EquilibriumPoint):
                    continue
                cert = verify_delta_strong(game, item.x, game.r)
                if cert.is_delta_strong or cert.witness[2] == 0:
                    continue
                i, j, eps = cert.witness
                costs = cost_vector(game, item.x)
                moved = list(item.x.masses)
                moved[i] = moved[i] - eps
                moved[j] = moved[j] + eps
                assert cost_vector(game, moved)[j] < costs[i]
                replayed += 1
        assert replayed >= 3


class TestBrouwerMap:
    def test_equilibria_are_fixed_points(self):
        rng = random.Random(71)
        for _ in range(15):
            game = random_affine_symmetric_game(rng, rng.randint(2, 4))
            for item in solve_affine_by_supports(game):
                points = (item.sample_points(3)
                          if isinstance(item, EquilibriumFamily) else [item])
                for point in points:
                    image = brouwer_map(game, point.x)
                    assert image.masses == point.x.masses

    def test_non_equilibria_move(self):
        game = dilemma_game()
        x = distribution([Fraction(1, 2), Fraction(1, 2)])
        image = brouwer_map(game, x)
        assert image.masses != x.masses
        assert sum(image.masses) == 1
        assert all(m >= 0 for m in image.masses)
        assert all(isinstance(m, Fraction) for m in image.masses)
        # mass flows off the costlier vertex
        assert image.masses[0] < Fraction(1, 2)

    def test_iteration_drifts_to_the_basin_attractor(self):
        game = dilemma_game()
        low = brouwer_iterate(game, (0.5, 0.5), max_iters=3000)
        assert low.x.masses[0] < 0.05
        high = brouwer_iterate(game, (0.8, 0.2), max_iters=3000)
        assert high.x.masses[0] > 0.95
        fixed = brouwer_iterate(game, (Fraction(3, 4), Fraction(1, 4)),
                                max_iters=5)
        assert fixed.converged
        assert fixed.iterations == 1
        assert fixed.residual == 0


class TestBestResponseDynamics:
    def test_dilemma_drift_down(self):
        result = best_response_dynamics(
            dilemma_game(), distribution([Fraction(1, 2), Fraction(1, 2)]))
        assert result.converged
        assert abs(float(result.x.masses[0])) <= 1e-9
        assert result.report.is_equilibrium

    def test_dilemma_drift_up_needs_step_halving(self):
        result = best_response_dynamics(
            dilemma_game(), distribution([Fraction(4, 5), Fraction(1, 5)]))
        assert result.converged
        assert abs(float(result.x.masses[0]) - 1) <= 1e-9
        assert float(result.final_step) < 0.01

    def test_exact_run_on_a_path_game(self):
        game = make_family("path", Fraction(1, 3), r=Fraction(1), n=6)
        start = distribution([Fraction(1, 6)] * 6)
        result = best_response_dynamics(game, start)
        assert result.converged
        assert result.report.is_equilibrium
        assert all(isinstance(m, Fraction) for m in result.x.masses)
        target = [Fraction(8, 38), Fraction(5, 38), Fraction(6, 38),
                  Fraction(6, 38), Fraction(5, 38), Fraction(8, 38)]
        for got, want in zip(result.x.masses, target):
            assert abs(float(got - want)) < 1e-3

    def test_trace_bookkeeping(self):
        game = dilemma_game()
        start = distribution([Fraction(2, 5), Fraction(3, 5)])
        result = best_response_dynamics(game, start)
        assert result.trace[0].masses == start.masses
        assert result.trace[-1].masses == result.x.masses
        assert len(result.trace) == result.iterations + 1
        bare = best_response_dynamics(game, start, keep_trace=False)
        assert bare.trace == ()
        assert bare.x.masses == result.x.masses

    def test_step_validation(self):
        with pytest.raises(ValueError):
            best_response_dynamics(dilemma_game(),
                                   distribution([1, 0]), step=0)

"""Shared test helpers: independent oracles and random generators.

Everything here recomputes quantities from first principles with code
paths disjoint from the package internals (dense matrices, definition
quantifiers on grids, cofactor expansion), so agreement is evidence
rather than tautology.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from nbg import (Digraph, EquilibriumFamily, EquilibriumPoint, Game, affine,
                 digraph, influence_from_triples)


# ---------------------------------------------------------------------------
# cost oracle


def dense_costs(game, masses):
    """Vertex costs via an explicit dense coefficient matrix."""
    masses = list(masses)
    if game.kind == "general":
        return [ev(masses) for ev in game.evaluators]
    out = []
    for i in range(game.n):
        total = game.vertex_costs[i].value(masses[i])
        for j in range(game.n):
            if j != i:
                total = total + game.influence.value(j, i) * masses[j]
        out.append(total)
    return out


def utilitarian_oracle(game, masses):
    costs = dense_costs(game, masses)
    return sum(m * c for m, c in zip(masses, costs)) / game.r


# ---------------------------------------------------------------------------
# equilibrium oracles, straight from the definitions


def is_equilibrium_oracle(game, masses, tol=0):
    costs = dense_costs(game, masses)
    floor = min(costs)
    return all(costs[i] - floor <= tol
               for i in range(game.n) if masses[i] > tol)


def grid_delta_strong(game, x, delta, steps=40):
    """Definition check on an epsilon grid denser than the library's.

    For every charged i and every j != i, the cost C_i before the move
    must not exceed C_j after moving eps of mass from i to j, for eps
    ranging over (0, min(delta, x_i)].
    """
    masses = list(x.masses if hasattr(x, "masses") else x)
    costs = dense_costs(game, masses)
    n = game.n
    for i in range(n):
        if not masses[i] > 0:
            continue
        eps_max = min(delta, masses[i])
        for j in range(n):
            if j == i:
                continue
            for k in range(1, steps + 1):
                eps = eps_max * Fraction(k, steps)
                moved = list(masses)
                moved[i] = moved[i] - eps
                moved[j] = moved[j] + eps
                if costs[i] > dense_costs(game, moved)[j]:
                    return False
    return True


# ---------------------------------------------------------------------------
# kernel oracle


def subsets_kernels(d: Digraph):
    """Kernels by raw subset scan, returned as sorted vertex tuples."""
    found = []
    for size in range(1, d.n + 1):
        for subset in combinations(range(d.n), size):
            inside = set(subset)
            stable = True
            for u in subset:
                for v in subset:
                    if u != v and (u, v) in d.arcs:
                        stable = False
            dominating = all(
                any((u, z) in d.arcs for u in subset)
                for z in range(d.n) if z not in inside)
            if stable and dominating:
                found.append(subset)
    return found


# ---------------------------------------------------------------------------
# numerics oracles


def central_difference(fn, t, h=1e-6):
    return (fn(t + h) - fn(t - h)) / (2 * h)


def cofactor_determinant(rows):
    """Exact determinant by recursive cofactor expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        sign = 1 if j % 2 == 0 else -1
        total = total + sign * rows[0][j] * cofactor_determinant(minor)
    return total


# ---------------------------------------------------------------------------
# random generators (seeded by the caller)


def random_fraction(rng: random.Random, lo=0, hi=4, den=6):
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_symmetric_triples(rng: random.Random, n, density=0.7,
                             lo=0, hi=3):
    triples = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                alpha = random_fraction(rng, lo, hi)
                if alpha == 0:
                    continue
                triples.append((i, j, alpha))
                triples.append((j, i, alpha))
    return triples


def random_affine_symmetric_game(rng: random.Random, n, r=1) -> Game:
    costs = [affine(random_fraction(rng, 0, 3), random_fraction(rng, 0, 3))
             for _ in range(n)]
    influence = influence_from_triples(n, random_symmetric_triples(rng, n))
    return Game.graphical(n, r, costs, influence)


def random_linear_symmetric_game(rng: random.Random, n, r=1) -> Game:
    costs = [affine(random_fraction(rng, 1, 4), 0) for _ in range(n)]
    influence = influence_from_triples(n, random_symmetric_triples(rng, n))
    return Game.graphical(n, r, costs, influence)


def random_affine_game(rng: random.Random, n, r=1) -> Game:
    """Possibly asymmetric influence."""
    costs = [affine(random_fraction(rng, 0, 3), random_fraction(rng, 0, 3))
             for _ in range(n)]
    triples = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < 0.5:
                alpha = random_fraction(rng, 0, 3)
                if alpha != 0:
                    triples.append((i, j, alpha))
    return Game.graphical(n, r, costs, influence_from_triples(n, triples))


def random_masses(rng: random.Random, n, r=1, den=24):
    """Exact nonnegative masses summing to r (integer grid split)."""
    cuts = sorted(rng.randint(0, den) for _ in range(n - 1))
    parts = []
    prev = 0
    for c in cuts + [den]:
        parts.append(Fraction(c - prev, den) * r)
        prev = c
    return parts


def random_digraph(rng: random.Random, n, p=0.4) -> Digraph:
    arcs = [(u, v) for u in range(n) for v in range(n)
            if u != v and rng.random() < p]
    return digraph(n, arcs)


# ---------------------------------------------------------------------------
# equilibrium-set comparison


def point_masses(results):
    return {tuple(e.x.masses) for e in results
            if isinstance(e, EquilibriumPoint)}


def families_of(results):
    return [e for e in results if isinstance(e, EquilibriumFamily)]


def family_matches(a: EquilibriumFamily, b: EquilibriumFamily, count=5) -> bool:
    """Mutual containment of sampled members."""
    return (all(b.contains(p.x.masses) is not None
                for p in a.sample_points(count))
            and all(a.contains(p.x.masses) is not None
                    for p in b.sample_points(count)))


def same_equilibrium_set(solved, closed) -> bool:
    """Set equality: points match by mass vectors, families pair up by
    mutual containment."""
    if point_masses(solved) != point_masses(closed):
        return False
    solved_fams = families_of(solved)
    closed_fams = families_of(closed)
    if len(solved_fams) != len(closed_fams):
        return False
    unmatched = list(solved_fams)
    for fam in closed_fams:
        hit = next((g for g in unmatched if family_matches(fam, g)), None)
        if hit is None:
            return False
        unmatched.remove(hit)
    return True


def contained_in_solution_set(game, solved, closed, samples=5) -> bool:
    """Every closed-form member verifies and lies in the solved set."""
    from nbg import verify_equilibrium

    for item in closed:
        points = (item.sample_points(samples)
                  if isinstance(item, EquilibriumFamily) else [item])
        for point in points:
            if not verify_equilibrium(game, point.x).is_equilibrium:
                return False
            in_points = tuple(point.x.masses) in point_masses(solved)
            in_family = any(f.contains(point.x.masses) is not None
                            for f in families_of(solved))
            if not (in_points or in_family):
                return False
    return True

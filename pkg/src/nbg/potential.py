"""Potential function for symmetric graphical games.

Phi(x) = sum_i integral_0^{x_i} f_i + sum_{i<j} alpha_{i,j} x_i x_j has
partial derivatives equal to the vertex costs, so local minima of Phi on
the simplex are equilibria. The converse fails: an equilibrium can sit at
a maximum of Phi, which is why minimization filters candidates through a
local-minimum probe instead of returning every critical point.

Non-symmetric influence admits no such function (the mixed second
derivatives of any candidate would have to equal both alpha_{i,j} and
alpha_{j,i}), so these operations refuse non-symmetric games.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import numeric
from .equilibrium import (EquilibriumFamily, solve_affine_by_supports,
                          verify_equilibrium, _affine_or_none)
from .errors import UnsupportedGameError
from .games import Game, MassDistribution, cost_vector
from .simplexopt import multistart_minimize

#: probe offset for the local-minimum test, and float comparison slack
PROBE_STEP = Fraction(1, 100000)
PROBE_SLACK = 1e-12


@dataclass(frozen=True)
class PotentialValue:
    value: object
    gradient: tuple


def _require_symmetric(game: Game):
    if game.kind != "graphical":
        raise UnsupportedGameError("potential requires a graphical game")
    if not game.influence.is_symmetric:
        raise UnsupportedGameError(
            "no potential exists for non-symmetric influence")


def potential(game: Game, x) -> PotentialValue:
    """Potential value and its gradient (= the cost vector)."""
    _require_symmetric(game)
    if isinstance(x, MassDistribution):
        masses = x.masses
    else:
        masses = tuple(x)
    value = 0
    for i, form in enumerate(game.vertex_costs):
        value = value + form.integral(masses[i])
    for (i, j), alpha in game.influence.items():
        if i < j:
            value = value + alpha * masses[i] * masses[j]
    return PotentialValue(value, cost_vector(game, masses))


def is_local_minimum(game: Game, x, step=None) -> bool:
    """Probe whether x locally minimizes Phi on the simplex.

    Tests the pairwise directions e_j - e_i for charged i; a strict
    decrease along any of them disqualifies x. Not a sufficiency proof
    for degenerate curvature, but exact along each probed segment.
    """
    _require_symmetric(game)
    x = x if isinstance(x, MassDistribution) else MassDistribution(tuple(x), game.r)
    exact = x.exact and game.exact
    if step is None:
        step = PROBE_STEP if exact else float(PROBE_STEP)
    slack = 0 if exact else PROBE_SLACK
    base = potential(game, x).value
    masses = list(x.masses)
    for i in x.support():
        h = step if step <= masses[i] else masses[i]
        for j in range(game.n):
            if j == i:
                continue
            moved = list(masses)
            moved[i] = moved[i] - h
            moved[j] = moved[j] + h
            if potential(game, moved).value < base - slack:
                return False
    return True


def minimize_potential(game: Game, starts=30, tol=1e-7, seed=0) -> tuple:
    """Distinct local minima of Phi over the simplex, as distributions.

    Projected-gradient descent runs from `starts` random interior points
    plus every simplex vertex. For affine games the float minima are
    snapped to the exact equilibrium set from support enumeration, and
    exact equilibria that pass the local-minimum probe are included even
    if no descent run landed on them. Every returned distribution passes
    verify_equilibrium at `tol`.
    """
    _require_symmetric(game)
    n, r = game.n, game.r

    def objective(v):
        total = 0.0
        for i, form in enumerate(game.vertex_costs):
            total += float(form.integral(float(v[i])))
        for (i, j), alpha in game.influence.items():
            if i < j:
                total += float(alpha) * float(v[i]) * float(v[j])
        return total

    def gradient(v):
        return [float(c) for c in cost_vector(game, [float(t) for t in v])]

    descended = multistart_minimize(objective, gradient, n, float(r),
                                    starts=starts, seed=seed)

    minima = []
    exact_families = []
    if _affine_or_none(game) is not None:
        for found in solve_affine_by_supports(game):
            if isinstance(found, EquilibriumFamily):
                exact_families.append(found)
                samples = found.sample_points(3)
            else:
                samples = [found]
            for point in samples:
                if is_local_minimum(game, point.x):
                    minima.append(point.x)

    for res in descended:
        candidate = MassDistribution(res.x, r)
        if any(_close(candidate, m) for m in minima):
            continue
        if any(f.contains(candidate, tol=1e-6) is not None for f in exact_families):
            continue
        if not verify_equilibrium(game, candidate, tol=tol).is_equilibrium:
            continue
        if not is_local_minimum(game, candidate):
            continue
        minima.append(candidate)

    unique = []
    for m in sorted(minima, key=lambda d: tuple(float(t) for t in d.masses)):
        if not any(_close(m, kept) for kept in unique):
            unique.append(m)
    return tuple(unique)


def _close(a: MassDistribution, b: MassDistribution, tol=1e-6) -> bool:
    return max(abs(float(u) - float(v)) for u, v in zip(a.masses, b.masses)) <= tol

"""Social costs, optimal-cost search, and prices of anarchy/stability.

The utilitarian social cost averages the cost borne by the mass; the
egalitarian one takes the worst cost among charged vertices. At an
equilibrium both collapse to the common charged cost, so equilibrium
contributions to the price ratios come straight from the solver, while
the denominators need a search over the whole simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import numeric
from .equilibrium import (EquilibriumFamily, _affine_or_none,
                          family_cost_range, solve_affine_by_supports)
from .errors import NbgError, UnsupportedGameError
from .games import Game, MassDistribution, cost_vector, distribution
from .linalg import solve_linear_system
from .simplexopt import multistart_minimize, project_to_simplex

#: supports enumerated exactly for quadratic utilitarian optimization
DEFAULT_N_MAX = 12
#: sharpness of the smooth maximum used for egalitarian descent
SMOOTH_MAX_BETA = 1e4


@dataclass(frozen=True)
class SocialCostPair:
    utilitarian: object
    egalitarian: object


def social_costs(game: Game, x) -> SocialCostPair:
    """Both social costs; the egalitarian max runs over charged vertices."""
    x = x if isinstance(x, MassDistribution) else MassDistribution(tuple(x), game.r)
    costs = cost_vector(game, x)
    total = 0
    for i in range(game.n):
        total = total + x.masses[i] * costs[i]
    utilitarian = total / game.r
    egalitarian = max(costs[i] for i in x.support())
    return SocialCostPair(utilitarian, egalitarian)


@dataclass(frozen=True)
class OptimumResult:
    x: MassDistribution
    value: object
    exact: bool
    method: str


def _as_weight(value, exact):
    return value if exact else float(value)


def _exact_quadratic_minimum(game: Game, affine_parts):
    """Global utilitarian minimum of an affine game by face enumeration.

    On each face, an interior minimizer satisfies the stationarity system
    of the quadratic x.C(x); faces whose minimum sits on their boundary
    are covered by the enclosing sub-faces, and the simplex vertices are
    the singleton faces, so scanning every support finds the optimum.
    Along degenerate (underdetermined) stationary families the objective
    is constant, so any feasible member represents its face.
    """
    matrix, offsets = affine_parts
    n, r = game.n, game.r
    exact = game.exact
    tol = numeric.auto_tolerance(exact, 1e-9)
    best = None
    for mask in range(1, 1 << n):
        support = tuple(i for i in range(n) if mask >> i & 1)
        k = len(support)
        rows = []
        rhs = []
        for i in support:
            rows.append([matrix[j][i] + matrix[i][j] for j in support] + [-1])
            rhs.append(-offsets[i])
        rows.append([1] * k + [0])
        rhs.append(r)
        solution = solve_linear_system(rows, rhs)
        if solution.status == "none":
            continue
        if solution.status == "unique":
            masses_s = solution.solution[:k]
            if any(m < -tol for m in masses_s):
                continue
            point = _assemble(n, support, masses_s, exact)
        else:
            point = _feasible_family_member(n, support, solution, exact, tol)
            if point is None:
                continue
        value = social_costs(game, distribution(point, r)).utilitarian
        if best is None or float(value) < float(best[1]):
            best = (point, value)
    return best


def _assemble(n, support, masses_s, exact):
    zero = 0 if exact else 0.0
    masses = [zero] * n
    for idx, s in enumerate(support):
        masses[s] = masses_s[idx] if masses_s[idx] > 0 else zero
    return tuple(masses)


def _feasible_family_member(n, support, solution, exact, tol):
    k = len(support)
    base = list(solution.solution[:k])
    directions = [vec[:k] for vec in solution.basis]
    if len(directions) == 1:
        d = directions[0]
        lo = hi = None
        for value, slope in zip(base, d):
            if slope == 0:
                if value < -tol:
                    return None
                continue
            if isinstance(value, int):
                value = Fraction(value)
            bound = -value / slope
            if slope > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        if lo is None:
            lo = hi
        if hi is None:
            hi = lo
        if lo is None or lo - hi > tol:
            return None
        point = [b + lo * s for b, s in zip(base, d)]
        return _assemble(n, support, point, exact)

    from scipy.optimize import linprog
    import numpy as np

    dim = len(directions)
    a_ub = np.array([[-float(d[row]) for d in directions] for row in range(k)])
    b_ub = np.array([float(v) for v in base])
    res = linprog(np.zeros(dim), A_ub=a_ub, b_ub=b_ub,
                  bounds=[(None, None)] * dim, method="highs")
    if res.status != 0:
        return None
    point = [float(b) + sum(float(d[row]) * t for d, t in zip(directions, res.x))
             for row, b in enumerate(base)]
    return _assemble(n, support, [max(p, 0.0) for p in point], False)


def _fd_gradient(objective, v, h=1e-7):
    grads = []
    for i in range(len(v)):
        up = list(v)
        dn = list(v)
        up[i] += h
        dn[i] -= h
        grads.append((objective(up) - objective(dn)) / (2 * h))
    return grads


def min_social_cost(game: Game, which="utilitarian", starts=40, seed=0,
                    n_max=DEFAULT_N_MAX, candidates=()) -> OptimumResult:
    """Search the simplex for the lowest social cost.

    Utilitarian on affine games combines exact face enumeration with
    multistart descent (the exact path decides); anything else relies on
    descent plus injected candidate points, and is flagged as an
    estimate. Games with two vertices additionally get a dense line scan.
    """
    if which not in ("utilitarian", "egalitarian"):
        raise ValueError(f"unknown social cost {which!r}")
    n, r = game.n, game.r

    pool = []

    def consider(masses, exact, method):
        x = distribution(tuple(masses), r)
        pair = social_costs(game, x)
        value = pair.utilitarian if which == "utilitarian" else pair.egalitarian
        pool.append((float(value), value, x, exact and game.exact and x.exact, method))

    affine_parts = _affine_or_none(game)
    if which == "utilitarian" and affine_parts is not None and n <= n_max:
        best = _exact_quadratic_minimum(game, affine_parts)
        if best is not None:
            consider(best[0], numeric.all_exact(best[0]), "faces")

    if which == "utilitarian":
        def objective(v):
            # raw cost evaluation: descent probes points slightly off the
            # simplex, which a validated distribution would reject
            clipped = [t if t > 0 else 0.0 for t in v]
            costs = cost_vector(game, clipped)
            return sum(float(t) * float(c)
                       for t, c in zip(clipped, costs)) / float(r)
    else:
        def objective(v):
            import math
            clipped = [t if t > 0 else 0.0 for t in v]
            costs = [float(c) for c in cost_vector(game, clipped)]
            peak = max(costs)
            beta = SMOOTH_MAX_BETA
            return peak + math.log(sum(math.exp(beta * (c - peak)) for c in costs)) / beta

    for res in multistart_minimize(objective, lambda v: _fd_gradient(objective, v),
                                   n, float(r), starts=starts, seed=seed):
        consider(project_to_simplex(res.x, float(r)), False, "descent")

    if n == 2:
        steps = 10 ** 4
        for k in range(steps + 1):
            t = float(r) * k / steps
            consider((t, float(r) - t), False, "scan")

    for extra in candidates:
        masses = extra.masses if isinstance(extra, MassDistribution) else tuple(extra)
        consider(masses, numeric.all_exact(masses), "candidate")

    for i in range(n):
        vertex = [0 if game.exact else 0.0] * n
        vertex[i] = r if game.exact else float(r)
        consider(vertex, game.exact, "vertex")

    pool.sort(key=lambda entry: (entry[0], not entry[3]))
    _, value, x, exact, method = pool[0]
    if which == "egalitarian":
        exact = False
    return OptimumResult(x, value, exact, method)


@dataclass(frozen=True)
class PriceReport:
    poa_u: object
    poa_e: object
    pos_u: object
    pos_e: object
    optimum_u: object
    optimum_e: object
    best_equilibrium_cost: object
    worst_equilibrium_cost: object
    equilibria_used: tuple
    exact: dict


def _ratio(num, den):
    if numeric.all_exact((num, den)):
        return num / den
    return float(num) / float(den)


def price_report(game: Game, n_max=DEFAULT_N_MAX, starts=40, seed=0) -> PriceReport:
    """Prices of anarchy and stability for an affine game.

    Equilibrium costs come from exact support enumeration (families
    contribute their cost extremes); the utilitarian optimum is exact for
    exact inputs, the egalitarian optimum is an estimate from descent
    with the equilibria injected as candidates.
    """
    if _affine_or_none(game) is None:
        raise UnsupportedGameError("price report needs an affine game")
    if game.n > n_max:
        raise UnsupportedGameError(
            f"price report is exponential in n; {game.n} exceeds {n_max}")

    equilibria = solve_affine_by_supports(game)
    if not equilibria:
        raise NbgError("no equilibrium found; affine costs should admit one")

    lows = []
    highs = []
    eq_exact = True
    sample_points = []
    for eq in equilibria:
        if isinstance(eq, EquilibriumFamily):
            (lo, hi), exact = family_cost_range(game, eq)
            lows.append(lo)
            highs.append(hi)
            eq_exact = eq_exact and exact
            sample_points.extend(p.x for p in eq.sample_points(3))
        else:
            lows.append(eq.cost)
            highs.append(eq.cost)
            eq_exact = eq_exact and numeric.is_exact_scalar(eq.cost)
            sample_points.append(eq.x)

    best_eq = min(lows, key=float)
    worst_eq = max(highs, key=float)

    opt_u = min_social_cost(game, "utilitarian", starts=starts, seed=seed,
                            n_max=n_max, candidates=sample_points)
    opt_e = min_social_cost(game, "egalitarian", starts=starts, seed=seed,
                            n_max=n_max, candidates=sample_points + [opt_u.x])

    flags = {
        "optimum_u": opt_u.exact,
        "optimum_e": opt_e.exact,
        "best_equilibrium_cost": eq_exact,
        "worst_equilibrium_cost": eq_exact,
    }
    flags["poa_u"] = flags["worst_equilibrium_cost"] and opt_u.exact
    flags["pos_u"] = flags["best_equilibrium_cost"] and opt_u.exact
    flags["poa_e"] = flags["worst_equilibrium_cost"] and opt_e.exact
    flags["pos_e"] = flags["best_equilibrium_cost"] and opt_e.exact

    return PriceReport(
        poa_u=_ratio(worst_eq, opt_u.value),
        poa_e=_ratio(worst_eq, opt_e.value),
        pos_u=_ratio(best_eq, opt_u.value),
        pos_e=_ratio(best_eq, opt_e.value),
        optimum_u=opt_u.value,
        optimum_e=opt_e.value,
        best_equilibrium_cost=best_eq,
        worst_equilibrium_cost=worst_eq,
        equilibria_used=tuple(equilibria),
        exact=flags,
    )


def gamma_for_class(max_degree: int):
    """Sharp integral-versus-value constant for nonnegative-coefficient
    polynomial vertex costs of bounded degree; the stability ratio is at
    most 1/gamma."""
    if max_degree < 0:
        raise ValueError(f"degree must be nonnegative, got {max_degree}")
    return Fraction(1, max_degree + 1)


def cost_degree(game: Game):
    """Largest polynomial degree among vertex-cost forms, or None when a
    form is not polynomial (no stability bound available)."""
    if game.kind != "graphical":
        return None
    worst = 0
    for form in game.vertex_costs:
        degree = form.max_degree()
        if degree is None:
            return None
        worst = max(worst, degree)
    return worst

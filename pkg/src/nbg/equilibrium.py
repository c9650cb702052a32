"""Equilibrium verification and computation.

A distribution x is an equilibrium when every charged vertex has minimal
cost: x_i > 0 implies C_i(x) <= C_j(x) for all j. It is delta-strong when
no mass chunk of size up to delta can gain by moving: for every eps in
(0, delta] and every i with x_i >= eps,

    C_i(x) <= C_j(x - eps e_i + eps e_j)   for all j.

The eps -> 0 limit of the chunk condition is the plain equilibrium
inequality on charged vertices; uncharged vertices are unconstrained as
movers (they have no mass to move).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import numeric
from .errors import DimensionMismatchError, UnsupportedGameError
from .games import (CHARGE_TOLERANCE, Game, MassDistribution, cost_vector,
                    distribution)
from .linalg import solve_linear_system

#: float-mode slack for cost comparisons
EQUILIBRIUM_TOLERANCE = 1e-9


def _as_distribution(game: Game, x) -> MassDistribution:
    if isinstance(x, MassDistribution):
        if len(x) != game.n:
            raise DimensionMismatchError(
                f"distribution has {len(x)} entries, game has {game.n} vertices")
        return x
    return MassDistribution(tuple(x), game.r)


def _exact_context(x: MassDistribution, costs) -> bool:
    return x.exact and numeric.all_exact(costs)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class EquilibriumReport:
    """Outcome of an equilibrium check.

    worst_gap is max(C_i - C_j) over charged i and all j, clamped at zero,
    so is_equilibrium holds exactly when worst_gap <= tolerance.
    common_cost is the shared charged cost when it is uniform, else None.
    """

    is_equilibrium: bool
    worst_gap: object
    costs: tuple
    common_cost: object
    charged: tuple
    tolerance: object


def verify_equilibrium(game: Game, x, tol=None) -> EquilibriumReport:
    x = _as_distribution(game, x)
    costs = cost_vector(game, x)
    exact = _exact_context(x, costs)
    if tol is None:
        tol = numeric.auto_tolerance(exact, EQUILIBRIUM_TOLERANCE)
    charged = x.support()
    zero = 0 if exact else 0.0
    worst_gap = zero
    min_cost = min(costs)
    for i in charged:
        gap = costs[i] - min_cost
        if gap > worst_gap:
            worst_gap = gap
    common = None
    if charged:
        lo = min(costs[i] for i in charged)
        hi = max(costs[i] for i in charged)
        if hi - lo <= tol:
            common = costs[charged[0]]
    return EquilibriumReport(
        is_equilibrium=(worst_gap <= tol),
        worst_gap=worst_gap,
        costs=costs,
        common_cost=common,
        charged=charged,
        tolerance=tol,
    )


@dataclass(frozen=True)
class StrongnessCertificate:
    """Result of a delta-strong check.

    witness, when the check fails, is a triple (i, j, eps): moving eps of
    mass from i to j strictly improves on C_i. method is "exact" when the
    affine structure allowed endpoint checks, "sampled" when an eps grid
    was used (then a positive verdict is evidence, not proof).
    """

    delta: object
    is_delta_strong: bool
    witness: tuple
    method: str
    tolerance: object


def verify_delta_strong(game: Game, x, delta, tol=None, samples=33) -> StrongnessCertificate:
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta!r}")
    x = _as_distribution(game, x)
    costs = cost_vector(game, x)
    exact = _exact_context(x, costs) and numeric.is_exact_scalar(delta)
    if tol is None:
        tol = numeric.auto_tolerance(exact, EQUILIBRIUM_TOLERANCE)
    affine = _affine_or_none(game)
    method = "exact" if affine is not None else "sampled"

    base = verify_equilibrium(game, x, tol=tol)
    if not base.is_equilibrium:
        worst = max(base.charged, key=lambda i: costs[i])
        best = min(range(game.n), key=lambda j: costs[j])
        return StrongnessCertificate(delta, False, (worst, best, 0), method, tol)
    if delta == 0:
        return StrongnessCertificate(delta, True, None, method, tol)

    masses = list(x.masses)
    for i in x.support():
        eps_max = min(delta, masses[i])
        for j in range(game.n):
            if j == i:
                continue
            if affine is not None:
                # C_j(x - eps e_i + eps e_j) is affine in eps, and its
                # eps -> 0 limit is C_j(x) >= C_i(x) by the base check, so
                # the far endpoint decides.
                matrix, _ = affine
                slope = matrix[j][j] - matrix[i][j]
                moved_cost = costs[j] + eps_max * slope
                if costs[i] - moved_cost > tol:
                    return StrongnessCertificate(delta, False, (i, j, eps_max), method, tol)
            else:
                for k in range(1, samples + 1):
                    eps = eps_max * k / samples
                    moved = list(masses)
                    moved[i] = moved[i] - eps
                    moved[j] = moved[j] + eps
                    moved_cost = cost_vector(game, moved)[j]
                    if costs[i] - moved_cost > tol:
                        return StrongnessCertificate(delta, False, (i, j, eps), method, tol)
    return StrongnessCertificate(delta, True, None, method, tol)


# ---------------------------------------------------------------------------
# affine structure


def affine_coefficients(game: Game):
    """Matrix and offset with C_i(x) = b0[i] + sum_j matrix[j][i] * x_j.

    Raises UnsupportedGameError unless the game is graphical with affine
    vertex-cost forms.
    """
    pair = _affine_or_none(game)
    if pair is None:
        raise UnsupportedGameError("operation needs affine cost structure")
    return pair


def _affine_or_none(game: Game):
    if game.kind != "graphical":
        return None
    parts = [form.as_affine() for form in game.vertex_costs]
    if any(p is None for p in parts):
        return None
    n = game.n
    matrix = [[0] * n for _ in range(n)]
    offsets = [0] * n
    for i, (slope, intercept) in enumerate(parts):
        matrix[i][i] = slope
        offsets[i] = intercept
    for (j, i), alpha in game.influence.items():
        matrix[j][i] = alpha
    return matrix, offsets


# ---------------------------------------------------------------------------
# fixed-point map


def brouwer_map(game: Game, x) -> MassDistribution:
    """One application of the equilibrium fixed-point map.

    Mass flows toward vertices that are cheaper than average neighbours:
    g_{i,j} = x_j * max(0, C_j - C_i) feeds vertex i from vertex j, and the
    normalisation keeps the image on the simplex. Fixed points are exactly
    the equilibria.
    """
    x = _as_distribution(game, x)
    costs = cost_vector(game, x)
    exact = _exact_context(x, costs)
    zero = 0 if exact else 0.0
    gains = [zero] * game.n
    total = zero
    for i in range(game.n):
        for j in range(game.n):
            if i == j:
                continue
            diff = costs[j] - costs[i]
            if diff > 0:
                g = x.masses[j] * diff
                gains[i] = gains[i] + g
                total = total + g
    denom = 1 + total
    new_masses = tuple((x.masses[i] + game.r * gains[i]) / denom for i in range(game.n))
    return MassDistribution(new_masses, game.r)


@dataclass(frozen=True)
class IterationResult:
    x: MassDistribution
    iterations: int
    converged: bool
    residual: object


def brouwer_iterate(game: Game, x0, max_iters=1000, tol=1e-12) -> IterationResult:
    """Iterate the fixed-point map; convergence is not guaranteed in
    general, so the outcome is reported rather than assumed."""
    x = _as_distribution(game, x0)
    residual = None
    for it in range(1, max_iters + 1):
        nxt = brouwer_map(game, x)
        residual = max(abs(float(a) - float(b)) for a, b in zip(nxt.masses, x.masses))
        x = nxt
        if residual <= tol:
            return IterationResult(x, it, True, residual)
    return IterationResult(x, max_iters, False, residual)


# ---------------------------------------------------------------------------
# best-response dynamics


@dataclass(frozen=True)
class DynamicsResult:
    x: MassDistribution
    trace: tuple
    iterations: int
    converged: bool
    report: EquilibriumReport
    final_step: object


def best_response_dynamics(game: Game, x0, step=None, max_iters=10000,
                           tol=EQUILIBRIUM_TOLERANCE, keep_trace=True) -> DynamicsResult:
    """Move mass chunks from the worst charged vertex to the cheapest one.

    The chunk size starts at r/100 (or `step`) and halves after ten
    consecutive iterations without improving the worst cost gap, so the
    dynamics settles near rest points instead of oscillating.
    """
    x = _as_distribution(game, x0)
    masses = list(x.masses)
    if step is None:
        step = game.r / 100
    if step <= 0:
        raise ValueError(f"step must be positive, got {step!r}")
    trace = [MassDistribution(tuple(masses), game.r)] if keep_trace else []
    charge_tol = x.charge_tolerance()
    best_gap = None
    stalled = 0
    iterations = 0
    converged = False
    for iterations in range(1, max_iters + 1):
        costs = cost_vector(game, masses)
        charged = [i for i in range(game.n) if masses[i] > charge_tol]
        worst = max(charged, key=lambda i: (costs[i], -i))
        cheapest = min(range(game.n), key=lambda j: (costs[j], j))
        gap = costs[worst] - costs[cheapest]
        if gap <= tol:
            converged = True
            iterations -= 1
            break
        if best_gap is not None and not gap < best_gap:
            stalled += 1
            if stalled >= 10:
                step = step / 2
                best_gap = gap
                stalled = 0
        else:
            best_gap = gap
            stalled = 0
        chunk = min(step, masses[worst])
        masses[worst] = masses[worst] - chunk
        masses[cheapest] = masses[cheapest] + chunk
        if keep_trace:
            trace.append(MassDistribution(tuple(masses), game.r))
    final = MassDistribution(tuple(masses), game.r)
    report = verify_equilibrium(game, final, tol=max(float(tol), EQUILIBRIUM_TOLERANCE))
    return DynamicsResult(final, tuple(trace), iterations, converged, report, step)


# ---------------------------------------------------------------------------
# exact solver for affine games


@dataclass(frozen=True)
class EquilibriumPoint:
    """An isolated equilibrium with its common charged cost."""

    x: MassDistribution
    cost: object
    support: tuple
    label: str = ""

    @property
    def bitmask(self) -> int:
        return sum(1 << i for i in self.support)


@dataclass(frozen=True)
class EquilibriumFamily:
    """An affine family of equilibria over one support.

    Points are base + sum_k t_k * directions[k]; the common cost moves as
    cost_base + sum_k t_k * cost_directions[k]. For one-parameter families
    `interval` is the exact feasible range of t. Larger families may carry
    `constraints`, rows (value, coefs) with value + coefs . t >= 0 cutting
    the parameter space down to the true feasible region; when present,
    sample_points draws from that polytope rather than from the whole
    nonnegative slice of the hull.
    """

    n: int
    r: object
    support: tuple
    base: tuple
    cost_base: object
    directions: tuple
    cost_directions: tuple
    interval: tuple = None
    label: str = ""
    constraints: tuple = ()

    @property
    def dimension(self) -> int:
        return len(self.directions)

    @property
    def bitmask(self) -> int:
        return sum(1 << i for i in self.support)

    def point_at(self, params) -> EquilibriumPoint:
        if len(params) != self.dimension:
            raise DimensionMismatchError(
                f"family has {self.dimension} parameters, got {len(params)}")
        masses = list(self.base)
        cost = self.cost_base
        for t, direction, dc in zip(params, self.directions, self.cost_directions):
            for i in range(self.n):
                masses[i] = masses[i] + t * direction[i]
            cost = cost + t * dc
        return EquilibriumPoint(MassDistribution(tuple(masses), self.r),
                                cost, self.support, self.label)

    def contains(self, masses, tol=None) -> tuple:
        """Parameters reproducing `masses` if it lies on the family's
        affine hull, else None. Nonnegativity is the caller's concern."""
        masses = tuple(masses.masses) if isinstance(masses, MassDistribution) else tuple(masses)
        if len(masses) != self.n:
            raise DimensionMismatchError(
                f"expected {self.n} masses, got {len(masses)}")
        rows = [[d[i] for d in self.directions] for i in range(self.n)]
        rhs = [masses[i] - self.base[i] for i in range(self.n)]
        exact = numeric.all_exact(list(masses) + [v for d in self.directions for v in d]
                                  + list(self.base))
        if tol is None:
            tol = numeric.auto_tolerance(exact, 1e-7)
        if exact:
            solution = solve_linear_system(rows, rhs)
            if solution.status == "none":
                return None
            params = tuple(solution.solution)
        else:
            # the exact consistency verdict is meaningless at float
            # precision; fit the parameters and let `tol` decide
            import numpy as np
            fit, *_ = np.linalg.lstsq(
                np.array([[float(v) for v in row] for row in rows]),
                np.array([float(v) for v in rhs]), rcond=None)
            params = tuple(float(t) for t in fit)
        rebuilt = [self.base[i] + sum(t * d[i] for t, d in zip(params, self.directions))
                   for i in range(self.n)]
        if exact:
            mismatch = max(abs(a - b) for a, b in zip(rebuilt, masses))
        else:
            mismatch = max(abs(float(a) - float(b)) for a, b in zip(rebuilt, masses))
        if mismatch > tol:
            return None
        return params

    def sample_points(self, count=5):
        """Representative members. Exact and evenly spaced across the
        interval for one-parameter families; for larger families, convex
        mixes of polytope vertices found by linear programming."""
        if self.dimension == 1 and self.interval is not None:
            lo, hi = self.interval
            if count == 1 or hi == lo:
                return [self.point_at((lo,))]
            width = hi - lo
            return [self.point_at((lo + width * k / (count - 1),)) for k in range(count)]
        return self._sample_by_lp(count)

    def _sample_by_lp(self, count):
        from scipy.optimize import linprog
        import numpy as np

        rng = np.random.default_rng(12345)
        dim = self.dimension
        if self.constraints:
            a_ub = np.array([[-float(c) for c in coefs]
                             for _, coefs in self.constraints])
            b_ub = np.array([float(v) for v, _ in self.constraints])
        else:
            d_rows = np.array([[float(v) for v in d] for d in self.directions]).T
            a_ub = -d_rows
            b_ub = np.array([float(v) for v in self.base])
        found = []
        objectives = [np.ones(dim), -np.ones(dim)]
        while len(objectives) < max(count, 2):
            objectives.append(rng.normal(size=dim))
        for obj in objectives[:max(count, 2)]:
            res = linprog(obj, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * dim,
                          method="highs")
            if res.status == 0:
                found.append(tuple(float(t) for t in res.x))
        points = []
        seen = []
        for params in found:
            point = self.point_at(params)
            key = tuple(round(float(m), 9) for m in point.x.masses)
            if key not in seen:
                seen.append(key)
                points.append(point)
        return points[:count]


def _support_masks(n):
    for mask in range(1, 1 << n):
        yield mask


def solve_affine_by_supports(game: Game, tol=None) -> list:
    """All equilibria of an affine game, by support enumeration.

    For each candidate support S, charged costs are equalised by a linear
    system in (x_S, c); solutions are kept when masses are nonnegative and
    every uncharged vertex costs at least c. Underdetermined systems yield
    families; families whose feasible region collapses to one point are
    demoted to points, and points lying inside a family are dropped.
    """
    matrix, offsets = affine_coefficients(game)
    n = game.n
    if n > 16:
        raise UnsupportedGameError(
            "support enumeration is exponential; use games with n <= 16")
    exact = game.exact
    if tol is None:
        tol = numeric.auto_tolerance(exact, EQUILIBRIUM_TOLERANCE)
    zero = 0 if exact else 0.0

    points = []
    families = []
    for mask in _support_masks(n):
        support = tuple(i for i in range(n) if mask >> i & 1)
        k = len(support)
        rows = []
        rhs = []
        for i in support:
            rows.append([matrix[j][i] for j in support] + [-1])
            rhs.append(-offsets[i])
        rows.append([1] * k + [0])
        rhs.append(game.r)
        solution = solve_linear_system(rows, rhs)
        if solution.status == "none":
            continue
        base_masses = [zero] * n
        for idx, s in enumerate(support):
            base_masses[s] = solution.solution[idx]
        cost_base = solution.solution[k]
        if solution.status == "unique":
            point = _accept_point(game, matrix, offsets, support,
                                  base_masses, cost_base, tol, zero)
            if point is not None:
                points.append(point)
            continue
        directions = []
        cost_dirs = []
        for vec in solution.basis:
            direction = [zero] * n
            for idx, s in enumerate(support):
                direction[s] = vec[idx]
            directions.append(tuple(direction))
            cost_dirs.append(vec[k])
        family = _restrict_family(game, matrix, offsets, support,
                                  tuple(base_masses), cost_base,
                                  tuple(directions), tuple(cost_dirs), tol, zero)
        if family is None:
            continue
        if isinstance(family, EquilibriumPoint):
            points.append(family)
        else:
            families.append(family)

    kept_points = []
    seen = set()
    for point in sorted(points, key=lambda p: (p.bitmask,
                                               tuple(float(m) for m in p.x.masses))):
        if any(f.contains(point.x) is not None for f in families):
            continue
        key = (tuple(point.x.masses) if exact
               else tuple(round(float(m), 9) for m in point.x.masses))
        if key in seen:
            continue
        seen.add(key)
        kept_points.append(point)
    families.sort(key=lambda f: f.bitmask)
    return sorted(kept_points + families, key=lambda e: e.bitmask)


def _off_support_gap(matrix, offsets, support, masses, cost, j):
    value = offsets[j]
    for i in range(len(masses)):
        value = value + matrix[i][j] * masses[i]
    return value - cost


def _accept_point(game, matrix, offsets, support, masses, cost, tol, zero):
    if any(masses[s] < -tol for s in support):
        return None
    clipped = [m if m > 0 else zero for m in masses]
    for j in range(game.n):
        if j in support:
            continue
        if _off_support_gap(matrix, offsets, support, clipped, cost, j) < -tol:
            return None
    x = MassDistribution(tuple(clipped), game.r)
    return EquilibriumPoint(x, cost, x.support())


def _restrict_family(game, matrix, offsets, support, base, cost_base,
                     directions, cost_dirs, tol, zero):
    """Clip a solution family to the feasible region.

    Constraints (all affine in the parameters): masses on the support stay
    nonnegative, and every off-support vertex costs at least the common
    cost. One-parameter families get an exact interval. Multi-parameter
    families keep their constraint rows; constraints that bind across the
    whole feasible region are folded back into the linear system, so a
    region pinched to a lower dimension is re-derived at its true size
    (possibly a single point).
    """
    n = game.n
    constraints = []  # (value_at_base, coefficients_per_direction) meaning >= 0
    for s in support:
        constraints.append((base[s], [d[s] for d in directions]))
    for j in range(n):
        if j in support:
            continue
        at_base = _off_support_gap(matrix, offsets, support, base, cost_base, j)
        coefs = []
        for d, dc in zip(directions, cost_dirs):
            slope = sum(matrix[i][j] * d[i] for i in range(n)) - dc
            coefs.append(slope)
        constraints.append((at_base, coefs))

    if len(directions) == 1:
        lo, hi = None, None
        for value, (slope,) in constraints:
            if slope == 0 or (not numeric.is_exact_scalar(slope)
                              and abs(float(slope)) < 1e-13):
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
        if lo is None or hi is None:
            # the mass constraint keeps supports bounded, so an unbounded
            # interval means the direction never leaves the support face
            lo = lo if lo is not None else hi
            hi = hi if hi is not None else lo
            if lo is None:
                return None
        if lo - hi > tol:
            return None
        if hi - lo <= tol:
            return _accept_point(game, matrix, offsets, support,
                                 [b + lo * d for b, d in zip(base, directions[0])],
                                 cost_base + lo * cost_dirs[0], tol, zero)
        return EquilibriumFamily(n, game.r, support, base, cost_base,
                                 directions, tuple(cost_dirs), (lo, hi))

    feasible = _lp_feasible(constraints, len(directions))
    if not feasible:
        return None
    # a constraint whose slack never leaves zero squeezes the region into
    # a lower-dimensional slice; the data is rational and tiny, so LP
    # noise sits far below this threshold
    slack = max(float(tol), 1e-9)
    tight = []
    for value, coefs in constraints:
        if all(c == 0 for c in coefs):
            continue
        top = _max_over_polytope(constraints, value, coefs)
        if top is not None and top <= slack:
            tight.append((value, coefs))
    if not tight:
        return EquilibriumFamily(n, game.r, support, base, cost_base,
                                 directions, tuple(cost_dirs), None, "",
                                 tuple(constraints))
    reduced = solve_linear_system([list(coefs) for _, coefs in tight],
                                  [-value for value, _ in tight])
    if reduced.status == "none":
        # misdetected equality; fall back to the full constraint polytope
        return EquilibriumFamily(n, game.r, support, base, cost_base,
                                 directions, tuple(cost_dirs), None, "",
                                 tuple(constraints))
    t0 = reduced.solution
    new_base = tuple(b + sum(t * d[i] for t, d in zip(t0, directions))
                     for i, b in enumerate(base))
    new_cost = cost_base + sum(t * dc for t, dc in zip(t0, cost_dirs))
    if reduced.status == "unique":
        return _accept_point(game, matrix, offsets, support, list(new_base),
                             new_cost, tol, zero)
    new_dirs = tuple(
        tuple(sum(u * d[i] for u, d in zip(vec, directions)) for i in range(n))
        for vec in reduced.basis)
    new_cdirs = tuple(sum(u * dc for u, dc in zip(vec, cost_dirs))
                      for vec in reduced.basis)
    return _restrict_family(game, matrix, offsets, support, new_base,
                            new_cost, new_dirs, new_cdirs, tol, zero)


def _max_over_polytope(constraints, value, coefs):
    """Largest value + coefs . t over the constraint polytope, or None
    when the LP fails or is unbounded (float arithmetic)."""
    from scipy.optimize import linprog
    import numpy as np

    a_ub = np.array([[-float(c) for c in cs] for _, cs in constraints])
    b_ub = np.array([float(v) for v, _ in constraints])
    res = linprog(np.array([-float(c) for c in coefs]), A_ub=a_ub, b_ub=b_ub,
                  bounds=[(None, None)] * len(coefs), method="highs")
    if res.status != 0:
        return None
    return float(value) - float(res.fun)


def _lp_feasible(constraints, dim) -> bool:
    from scipy.optimize import linprog
    import numpy as np

    a_ub = np.array([[-float(c) for c in coefs] for _, coefs in constraints])
    b_ub = np.array([float(value) for value, _ in constraints])
    res = linprog(np.zeros(dim), A_ub=a_ub, b_ub=b_ub,
                  bounds=[(None, None)] * dim, method="highs")
    return res.status == 0


def _family_constraints(game, family):
    matrix, offsets = affine_coefficients(game)
    constraints = []
    for s in family.support:
        constraints.append((family.base[s], [d[s] for d in family.directions]))
    for j in range(game.n):
        if j in family.support:
            continue
        at_base = _off_support_gap(matrix, offsets, family.support,
                                   family.base, family.cost_base, j)
        coefs = []
        for d, dc in zip(family.directions, family.cost_directions):
            slope = sum(matrix[i][j] * d[i] for i in range(game.n)) - dc
            coefs.append(slope)
        constraints.append((at_base, coefs))
    return constraints


def family_cost_range(game, family: EquilibriumFamily):
    """Extremes of the common cost over a family: (low, high, exact).

    The cost is affine in the family parameters, so one-parameter families
    give exact interval endpoints; larger families are bounded by linear
    programming over the rebuilt feasibility constraints (float, inexact).
    """
    if family.dimension == 1 and family.interval is not None:
        lo, hi = family.interval
        a = family.cost_base + lo * family.cost_directions[0]
        b = family.cost_base + hi * family.cost_directions[0]
        exact = numeric.all_exact([a, b])
        return (a, b) if a <= b else (b, a), exact

    from scipy.optimize import linprog
    import numpy as np

    constraints = _family_constraints(game, family)
    a_ub = np.array([[-float(c) for c in coefs] for _, coefs in constraints])
    b_ub = np.array([float(value) for value, _ in constraints])
    obj = np.array([float(c) for c in family.cost_directions])
    bounds = [(None, None)] * family.dimension
    values = []
    for sign in (1.0, -1.0):
        res = linprog(sign * obj, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status != 0:
            base = float(family.cost_base)
            return (base, base), False
        values.append(float(family.cost_base) + float(obj @ res.x))
    return (min(values), max(values)), False

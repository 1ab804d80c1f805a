"""Gorilla-troop optimizer over box-constrained continuous domains.

The optimizer evolves a fixed-size population ("troop") under a fixed budget
of objective evaluations. Each iteration runs an exploration sweep (a
three-branch randomized move), an exploitation sweep (follow the best member
— the "silverback" — or contract towards it through pairwise competition) and,
optionally, a quantum-rotation-gate mutation that rotates coordinate pairs of
every member towards the silverback by a fitness-adaptive angle. Two feature
switches control the amendments: opposition-based initialization
(``enable_obl``) and the rotation mutation (``enable_qrg``). With both off the
loop reduces to the plain troop dynamics.

Minimization convention throughout: lower fitness is better.

Reproducibility: one seeded 64-bit generator drives a run. Draws are consumed
in a fixed documented order — the per-iteration schedule draw first, then
per-member draws in member order; each operation documents its own internal
draw order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

Objective = Callable[[np.ndarray], float]

DEFAULT_THETA_MIN = 0.001 * math.pi
DEFAULT_THETA_MAX = 0.035 * math.pi


class ConfigurationError(ValueError):
    """Invalid search space or optimizer configuration."""


class EvaluationError(RuntimeError):
    """The objective returned a non-finite value."""

    def __init__(self, message: str, position: np.ndarray):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Axis-aligned feasible box with strict per-dimension bounds."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ConfigurationError("bounds must be 1-d vectors of equal length")
        if lower.size == 0:
            raise ConfigurationError("search space needs at least one dimension")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("bounds must be finite")
        if not np.all(lower < upper):
            raise ConfigurationError("every lower bound must be strictly below its upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, lower: float, upper: float, dims: int) -> "SearchSpace":
        """Box with identical bounds in every dimension."""
        return cls(np.full(dims, float(lower)), np.full(dims, float(upper)))

    @property
    def dims(self) -> int:
        return self.lower.size

    def clamp(self, position: np.ndarray) -> np.ndarray:
        return np.minimum(np.maximum(position, self.lower), self.upper)

    def contains(self, position: np.ndarray) -> bool:
        return bool(np.all(position >= self.lower) and np.all(position <= self.upper))


class Individual:
    """One troop member: a position and, once evaluated, its fitness.

    Treated as immutable after construction; operations always build fresh
    instances rather than updating positions in place.
    """

    __slots__ = ("position", "fitness")

    def __init__(self, position: np.ndarray, fitness: Optional[float] = None):
        self.position = position
        self.fitness = fitness

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Individual(position={self.position!r}, fitness={self.fitness!r})"


class Population:
    """Immutable ordered collection of individuals.

    ``best_index`` points at the silverback (minimum fitness, first on ties)
    and is defined once every member has been evaluated.
    """

    __slots__ = ("members", "best_index", "_positions", "_fitnesses")

    def __init__(self, members: Sequence[Individual]):
        members = tuple(members)
        if not members:
            raise ConfigurationError("population cannot be empty")
        self.members = members
        self._positions = None
        self._fitnesses = None
        if all(m.evaluated for m in members):
            self.best_index = min(range(len(members)), key=lambda i: members[i].fitness)
        else:
            self.best_index = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, index: int) -> Individual:
        return self.members[index]

    @property
    def evaluated(self) -> bool:
        return self.best_index is not None

    @property
    def best(self) -> Individual:
        if self.best_index is None:
            raise ValueError("population is not fully evaluated")
        return self.members[self.best_index]

    def positions(self) -> np.ndarray:
        """Member positions stacked into an (N, dims) matrix."""
        if self._positions is None:
            self._positions = np.stack([m.position for m in self.members])
        return self._positions

    def fitnesses(self) -> np.ndarray:
        if self._fitnesses is None:
            if self.best_index is None:
                raise ValueError("population is not fully evaluated")
            self._fitnesses = np.array([m.fitness for m in self.members])
        return self._fitnesses


@dataclass(frozen=True)
class OptimizerConfig:
    """Run parameters.

    ``p`` is the probability of the relocate-to-a-random-point exploration
    branch, ``beta`` scales the competition step, ``w`` is the threshold on
    the decaying control scalar that selects the follow-the-silverback branch
    during exploitation, and ``theta_min``/``theta_max`` bound the rotation
    angle of the mutation gate.
    """

    pop_size: int = 30
    max_evals: int = 15_000
    p: float = 0.03
    beta: float = 3.0
    w: float = 0.8
    enable_obl: bool = True
    enable_qrg: bool = True
    theta_min: float = DEFAULT_THETA_MIN
    theta_max: float = DEFAULT_THETA_MAX
    seed: int = 0

    def __post_init__(self):
        if self.pop_size < 2:
            raise ConfigurationError("pop_size must be at least 2")
        if self.max_evals < 1:
            raise ConfigurationError("max_evals must be positive")
        if not 0.0 < self.p < 1.0:
            raise ConfigurationError("p must lie strictly between 0 and 1")
        if self.beta <= 0.0:
            raise ConfigurationError("beta must be positive")
        if self.w <= 0.0:
            raise ConfigurationError("w must be positive")
        if not self.theta_min < self.theta_max:
            raise ConfigurationError("theta_min must be below theta_max")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class IterationState:
    """Per-iteration schedule: decaying control scalar ``c`` and its draw ``f``."""

    iteration: int
    max_iter: int
    c: float
    f: float


@dataclass(frozen=True, eq=False)
class RunResult:
    """Outcome of one optimizer run.

    ``convergence`` holds the best-so-far fitness after initialization and
    after each iteration; ``mean_fitness`` the matching population averages.
    """

    best_position: np.ndarray
    best_fitness: float
    convergence: tuple
    mean_fitness: tuple
    evals_used: int


class EvalBudget:
    """Hard cap on objective invocations."""

    __slots__ = ("max_evals", "used")

    def __init__(self, max_evals: int):
        self.max_evals = int(max_evals)
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.max_evals - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.max_evals

    def take(self) -> bool:
        """Consume one evaluation if any remain."""
        if self.used < self.max_evals:
            self.used += 1
            return True
        return False


def init_eval_cost(cfg: OptimizerConfig) -> int:
    """Evaluations spent before the first iteration (2N with opposition)."""
    return 2 * cfg.pop_size if cfg.enable_obl else cfg.pop_size


def evals_per_iteration(cfg: OptimizerConfig) -> int:
    """Evaluations spent by one full iteration (3N with the mutation phase)."""
    return 3 * cfg.pop_size if cfg.enable_qrg else 2 * cfg.pop_size


def derive_max_iter(cfg: OptimizerConfig) -> int:
    """Iteration ceiling implied by the evaluation budget.

    The budget is counted in raw objective calls; whole iterations are
    scheduled until no full iteration fits anymore.
    """
    return (cfg.max_evals - init_eval_cost(cfg)) // evals_per_iteration(cfg)


def init_population(space: SearchSpace, n: int, rng) -> Population:
    """Draw ``n`` members uniformly in the box, fitness unevaluated."""
    if n < 2:
        raise ConfigurationError("population size must be at least 2")
    positions = rng.uniform(space.lower, space.upper, size=(n, space.dims))
    return Population([Individual(positions[i]) for i in range(n)])


def opposition_of(pop: Population, space: SearchSpace) -> Population:
    """Mirror every member through the box center: x' = lower + upper - x.

    The mirrored population is returned unevaluated; the input is untouched.
    The reflection is clamped so rounding at asymmetric bounds can never push
    a point outside the box (for symmetric bounds it is exact).
    """
    center_sum = space.lower + space.upper
    mirrored = []
    for i, member in enumerate(pop):
        if not space.contains(member.position):
            raise ValueError(f"member {i} is outside the search space")
        mirrored.append(Individual(space.clamp(center_sum - member.position)))
    return Population(mirrored)


def update_schedule(iteration: int, max_iter: int, rng) -> IterationState:
    """Draw the iteration's control scalars.

    ``f = cos(2 r) + 1`` with ``r ~ U[0,1]`` (radians), then
    ``c = f * (1 - iteration/max_iter)`` decays towards zero at the final
    iteration boundary.
    """
    if not 0 <= iteration < max_iter:
        raise ValueError("iteration index must satisfy 0 <= iteration < max_iter")
    r5 = rng.random()
    f = math.cos(2.0 * r5) + 1.0
    c = f * (1.0 - iteration / max_iter)
    return IterationState(iteration=iteration, max_iter=max_iter, c=c, f=f)


def exploration_move(
    x: Individual,
    pop: Population,
    state: IterationState,
    space: SearchSpace,
    cfg: OptimizerConfig,
    rng,
    candidates: Sequence[np.ndarray] = (),
) -> np.ndarray:
    """Three-branch exploration move; the result is clamped to the box.

    With branch selector ``r4 ~ U[0,1]``:

    * ``r4 < p``      — relocate to ``(upper - lower) * r1 + lower`` with a
      single scalar ``r1 ~ U[0,1]``: every coordinate sits at the same
      relative offset, i.e. a fresh point on the box diagonal, independent
      of ``x``;
    * ``r4 >= 0.5``   — move towards a random member:
      ``(r2 - c) * x_rand + L * (z ⊙ x)`` with ``L = c*l``, ``l ~ U[-1,1]``,
      ``z ~ U[-c,c]`` per dimension;
    * otherwise       — move relative to a random candidate produced earlier
      in the current sweep (``candidates``; falls back to a random incumbent
      while the sweep has produced none):
      ``x - L * (L + r3) * (x - gp_rand)``.

    Draw order: ``r4``; then per branch — A: ``r1``; B: ``r2``, member
    index, ``l``, ``z`` vector; C: ``r3``, candidate index, ``l``.
    """
    r4 = rng.random()
    if r4 < cfg.p:
        r1 = rng.random()
        new = (space.upper - space.lower) * r1 + space.lower
    elif r4 >= 0.5:
        r2 = rng.random()
        x_rand = pop.members[rng.integers(len(pop))].position
        l = rng.uniform(-1.0, 1.0)
        big_l = state.c * l
        z = rng.uniform(-state.c, state.c, space.dims)
        new = (r2 - state.c) * x_rand + big_l * (z * x.position)
    else:
        r3 = rng.random()
        pool = candidates if len(candidates) else pop.members
        chosen = pool[rng.integers(len(pool))]
        gp_rand = chosen.position if isinstance(chosen, Individual) else chosen
        l = rng.uniform(-1.0, 1.0)
        big_l = state.c * l
        diff = x.position - gp_rand
        new = x.position - big_l * (big_l * diff + r3 * diff)
    return space.clamp(new)


def follow_silverback(
    x: Individual,
    pop: Population,
    state: IterationState,
    space: SearchSpace,
    rng,
) -> np.ndarray:
    """Exploitation move led by the best member.

    Returns ``x + L * m ⊙ (x - x_best)`` clamped, with ``L = c*l``,
    ``l ~ U[-1,1]`` drawn fresh, and ``m`` the componentwise absolute value
    of the population mean. (``(|m|^g)^(1/g)`` collapses to ``|m|`` for every
    exponent ``g = 2^L``, with ``0^g`` taken as 0, so ``m`` is computed
    directly to avoid needless under/overflow.)
    """
    l = rng.uniform(-1.0, 1.0)
    big_l = state.c * l
    m = np.abs(pop.positions().mean(axis=0))
    new = x.position + big_l * m * (x.position - pop.best.position)
    return space.clamp(new)


def compete_for_females(
    x: Individual,
    best: Individual,
    state: IterationState,
    cfg: OptimizerConfig,
    space: SearchSpace,
    rng,
) -> np.ndarray:
    """Exploitation move contracting towards (or reflecting through) the best.

    ``q = 2 r6 - 1``; the impact vector is ``a = beta * e`` where ``e`` is a
    per-dimension standard normal vector when ``r7 >= 0.5`` and a single
    standard normal scalar broadcast across dimensions otherwise. Returns
    ``x_best - q * a ⊙ (x_best - x)`` clamped.

    Draw order: ``r6``, ``r7``, then ``e``.
    """
    r6 = rng.random()
    r7 = rng.random()
    q = 2.0 * r6 - 1.0
    if r7 >= 0.5:
        e = rng.standard_normal(space.dims)
    else:
        e = float(rng.standard_normal())
    a = cfg.beta * e
    new = best.position - q * a * (best.position - x.position)
    return space.clamp(new)


def rotate_pairs(position: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Planar rotation of consecutive coordinate pairs (0,1), (2,3), ...

    ``angles`` holds one signed angle per pair; an odd trailing coordinate
    passes through unchanged.
    """
    out = np.array(position, dtype=float)
    n_pairs = out.size // 2
    if n_pairs:
        a = position[0 : 2 * n_pairs : 2]
        b = position[1 : 2 * n_pairs : 2]
        cos_t = np.cos(angles)
        sin_t = np.sin(angles)
        out[0 : 2 * n_pairs : 2] = a * cos_t - b * sin_t
        out[1 : 2 * n_pairs : 2] = a * sin_t + b * cos_t
    return out


def qrg_mutate(
    pop: Population,
    best_fitness: float,
    worst_fitness: float,
    cfg: OptimizerConfig,
    rng,
    space: SearchSpace,
) -> Population:
    """Rotation-gate mutation: rotate each member's coordinate pairs towards
    the silverback by a fitness-adaptive angle.

    Angle magnitude per member: ``dtheta = theta_min + gamma*(theta_max -
    theta_min)`` with ``gamma = 1 - exp(-4*((bf - f)/(bf - wf))^2)`` — zero
    for the best member, close to ``1 - e^-4`` for the worst; when the
    population is fitness-flat (``bf == wf``) gamma is 0 for everyone.
    Per pair the rotation direction is the sign of the planar cross product
    with the silverback's pair (``+1`` on exact alignment), i.e. each pair
    turns towards the silverback's. Mutants are returned unevaluated and
    clamped; the input population is untouched.

    The mutation itself is deterministic; ``rng`` is accepted to keep the
    phase signature uniform with the other update operations.
    """
    if not pop.evaluated:
        raise ValueError("population must be fully evaluated before mutation")
    if best_fitness > worst_fitness:
        raise ValueError("best_fitness must not exceed worst_fitness")
    del rng
    silverback = pop.best.position
    n_pairs = space.dims // 2
    sb_a = silverback[0 : 2 * n_pairs : 2]
    sb_b = silverback[1 : 2 * n_pairs : 2]
    span = best_fitness - worst_fitness
    theta_span = cfg.theta_max - cfg.theta_min
    mutants = []
    for member in pop:
        if span != 0.0:
            ratio = (best_fitness - member.fitness) / span
            gamma = 1.0 - math.exp(-4.0 * ratio * ratio)
        else:
            gamma = 0.0
        dtheta = cfg.theta_min + gamma * theta_span
        a = member.position[0 : 2 * n_pairs : 2]
        b = member.position[1 : 2 * n_pairs : 2]
        direction = np.sign(a * sb_b - b * sb_a)
        direction[direction == 0.0] = 1.0
        rotated = rotate_pairs(member.position, dtheta * direction)
        mutants.append(Individual(space.clamp(rotated)))
    return Population(mutants)


def greedy_select(
    incumbents: Population,
    candidates: Population,
    objective: Objective,
    budget: EvalBudget,
) -> Population:
    """Member-wise replacement: keep a candidate only on strict improvement.

    Candidate fitness is evaluated here, consuming the budget in member
    order. If the budget runs out mid-sweep the remaining candidates are
    left unevaluated and their incumbents kept; the caller observes the
    shortfall through ``budget.exhausted``.
    """
    if len(incumbents) != len(candidates):
        raise ValueError("incumbent and candidate populations must have equal size")
    if not incumbents.evaluated:
        raise ValueError("incumbents must be evaluated")
    selected = []
    for incumbent, candidate in zip(incumbents, candidates):
        if not budget.take():
            selected.append(incumbent)
            continue
        fitness = objective(candidate.position)
        if fitness < incumbent.fitness:
            selected.append(Individual(candidate.position, fitness))
        else:
            selected.append(incumbent)
    return Population(selected)


def pool_select(pop: Population, mutated: Population) -> Population:
    """Keep the best N of the 2N union, stable on ties (pop before mutated)."""
    if len(pop) != len(mutated):
        raise ValueError("populations must have equal size")
    if not (pop.evaluated and mutated.evaluated):
        raise ValueError("both populations must be evaluated")
    merged = list(pop.members) + list(mutated.members)
    merged.sort(key=lambda m: m.fitness)
    return Population(merged[: len(pop)])


def _finite_checked(objective: Objective) -> Objective:
    def call(position: np.ndarray) -> float:
        value = float(objective(position))
        if not math.isfinite(value):
            raise EvaluationError(
                f"objective returned non-finite value {value!r} at position {position.tolist()}",
                position,
            )
        return value

    return call


def _mean_fitness(pop: Population) -> float:
    # scale before summing so means of huge (but finite) values cannot overflow
    fitnesses = pop.fitnesses()
    return float(np.sum(fitnesses / fitnesses.size))


def _evaluate_members(members, objective: Objective, budget: EvalBudget) -> Population:
    evaluated = []
    for member in members:
        if not budget.take():
            raise ConfigurationError("evaluation budget underflow during a scheduled phase")
        evaluated.append(Individual(member.position, objective(member.position)))
    return Population(evaluated)


def run_optimizer(
    objective: Objective,
    space: SearchSpace,
    cfg: OptimizerConfig,
    on_iteration: Optional[Callable[[int, Population], None]] = None,
) -> RunResult:
    """Run the full budget-bounded optimization loop.

    Initializes uniformly (doubled through opposition when ``enable_obl``,
    keeping the best half), then iterates exploration, exploitation and —
    when ``enable_qrg`` — the rotation mutation with best-N pool selection,
    for as many whole iterations as the evaluation budget affords. Traces
    are recorded after initialization and after every iteration.

    ``on_iteration(iteration, population)`` is invoked at the same points
    (0 for the initialized state); it must not mutate the population and
    consumes no randomness, so it cannot perturb the run.
    """
    rng = np.random.default_rng(cfg.seed)
    needed = init_eval_cost(cfg)
    if cfg.max_evals < needed:
        raise ConfigurationError(
            f"max_evals={cfg.max_evals} cannot cover initialization cost {needed}"
        )
    max_iter = derive_max_iter(cfg)
    budget = EvalBudget(cfg.max_evals)
    checked = _finite_checked(objective)

    pop = _evaluate_members(init_population(space, cfg.pop_size, rng), checked, budget)
    if cfg.enable_obl:
        mirrored = _evaluate_members(opposition_of(pop, space), checked, budget)
        pop = pool_select(pop, mirrored)

    convergence = [pop.best.fitness]
    mean_trace = [_mean_fitness(pop)]
    if on_iteration is not None:
        on_iteration(0, pop)

    for iteration in range(max_iter):
        state = update_schedule(iteration, max_iter, rng)

        moved = []
        for member in pop:
            moved.append(exploration_move(member, pop, state, space, cfg, rng, moved))
        pop = greedy_select(pop, Population([Individual(m) for m in moved]), checked, budget)

        best = pop.best
        follow = state.c >= cfg.w
        moved = []
        for member in pop:
            if follow:
                moved.append(follow_silverback(member, pop, state, space, rng))
            else:
                moved.append(compete_for_females(member, best, state, cfg, space, rng))
        pop = greedy_select(pop, Population([Individual(m) for m in moved]), checked, budget)

        if cfg.enable_qrg:
            fitnesses = pop.fitnesses()
            mutants = qrg_mutate(
                pop, float(fitnesses.min()), float(fitnesses.max()), cfg, rng, space
            )
            pop = pool_select(pop, _evaluate_members(mutants, checked, budget))

        convergence.append(pop.best.fitness)
        mean_trace.append(_mean_fitness(pop))
        if on_iteration is not None:
            on_iteration(iteration + 1, pop)

    best = pop.best
    best_position = np.array(best.position, dtype=float)
    best_position.setflags(write=False)
    return RunResult(
        best_position=best_position,
        best_fitness=best.fitness,
        convergence=tuple(convergence),
        mean_fitness=tuple(mean_trace),
        evals_used=budget.used,
    )

"""Artificial bee colony optimizer for box-constrained minimization.

Each food source is a candidate solution; its quality is the objective value
to be minimized. One cycle runs three phases:

1. **Employed phase** - every source is perturbed once along a single random
   dimension toward/away from a random partner, and the perturbation is kept
   only if it strictly improves the objective (greedy selection).
2. **Onlooker phase** - `pop_size` roulette draws, weighted by transformed
   quality, each applying the same perturb-and-select step to the drawn
   source.
3. **Scout phase** - the source with the most consecutive failed trials is
   re-drawn uniformly at random once its trial count reaches the limit
   (at most one replacement per cycle).

All randomness flows through one seeded generator, consumed in a fixed
order (see :func:`run`), so a (config, seed, objective) triple reproduces
the exact same history.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

FitnessFn = Callable[[np.ndarray], float]


@dataclass
class AbcConfig:
    """Control parameters of the colony.

    Attributes
    ----------
    nr_par : int
        Dimension of the search space (number of parameters optimized).
    pop_size : int
        Number of food sources; also the number of onlooker draws per cycle.
    nr_cycles : int
        Number of foraging cycles.
    max_nr : int
        Consecutive failed trials after which a source is abandoned.
    bounds : pair or sequence of pairs
        Either one (low, high) pair applied to every dimension or one pair
        per dimension. Candidates are clamped into these bounds.
    seed : int or None
        Seed for the colony's random generator; None draws fresh entropy.
    """

    nr_par: int
    pop_size: int = 20
    nr_cycles: int = 20
    max_nr: int = 10
    bounds: object = (0.0, 2.0)
    seed: int | None = None

    def __post_init__(self):
        if self.nr_par < 1:
            raise ValueError("nr_par must be at least 1")
        if self.pop_size < 2:
            raise ValueError("pop_size must be at least 2")
        if self.nr_cycles < 1:
            raise ValueError("nr_cycles must be at least 1")
        if self.max_nr < 1:
            raise ValueError("max_nr must be at least 1")
        pairs = np.asarray(self.bounds, dtype=float)
        if pairs.shape == (2,):
            pairs = np.tile(pairs, (self.nr_par, 1))
        if pairs.shape != (self.nr_par, 2):
            raise ValueError(
                f"bounds must be one (low, high) pair or {self.nr_par} pairs"
            )
        if not np.all(pairs[:, 0] < pairs[:, 1]):
            raise ValueError("each lower bound must be strictly below its upper bound")
        self.bounds = tuple((float(lo), float(hi)) for lo, hi in pairs)

    @property
    def lows(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds])

    @property
    def highs(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds])


@dataclass(eq=False)
class FoodSource:
    """A candidate solution with its cached objective value and the number
    of consecutive perturbations that failed to improve it."""

    position: np.ndarray
    fitness_value: float
    trials: int = 0


@dataclass(eq=False)
class Colony:
    """Mutable optimizer state across cycles."""

    config: AbcConfig
    rng: np.random.Generator
    sources: list[FoodSource]
    best_position: np.ndarray
    best_fitness: float
    cycle: int = 0
    evaluations: int = 0


@dataclass(frozen=True)
class CycleRecord:
    """Best-so-far snapshot recorded at the end of one cycle."""

    cycle: int
    best_fitness: float
    best_position: tuple[float, ...]
    evaluations: int
    scout_replacements: int


@dataclass(eq=False)
class AbcResult:
    best_position: np.ndarray
    best_fitness: float
    history: list[CycleRecord]
    evaluations: int


def _evaluate(fitness: FitnessFn, position: np.ndarray, where: str) -> float:
    try:
        return float(fitness(position))
    except Exception as exc:
        raise RuntimeError(f"objective evaluation failed at {where}") from exc


def init_colony(config: AbcConfig, fitness: FitnessFn) -> Colony:
    """Draw `pop_size` uniform positions in bounds and evaluate each once."""
    rng = np.random.default_rng(config.seed)
    positions = rng.uniform(config.lows, config.highs,
                            size=(config.pop_size, config.nr_par))
    sources = [
        FoodSource(position=positions[i].copy(),
                   fitness_value=_evaluate(fitness, positions[i].copy(),
                                           f"initialization, source {i}"))
        for i in range(config.pop_size)
    ]
    best = min(range(config.pop_size), key=lambda i: sources[i].fitness_value)
    return Colony(
        config=config,
        rng=rng,
        sources=sources,
        best_position=sources[best].position.copy(),
        best_fitness=sources[best].fitness_value,
        cycle=0,
        evaluations=config.pop_size,
    )


def perturb(i: int, colony: Colony) -> np.ndarray:
    """Candidate for source i: one random dimension j moved by
    rand(-1, 1) * (x_ij - x_kj) against a random partner k != i,
    clamped into bounds. All other dimensions are copied."""
    config, rng = colony.config, colony.rng
    k = int(rng.integers(config.pop_size - 1))
    if k >= i:
        k += 1
    j = int(rng.integers(config.nr_par))
    phi = float(rng.uniform(-1.0, 1.0))
    xi = colony.sources[i].position
    xk = colony.sources[k].position
    candidate = xi.copy()
    moved = xi[j] + phi * (xi[j] - xk[j])
    lo, hi = config.bounds[j]
    candidate[j] = min(max(moved, lo), hi)
    return candidate


def greedy_select(current: FoodSource, candidate_position: np.ndarray,
                  candidate_fitness: float, max_trials: int | None = None) -> FoodSource:
    """Keep the strictly better solution; ties keep the incumbent.

    Adoption resets the trial count; rejection increments it (capped at
    `max_trials` when given, so counters never overshoot the scout trigger).
    """
    if candidate_fitness < current.fitness_value:
        return FoodSource(position=np.array(candidate_position, dtype=float),
                          fitness_value=float(candidate_fitness), trials=0)
    trials = current.trials + 1
    if max_trials is not None:
        trials = min(trials, max_trials)
    return replace(current, trials=trials)


def onlooker_probabilities(colony: Colony) -> np.ndarray:
    """Selection probabilities proportional to transformed source quality.

    Raw objective values steer the wrong way under minimization, so quality
    is taken as 1 / (1 + f) for f >= 0 (and 1 + |f| for negative f), then
    normalized to sum to one.
    """
    values = np.array([s.fitness_value for s in colony.sources])
    quality = np.where(values >= 0.0, 1.0 / (1.0 + values), 1.0 + np.abs(values))
    return quality / quality.sum()


def _roulette(rng: np.random.Generator, cumulative: np.ndarray) -> int:
    draw = rng.random()
    index = int(np.searchsorted(cumulative, draw, side="right"))
    return min(index, len(cumulative) - 1)


def _update_best(colony: Colony) -> None:
    best = min(range(len(colony.sources)),
               key=lambda i: colony.sources[i].fitness_value)
    if colony.sources[best].fitness_value < colony.best_fitness:
        colony.best_fitness = colony.sources[best].fitness_value
        colony.best_position = colony.sources[best].position.copy()


def run(config: AbcConfig, fitness: FitnessFn) -> AbcResult:
    """Run the full optimizer and return the best solution with its history.

    The generator is consumed in a fixed order: the init block of uniform
    positions; then per cycle, for each employed source (partner k,
    dimension j, coefficient phi), for each of `pop_size` onlooker draws
    (roulette draw, then k, j, phi), and finally the scout's replacement
    position when one triggers.
    """
    colony = init_colony(config, fitness)
    history: list[CycleRecord] = []
    for cycle in range(1, config.nr_cycles + 1):
        colony.cycle = cycle
        evaluations_before = colony.evaluations

        for i in range(config.pop_size):
            candidate = perturb(i, colony)
            value = _evaluate(fitness, candidate,
                              f"cycle {cycle}, employed phase, source {i}")
            colony.evaluations += 1
            colony.sources[i] = greedy_select(colony.sources[i], candidate,
                                              value, config.max_nr)
        _update_best(colony)

        cumulative = np.cumsum(onlooker_probabilities(colony))
        for _ in range(config.pop_size):
            i = _roulette(colony.rng, cumulative)
            candidate = perturb(i, colony)
            value = _evaluate(fitness, candidate,
                              f"cycle {cycle}, onlooker phase, source {i}")
            colony.evaluations += 1
            colony.sources[i] = greedy_select(colony.sources[i], candidate,
                                              value, config.max_nr)
        _update_best(colony)

        scouts = 0
        worst = max(range(config.pop_size),
                    key=lambda i: colony.sources[i].trials)
        if colony.sources[worst].trials >= config.max_nr:
            position = colony.rng.uniform(config.lows, config.highs)
            value = _evaluate(fitness, position.copy(),
                              f"cycle {cycle}, scout phase, source {worst}")
            colony.evaluations += 1
            colony.sources[worst] = FoodSource(position=position,
                                               fitness_value=value, trials=0)
            scouts = 1
            _update_best(colony)

        history.append(CycleRecord(
            cycle=cycle,
            best_fitness=colony.best_fitness,
            best_position=tuple(colony.best_position),
            evaluations=colony.evaluations - evaluations_before,
            scout_replacements=scouts,
        ))
    return AbcResult(
        best_position=colony.best_position.copy(),
        best_fitness=colony.best_fitness,
        history=history,
        evaluations=colony.evaluations,
    )

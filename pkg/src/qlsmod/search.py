"""
The quantum local search loop: initial guess, subset selection, subproblem
solve, acceptance and convergence

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, Callable

import numpy as np

from .backends import SolverOptions, make_solver, solver_names
from .errors import ConfigInvalid, ConsistencyError, TooManyVariables, UnknownSolver
from .graph import Graph
from .modularity import GainTable, SpinAssignment, apply_move, init_gains, modularity
from .seeding import derive_seed
from .solvers import ENUMERATION_LIMIT, SubproblemSolver, solve_exact
from .subproblem import IsingModel, Subproblem, build_subproblem, subproblem_value, to_ising

logger = logging.getLogger(__name__)

# A move is accepted only if it raises modularity by more than this
IMPROVEMENT_EPS = 1e-12

# Tolerance of the incremental-versus-scratch modularity check
CONSISTENCY_TOL = 1e-9


class ConvergedReason(StrEnum):
    NO_IMPROVE = 'no_improve'
    MAX_ITER = 'max_iter'


@dataclass(frozen=True)
class QlsConfig:
    """Settings of one local-search run"""

    subset_size: int = 16
    no_improve_limit: int = 3
    max_iterations: int = 1000
    solver: str = 'exact'
    solver_options: SolverOptions = field(default_factory=SolverOptions)
    seed: int = 0
    check_consistency: bool = True

    def __post_init__(self) -> None:
        if self.subset_size < 1:
            raise ConfigInvalid(f'subset_size must be >= 1, got {self.subset_size}')
        if self.no_improve_limit < 1:
            raise ConfigInvalid(f'no_improve_limit must be >= 1, got {self.no_improve_limit}')
        if self.max_iterations < 1:
            raise ConfigInvalid(f'max_iterations must be >= 1, got {self.max_iterations}')
        if self.seed < 0:
            raise ConfigInvalid(f'seed must be non-negative, got {self.seed}')
        if self.solver not in solver_names():
            raise UnknownSolver(self.solver, solver_names())


@dataclass
class RunRecord:
    """
    Trajectory of one seeded run

    `modularity_trajectory[0]` is the modularity of the initial guess and
    entry i (i >= 1) the modularity after iteration i's acceptance decision.
    `accepted` and `subsets` hold one entry per iteration.
    """

    seed: int
    solver: str
    subset_size: int
    subset_clamped: bool
    modularity_trajectory: list[float] = field(default_factory=list)
    accepted: list[bool] = field(default_factory=list)
    subsets: list[list[int]] = field(default_factory=list)
    final_assignment: list[int] = field(default_factory=list)
    converged_reason: ConvergedReason = ConvergedReason.NO_IMPROVE
    solver_evaluations: int = 0
    solver_wall_time: float = 0.0
    wall_time: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.accepted)

    @property
    def accepted_moves(self) -> int:
        return sum(self.accepted)

    @property
    def final_modularity(self) -> float:
        return self.modularity_trajectory[-1]

    def to_json(self) -> dict[str, Any]:
        return {
            'seed': self.seed,
            'solver': self.solver,
            'subset_size': self.subset_size,
            'subset_clamped': self.subset_clamped,
            'iterations': self.iterations,
            'accepted_moves': self.accepted_moves,
            'final_modularity': self.final_modularity,
            'converged_reason': str(self.converged_reason),
            'modularity_trajectory': self.modularity_trajectory,
            'accepted': self.accepted,
            'subsets': self.subsets,
            'final_assignment': self.final_assignment,
            'solver_evaluations': self.solver_evaluations,
            'solver_wall_time': self.solver_wall_time,
            'wall_time': self.wall_time,
        }


def initial_guess(g: Graph, seed: int) -> SpinAssignment:
    """Uniformly random spins; the same seed gives the same guess for every solver"""
    rng = np.random.default_rng(seed)
    return (1 - 2 * rng.integers(0, 2, size=g.n)).astype(np.int8)


def populate_subset(t: GainTable, k: int) -> list[int]:
    """
    The min(k, n) vertices with the largest flip gain

    Ties go to the smaller vertex id; the result is sorted ascending.
    """
    if k < 1:
        raise ConfigInvalid(f'Subset size must be >= 1, got {k}')
    n = t.gain.shape[0]
    ids = np.arange(n)
    order = np.lexsort((ids, -t.gain))
    return sorted(int(v) for v in order[:min(k, n)])


IterationHook = Callable[[int, Subproblem, IsingModel], None]


def run_qls(
    g: Graph,
    cfg: QlsConfig,
    solver: SubproblemSolver | None = None,
    on_iteration: IterationHook | None = None,
) -> RunRecord:
    """
    Run local search until `no_improve_limit` consecutive iterations fail
    to improve modularity, or `max_iterations` is reached

    Every iteration re-optimizes the highest-gain subset with the chosen
    backend. A candidate is accepted only on strict improvement, so the
    trajectory never decreases whichever backend is used.
    """
    backend = solver if solver is not None else make_solver(cfg.solver, cfg.solver_options)
    size = min(cfg.subset_size, g.n)
    record = RunRecord(
        seed=cfg.seed,
        solver=backend.name,
        subset_size=size,
        subset_clamped=size < cfg.subset_size,
    )
    if record.subset_clamped:
        logger.info('Subset size %d clamped to n=%d', cfg.subset_size, g.n)

    started = time.perf_counter()
    spins = initial_guess(g, cfg.seed)
    table = init_gains(g, spins)
    record.modularity_trajectory.append(table.current_modularity)

    stall = 0
    record.converged_reason = ConvergedReason.MAX_ITER
    for iteration in range(cfg.max_iterations):
        subset = populate_subset(table, size)
        sp = build_subproblem(g, spins, subset)
        model = to_ising(sp)
        if on_iteration is not None:
            on_iteration(iteration, sp, model)

        result = backend.solve(model, derive_seed(cfg.seed, iteration))
        record.solver_evaluations += result.evaluations
        record.solver_wall_time += result.wall_time

        current = spins[list(sp.subset)]
        delta = sp.scale * (subproblem_value(sp, result.spins) - subproblem_value(sp, current))
        improved = delta > IMPROVEMENT_EPS
        if improved:
            before = table.current_modularity
            spins, table = apply_move(g, spins, table, sp.subset, result.spins)
            stall = 0
            if cfg.check_consistency:
                scratch = modularity(g, spins)
                if abs(scratch - table.current_modularity) > CONSISTENCY_TOL:
                    raise ConsistencyError(table.current_modularity, scratch)
                if abs((scratch - before) - delta) > CONSISTENCY_TOL:
                    raise ConsistencyError(before + delta, scratch)
        else:
            stall += 1

        record.accepted.append(improved)
        record.subsets.append(list(sp.subset))
        record.modularity_trajectory.append(table.current_modularity)
        logger.debug(
            'iteration %d: subset=%s delta=%.3g accepted=%s stall=%d H=%.10f',
            iteration, list(sp.subset), delta, improved, stall, table.current_modularity,
        )

        if stall >= cfg.no_improve_limit:
            record.converged_reason = ConvergedReason.NO_IMPROVE
            break

    record.final_assignment = [int(v) for v in spins]
    record.wall_time = time.perf_counter() - started
    logger.info(
        'Run seed=%d solver=%s finished after %d iterations (%s): H=%.10f',
        cfg.seed, backend.name, record.iterations, record.converged_reason,
        record.final_modularity,
    )
    return record


def global_optimum(g: Graph) -> tuple[float, SpinAssignment]:
    """
    Best 2-partition of the whole graph by exhaustive enumeration

    The whole vertex set is one subproblem with no boundary; feasible for
    n up to the enumeration limit.
    """
    if g.n > ENUMERATION_LIMIT:
        raise TooManyVariables(g.n, ENUMERATION_LIMIT)
    s0 = np.ones(g.n, dtype=np.int8)
    sp = build_subproblem(g, s0, range(g.n))
    result = solve_exact(to_ising(sp))
    return modularity(g, result.spins), result.spins

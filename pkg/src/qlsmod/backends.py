"""
Named subproblem backends behind the SubproblemSolver interface

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import ConfigInvalid, UnknownSolver
from .solvers import SolverResult, SubproblemSolver, default_schedule, solve_anneal, solve_exact
from .subproblem import IsingModel
from .variational import solve_variational


@dataclass(frozen=True)
class SolverOptions:
    """Per-backend knobs; each backend reads the ones it understands"""

    shots: int = 10_000
    opt_budget: int = 100
    depth: int = 1
    anneal_sweeps: int | None = None
    anneal_samples: int | None = None

    def __post_init__(self) -> None:
        if self.shots < 1:
            raise ConfigInvalid(f'shots must be >= 1, got {self.shots}')
        if self.opt_budget < 1:
            raise ConfigInvalid(f'opt_budget must be >= 1, got {self.opt_budget}')
        if self.depth < 0:
            raise ConfigInvalid(f'depth must be >= 0, got {self.depth}')
        if self.anneal_sweeps is not None and self.anneal_sweeps < 1:
            raise ConfigInvalid(f'anneal_sweeps must be >= 1, got {self.anneal_sweeps}')
        if self.anneal_samples is not None and self.anneal_samples < 1:
            raise ConfigInvalid(f'anneal_samples must be >= 1, got {self.anneal_samples}')


class ExactSolver:
    name = 'exact'

    def solve(self, model: IsingModel, seed: int) -> SolverResult:
        return solve_exact(model)


class AnnealSolver:
    """Best-of-N annealing; the schedule is derived per model"""

    name = 'anneal'

    def __init__(self, options: SolverOptions) -> None:
        self._options = options

    def solve(self, model: IsingModel, seed: int) -> SolverResult:
        schedule = default_schedule(
            model,
            samples=self._options.anneal_samples,
            sweeps=self._options.anneal_sweeps,
        )
        return solve_anneal(model, schedule, seed)


class VariationalSolver:
    name = 'variational'

    def __init__(self, options: SolverOptions) -> None:
        self._options = options

    def solve(self, model: IsingModel, seed: int) -> SolverResult:
        return solve_variational(
            model,
            depth=self._options.depth,
            budget=self._options.opt_budget,
            n_samples=self._options.shots,
            seed=seed,
        )


SOLVERS: dict[str, Callable[[SolverOptions], SubproblemSolver]] = {
    'exact': lambda options: ExactSolver(),
    'anneal': AnnealSolver,
    'variational': VariationalSolver,
}


def solver_names() -> list[str]:
    return list(SOLVERS)


def make_solver(name: str, options: SolverOptions | None = None) -> SubproblemSolver:
    """Return the backend registered under `name`"""
    if name not in SOLVERS:
        raise UnknownSolver(name, solver_names())
    return SOLVERS[name](options or SolverOptions())

"""
Ising subproblem solvers: exhaustive enumeration and a best-of-N
simulated-annealing sampler

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterator, Protocol

import numpy as np
import numpy.typing as npt

from .errors import InvalidSchedule, TooManyVariables
from .seeding import derive_seed
from .subproblem import IsingModel, energy

# Largest model solve_exact will enumerate
ENUMERATION_LIMIT = 24

# Configurations scored per vectorized chunk
_CHUNK = 1 << 16

# Variables enumerated inside each chunk
_LOW_BITS = 12

# Annealer restarts are run in fixed blocks; block b draws from
# derive_seed(seed, b), so results do not depend on scheduling.
ANNEAL_BLOCK = 5000


@dataclass(frozen=True, eq=False)
class SolverResult:
    """Best configuration a solver found for one Ising model"""

    spins: npt.NDArray[np.int8]
    energy: float
    evaluations: int
    solver_name: str
    wall_time: float = 0.0


class SubproblemSolver(Protocol):
    """
    Interface every backend implements

    Solvers hold no state between calls; the seed is the only source of
    randomness.
    """

    name: str

    def solve(self, model: IsingModel, seed: int) -> SolverResult: ...


def index_spins(indices: npt.NDArray[np.int64], n_vars: int) -> npt.NDArray[np.int8]:
    """
    Spin rows for configuration indices

    Bit b of index z (variable 0 = least significant bit) maps to spin 1 - 2b.
    """
    bits = (indices[:, None] >> np.arange(n_vars, dtype=np.int64)) & 1
    return (1 - 2 * bits).astype(np.int8)


def configuration_energies(model: IsingModel) -> Iterator[tuple[int, npt.NDArray[np.float64]]]:
    """
    Energies of every configuration in enumeration order

    Yields (first index, energies) per chunk. The lowest variables are
    enumerated once; each chunk pairs them with a run of settings of the
    remaining variables, so the cross couplings cost one matrix product.
    """
    n = model.n_vars
    low = min(n, _LOW_BITS)
    high = n - low
    x_low = index_spins(np.arange(1 << low, dtype=np.int64), low).astype(np.float64)
    low_values = (
        np.einsum('ij,ij->i', x_low @ model.J[:low, :low], x_low)
        + x_low @ model.h[:low]
        + model.offset
    )
    if high == 0:
        yield 0, low_values
        return

    cross = model.J[:low, low:].T + model.J[low:, :low]
    j_high = model.J[low:, low:]
    h_high = model.h[low:]
    rows = max(1, _CHUNK >> low)
    for first in range(0, 1 << high, rows):
        idx = np.arange(first, min(first + rows, 1 << high), dtype=np.int64)
        x_high = index_spins(idx, high).astype(np.float64)
        high_values = np.einsum('ij,ij->i', x_high @ j_high, x_high) + x_high @ h_high
        # index z = low bits + (high bits << low), so rows flatten in order
        values = (x_high @ cross) @ x_low.T + high_values[:, None] + low_values[None, :]
        yield first << low, values.ravel()


def all_energies(model: IsingModel) -> npt.NDArray[np.float64]:
    """Energy of every configuration, indexed by enumeration order"""
    return np.concatenate([chunk for _, chunk in configuration_energies(model)])


def solve_exact(model: IsingModel) -> SolverResult:
    """
    Certified ground state by exhaustive enumeration

    Ties go to the first configuration in enumeration order, so the
    all-(+1) configuration wins any tie it takes part in.
    """
    n = model.n_vars
    if n > ENUMERATION_LIMIT:
        raise TooManyVariables(n, ENUMERATION_LIMIT)

    started = time.perf_counter()
    best_index = 0
    best_energy = math.inf
    for lo, values in configuration_energies(model):
        pos = int(np.argmin(values))
        if values[pos] < best_energy:
            best_energy = float(values[pos])
            best_index = lo + pos

    spins = index_spins(np.array([best_index], dtype=np.int64), n)[0]
    return SolverResult(
        spins=spins,
        energy=energy(model, spins),
        evaluations=1 << n,
        solver_name='exact',
        wall_time=time.perf_counter() - started,
    )


@dataclass(frozen=True)
class AnnealSchedule:
    """Metropolis sampler settings: `samples` restarts of `sweeps` sweeps each"""

    sweeps: int
    t_initial: float
    t_final: float
    samples: int

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise InvalidSchedule(f'sweeps must be >= 1, got {self.sweeps}')
        if self.samples < 1:
            raise InvalidSchedule(f'samples must be >= 1, got {self.samples}')
        if not (self.t_final > 0 and self.t_initial >= self.t_final):
            raise InvalidSchedule(
                f'Need t_initial >= t_final > 0, got {self.t_initial} and {self.t_final}'
            )

    def temperatures(self) -> npt.NDArray[np.float64]:
        """Geometric ladder from t_initial to t_final, one rung per sweep"""
        if self.sweeps == 1:
            return np.array([self.t_initial])
        steps = np.arange(self.sweeps) / (self.sweeps - 1)
        return self.t_initial * (self.t_final / self.t_initial) ** steps


def default_schedule(
    model: IsingModel,
    samples: int | None = None,
    sweeps: int | None = None,
) -> AnnealSchedule:
    """
    Default schedule: 1000 sweeps cooling from twice the largest
    coefficient to 0.01, best of 10,000 samples
    """
    t_final = 0.01
    return AnnealSchedule(
        sweeps=1000 if sweeps is None else sweeps,
        t_initial=max(2.0 * model.max_coefficient(), t_final),
        t_final=t_final,
        samples=10_000 if samples is None else samples,
    )


def _anneal_block(
    model: IsingModel,
    coupling: npt.NDArray[np.float64],
    temperatures: npt.NDArray[np.float64],
    size: int,
    rng: np.random.Generator,
) -> tuple[float, npt.NDArray[np.float64]]:
    """Run `size` independent restarts; return the best (energy, spins) seen"""
    n = model.n_vars
    # variables on rows, restarts on columns
    spins = 1.0 - 2.0 * rng.integers(0, 2, size=(n, size)).astype(np.float64)
    current = (
        np.einsum('ij,ij->j', model.J @ spins, spins) + model.h @ spins + model.offset
    )
    best = current.copy()
    best_spins = spins.copy()

    delta = np.empty(size)
    accept = np.empty(size, dtype=bool)
    limits = np.empty((n, size), dtype=np.float32)
    for temperature in temperatures:
        # u < exp(-delta / T)  <=>  delta < -T log(u); log(0) = -inf always accepts
        with np.errstate(divide='ignore'):
            np.log(rng.random((n, size), dtype=np.float32), out=limits)
        limits *= -temperature
        for i in range(n):
            row = spins[i]
            np.dot(coupling[i], spins, out=delta)
            delta += model.h[i]
            delta *= row
            delta *= -2.0
            np.less(delta, limits[i], out=accept)
            if not accept.any():
                continue
            np.negative(row, out=row, where=accept)
            np.add(current, delta, out=current, where=accept)
        improved = current < best
        if improved.any():
            best[improved] = current[improved]
            best_spins[:, improved] = spins[:, improved]

    pos = int(np.argmin(best))
    return float(best[pos]), best_spins[:, pos].copy()


def solve_anneal(model: IsingModel, schedule: AnnealSchedule, seed: int) -> SolverResult:
    """
    Best of `schedule.samples` simulated-annealing restarts

    Each restart starts from uniformly random spins and performs
    single-spin Metropolis sweeps down the geometric temperature ladder.
    The lowest-energy configuration seen at the end of any sweep is kept.
    Deterministic for a fixed seed.
    """
    if not isinstance(schedule, AnnealSchedule):
        raise InvalidSchedule(f'Expected an AnnealSchedule, got {type(schedule).__name__}')

    started = time.perf_counter()
    coupling = model.J + model.J.T
    temperatures = schedule.temperatures()

    best_energy = math.inf
    best_spins: npt.NDArray[np.float64] | None = None
    for block, lo in enumerate(range(0, schedule.samples, ANNEAL_BLOCK)):
        size = min(ANNEAL_BLOCK, schedule.samples - lo)
        rng = np.random.default_rng(derive_seed(seed, block))
        value, spins = _anneal_block(model, coupling, temperatures, size, rng)
        if value < best_energy:
            best_energy, best_spins = value, spins

    assert best_spins is not None
    result_spins = best_spins.astype(np.int8)
    return SolverResult(
        spins=result_spins,
        energy=energy(model, result_spins),
        evaluations=schedule.samples,
        solver_name='anneal',
        wall_time=time.perf_counter() - started,
    )

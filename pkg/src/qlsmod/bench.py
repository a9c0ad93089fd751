"""
Experiment harness: seeded benchmark fan-out, subset-size sweeps and CSV
result files

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

import csv
import logging
import math
import multiprocessing
import os
import statistics
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Sequence, TextIO, TypeVar

from .backends import SolverOptions, solver_names
from .errors import ConfigInvalid, QlsError, UnknownSolver
from .graph import Graph, generate_planted_partition, load_edge_list, planted_assignment
from .modularity import modularity
from .search import QlsConfig, global_optimum, run_qls

logger = logging.getLogger(__name__)

THREADS_ENV = 'QLS_THREADS'

T = TypeVar('T')
R = TypeVar('R')


def _fmt(value: float) -> str:
    return f'{value:.12g}'


@dataclass(frozen=True)
class GraphSpec:
    """An edge-list path or planted-partition parameters"""

    path: str | None = None
    n: int = 0
    p_in: float = 0.0
    p_out: float = 0.0
    seed: int = 0

    @property
    def graph_id(self) -> str:
        if self.path is not None:
            return Path(self.path).stem
        return f'planted-n{self.n}-pin{self.p_in:g}-pout{self.p_out:g}-s{self.seed}'

    def load(self) -> Graph:
        if self.path is not None:
            with open(self.path, encoding='utf-8') as f:
                graph, _ = load_edge_list(f)
            return graph
        return generate_planted_partition(self.n, self.p_in, self.p_out, self.seed)


@dataclass(frozen=True)
class ExperimentSpec:
    """Cross product of graphs, solvers and seeds with shared run settings"""

    graphs: tuple[GraphSpec, ...]
    solvers: tuple[str, ...]
    seeds: tuple[int, ...]
    solver_options: SolverOptions = field(default_factory=SolverOptions)
    subset_size: int = 16
    no_improve_limit: int = 3
    max_iterations: int = 1000
    global_baseline: bool = False

    def __post_init__(self) -> None:
        if not self.graphs:
            raise ConfigInvalid('Experiment needs at least one graph')
        if not self.seeds:
            raise ConfigInvalid('Experiment needs at least one seed')
        if not self.solvers:
            raise ConfigInvalid('Experiment needs at least one solver')
        for name in self.solvers:
            if name not in solver_names():
                raise UnknownSolver(name, solver_names())

    def config(self, solver: str, seed: int, subset_size: int | None = None) -> QlsConfig:
        return QlsConfig(
            subset_size=self.subset_size if subset_size is None else subset_size,
            no_improve_limit=self.no_improve_limit,
            max_iterations=self.max_iterations,
            solver=solver,
            solver_options=self.solver_options,
            seed=seed,
        )


def seed_list(count: int | None = None, explicit: Sequence[int] | None = None) -> tuple[int, ...]:
    """Explicit seeds win; otherwise 0..count-1"""
    if explicit:
        return tuple(explicit)
    if count is None or count < 1:
        raise ConfigInvalid('Need a positive seed count or an explicit seed list')
    return tuple(range(count))


@dataclass(frozen=True)
class ResultRow:
    """One (graph, solver, seed) run"""

    graph: str
    n: int
    m: int
    solver: str
    seed: int
    modularity: float
    iterations: int
    accepted_moves: int
    wall_time_s: float
    converged_reason: str
    status: str = 'ok'

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_csv(self) -> list[str]:
        return [
            self.graph, str(self.n), str(self.m), self.solver, str(self.seed),
            _fmt(self.modularity), str(self.iterations), str(self.accepted_moves),
            _fmt(self.wall_time_s), self.converged_reason, self.status,
        ]

    @classmethod
    def from_csv(cls, row: dict[str, str]) -> ResultRow:
        return cls(
            graph=row['graph'],
            n=int(row['n']),
            m=int(row['m']),
            solver=row['solver'],
            seed=int(row['seed']),
            modularity=float(row['modularity']),
            iterations=int(row['iterations']),
            accepted_moves=int(row['accepted_moves']),
            wall_time_s=float(row['wall_time_s']),
            converged_reason=row['converged_reason'],
            status=row['status'],
        )


@dataclass(frozen=True)
class SweepRow:
    """One (subset size, seed) run of a sweep"""

    subset_size: int
    seed: int
    iterations: int
    final_modularity: float
    planted_modularity: float
    clamped: bool
    converged_reason: str = ''
    status: str = 'ok'

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_csv(self) -> list[str]:
        return [
            str(self.subset_size), str(self.seed), str(self.iterations),
            _fmt(self.final_modularity), _fmt(self.planted_modularity),
            str(int(self.clamped)), self.converged_reason, self.status,
        ]

    @classmethod
    def from_csv(cls, row: dict[str, str]) -> SweepRow:
        return cls(
            subset_size=int(row['subset_size']),
            seed=int(row['seed']),
            iterations=int(row['iterations']),
            final_modularity=float(row['final_modularity']),
            planted_modularity=float(row['planted_modularity']),
            clamped=bool(int(row['clamped'])),
            converged_reason=row['converged_reason'],
            status=row['status'],
        )


def resolve_threads(env: dict[str, str] | None = None) -> int:
    """Worker count from QLS_THREADS (default 1)"""
    raw = (os.environ if env is None else env).get(THREADS_ENV, '').strip()
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigInvalid(f'{THREADS_ENV} must be an integer, got {raw!r}') from None
    if threads < 1:
        raise ConfigInvalid(f'{THREADS_ENV} must be >= 1, got {threads}')
    return threads


def _fan_out(work: Callable[[T], R], tasks: list[T], workers: int) -> list[R]:
    """Run tasks sequentially or on a process pool; results in task order"""
    if workers <= 1 or len(tasks) <= 1:
        return [work(task) for task in tasks]
    with multiprocessing.Pool(processes=min(workers, len(tasks))) as pool:
        indexed = list(pool.imap_unordered(_Indexed(work), list(enumerate(tasks))))
    indexed.sort(key=lambda pair: pair[0])
    return [result for _, result in indexed]


class _Indexed:
    """Picklable wrapper that carries the task index through the pool"""

    def __init__(self, work: Callable[[Any], Any]) -> None:
        self._work = work

    def __call__(self, item: tuple[int, Any]) -> tuple[int, Any]:
        index, task = item
        return index, self._work(task)


_BenchTask = tuple[str, Graph, QlsConfig]


def _bench_run(task: _BenchTask) -> ResultRow:
    graph_id, graph, cfg = task
    try:
        record = run_qls(graph, cfg)
    except QlsError as e:
        logger.warning('Run %s/%s/seed=%d failed: %s', graph_id, cfg.solver, cfg.seed, e)
        return ResultRow(
            graph=graph_id, n=graph.n, m=graph.m, solver=cfg.solver, seed=cfg.seed,
            modularity=math.nan, iterations=0, accepted_moves=0, wall_time_s=0.0,
            converged_reason='', status=f'error:{type(e).__name__}',
        )
    return ResultRow(
        graph=graph_id, n=graph.n, m=graph.m, solver=cfg.solver, seed=cfg.seed,
        modularity=record.final_modularity, iterations=record.iterations,
        accepted_moves=record.accepted_moves, wall_time_s=record.wall_time,
        converged_reason=str(record.converged_reason),
    )


def _baseline_row(graph_id: str, graph: Graph) -> ResultRow:
    try:
        value, _ = global_optimum(graph)
    except QlsError as e:
        return ResultRow(
            graph=graph_id, n=graph.n, m=graph.m, solver='global', seed=0,
            modularity=math.nan, iterations=0, accepted_moves=0, wall_time_s=0.0,
            converged_reason='', status=f'error:{type(e).__name__}',
        )
    return ResultRow(
        graph=graph_id, n=graph.n, m=graph.m, solver='global', seed=0,
        modularity=value, iterations=0, accepted_moves=0, wall_time_s=0.0,
        converged_reason='',
    )


def run_bench(spec: ExperimentSpec, workers: int = 1) -> list[ResultRow]:
    """
    Run every (graph, solver, seed) combination

    Rows come back ordered by graph, then solver, then seed, whatever the
    worker count. A given seed yields the same initial guess for every
    solver.
    """
    loaded = [(gs.graph_id, gs.load()) for gs in spec.graphs]
    tasks: list[_BenchTask] = [
        (graph_id, graph, spec.config(solver, seed))
        for graph_id, graph in loaded
        for solver in spec.solvers
        for seed in spec.seeds
    ]
    rows = _fan_out(_bench_run, tasks, workers)
    if spec.global_baseline:
        rows.extend(_baseline_row(graph_id, graph) for graph_id, graph in loaded)
    return rows


_SweepTask = tuple[Graph, QlsConfig, int, float]


def _sweep_run(task: _SweepTask) -> SweepRow:
    graph, cfg, requested, planted = task
    try:
        record = run_qls(graph, cfg)
    except QlsError as e:
        logger.warning('Sweep run size=%d seed=%d failed: %s', requested, cfg.seed, e)
        return SweepRow(
            subset_size=requested, seed=cfg.seed, iterations=0,
            final_modularity=math.nan, planted_modularity=planted,
            clamped=requested > graph.n, status=f'error:{type(e).__name__}',
        )
    return SweepRow(
        subset_size=requested, seed=cfg.seed, iterations=record.iterations,
        final_modularity=record.final_modularity, planted_modularity=planted,
        clamped=record.subset_clamped, converged_reason=str(record.converged_reason),
    )


def run_sweep(
    graph: Graph,
    subset_sizes: Sequence[int],
    seeds: Sequence[int],
    solver: str = 'exact',
    options: SolverOptions | None = None,
    no_improve_limit: int = 3,
    max_iterations: int = 1000,
    workers: int = 1,
    planted_modularity: float | None = None,
) -> list[SweepRow]:
    """
    Iterations to convergence for each subset size and seed

    `planted_modularity` is copied into every row. When omitted, graph is
    taken to be a freshly generated planted partition with vertex ids in
    block order.
    """
    if not subset_sizes:
        raise ConfigInvalid('Sweep needs at least one subset size')
    if not seeds:
        raise ConfigInvalid('Sweep needs at least one seed')
    planted = planted_modularity
    if planted is None:
        planted = modularity(graph, planted_assignment(graph.n)) if graph.n % 2 == 0 else math.nan
    base = QlsConfig(
        no_improve_limit=no_improve_limit,
        max_iterations=max_iterations,
        solver=solver,
        solver_options=options or SolverOptions(),
    )
    tasks: list[_SweepTask] = [
        (graph, replace(base, subset_size=size, seed=seed), size, planted)
        for size in subset_sizes
        for seed in seeds
    ]
    return _fan_out(_sweep_run, tasks, workers)


def write_rows(rows: Iterable[ResultRow] | Iterable[SweepRow], header: list[str], out: TextIO) -> None:
    w = csv.writer(out, lineterminator='\n')
    w.writerow(header)
    for row in rows:
        w.writerow(row.to_csv())


def read_result_rows(src: TextIO) -> Iterator[ResultRow]:
    for row in csv.DictReader(src):
        yield ResultRow.from_csv(row)


def read_sweep_rows(src: TextIO) -> Iterator[SweepRow]:
    for row in csv.DictReader(src):
        yield SweepRow.from_csv(row)


def _spread(values: list[float]) -> str:
    if not values:
        return 'n/a'
    return f'{min(values):.6g}/{statistics.median(values):.6g}/{max(values):.6g}'


def bench_summary(rows: Sequence[ResultRow]) -> str:
    """Min/median/max of modularity and iterations per graph and solver"""
    groups: dict[tuple[str, str], list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.graph, row.solver), []).append(row)

    lines = ['graph solver runs failed modularity(min/med/max) iterations(min/med/max)']
    for (graph_id, solver), group in groups.items():
        ok = [r for r in group if r.status == 'ok']
        lines.append(
            f'{graph_id} {solver} {len(group)} {len(group) - len(ok)} '
            f'{_spread([r.modularity for r in ok])} '
            f'{_spread([float(r.iterations) for r in ok])}'
        )
    return '\n'.join(lines)


def median_iterations(rows: Sequence[SweepRow]) -> dict[int, float]:
    """Median iterations per subset size over successful runs, in size order"""
    by_size: dict[int, list[int]] = {}
    for row in rows:
        if row.status == 'ok':
            by_size.setdefault(row.subset_size, []).append(row.iterations)
    return {size: float(statistics.median(its)) for size, its in sorted(by_size.items())}


def sweep_summary(rows: Sequence[SweepRow]) -> str:
    lines = ['subset_size median_iterations']
    lines.extend(f'{size} {value:g}' for size, value in median_iterations(rows).items())
    return '\n'.join(lines)

"""
Command-line front end: run, bench, sweep and generate

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import math
import sys
from enum import IntEnum
from pathlib import Path
from typing import Iterator, Sequence, TextIO

from . import __version__
from .backends import SolverOptions, solver_names
from .bench import (
    ExperimentSpec,
    GraphSpec,
    ResultRow,
    SweepRow,
    bench_summary,
    resolve_threads,
    run_bench,
    run_sweep,
    seed_list,
    sweep_summary,
    write_rows,
)
from .errors import (
    ConfigInvalid,
    GraphError,
    InvalidProbability,
    OddN,
    QlsError,
    SolverError,
)
from .graph import (
    generate_planted_partition,
    load_edge_list,
    planted_assignment_for,
    write_edge_list,
)
from .modularity import modularity
from .search import IterationHook, QlsConfig, run_qls
from .subproblem import IsingModel, Subproblem, dump_ising

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    FAILURE = 1
    USAGE = 2
    INPUT = 3
    SOLVER = 4


class _UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated integers, got {text!r}') from None


def _planted(text: str) -> GraphSpec:
    parts = text.split(',')
    if len(parts) not in (3, 4):
        raise argparse.ArgumentTypeError(f'expected N,P_IN,P_OUT[,SEED], got {text!r}')
    try:
        seed = int(parts[3]) if len(parts) == 4 else 0
        return GraphSpec(n=int(parts[0]), p_in=float(parts[1]), p_out=float(parts[2]), seed=seed)
    except ValueError:
        raise argparse.ArgumentTypeError(f'bad planted-partition spec {text!r}') from None


def _add_solver_options(p: argparse.ArgumentParser) -> None:
    p.add_argument('--shots', type=int, default=10_000, help='variational samples per solve')
    p.add_argument('--opt-budget', type=int, default=100, help='variational objective evaluations')
    p.add_argument('--depth', type=int, default=1, help='entangling layers of the ansatz')
    p.add_argument('--sweeps', type=int, default=None, help='annealer sweeps per sample')
    p.add_argument('--anneal-samples', type=int, default=None, help='annealer restarts per solve')
    p.add_argument('--no-improve-limit', type=int, default=3)
    p.add_argument('--max-iterations', type=int, default=1000)


def _solver_options(args: argparse.Namespace) -> SolverOptions:
    return SolverOptions(
        shots=args.shots,
        opt_budget=args.opt_budget,
        depth=args.depth,
        anneal_sweeps=args.sweeps,
        anneal_samples=args.anneal_samples,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qlsmod',
        description='Quantum local search for 2-community modularity maximization',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    parser.add_argument('-q', '--quiet', action='store_true', help='errors only')
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='one seeded local-search run, JSON record')
    run.add_argument('--graph', required=True, help='edge-list file')
    run.add_argument('--solver', required=True, choices=solver_names())
    run.add_argument('--seed', type=int, required=True)
    run.add_argument('--subset-size', type=int, default=16)
    run.add_argument('--out', help='JSON output path (default stdout)')
    run.add_argument('--dump-subproblems', metavar='DIR', help='write each Ising subproblem as text')
    _add_solver_options(run)

    bench = sub.add_parser('bench', help='graphs x solvers x seeds, CSV rows')
    bench.add_argument('--graph', action='append', default=[], help='edge-list file (repeatable)')
    bench.add_argument('--planted', action='append', default=[], type=_planted,
                       metavar='N,P_IN,P_OUT[,SEED]', help='generated graph (repeatable)')
    bench.add_argument('--solver', action='append', choices=solver_names(),
                       help='backend (repeatable, default exact)')
    bench.add_argument('--seeds', type=int, default=None, help='use seeds 0..K-1')
    bench.add_argument('--seed-list', type=_int_list, default=None, help='explicit comma-separated seeds')
    bench.add_argument('--subset-size', type=int, default=16)
    bench.add_argument('--global-baseline', action='store_true',
                       help='add one exhaustive-enumeration row per graph')
    bench.add_argument('--out', help='CSV output path (default stdout)')
    _add_solver_options(bench)

    sweep = sub.add_parser('sweep', help='iterations to convergence per subset size')
    sweep.add_argument('--graph', help='edge-list file instead of a generated graph')
    sweep.add_argument('--n', type=int, default=500)
    sweep.add_argument('--p-in', type=float, default=0.1)
    sweep.add_argument('--p-out', type=float, default=0.01)
    sweep.add_argument('--graph-seed', type=int, default=0)
    sweep.add_argument('--subset-sizes', type=_int_list, default=[4, 8, 16, 24])
    sweep.add_argument('--seeds', type=int, default=10)
    sweep.add_argument('--solver', default='exact', choices=solver_names())
    sweep.add_argument('--out', help='CSV output path (default stdout)')
    _add_solver_options(sweep)

    gen = sub.add_parser('generate', help='write a planted-partition edge list')
    gen.add_argument('--n', type=int, required=True)
    gen.add_argument('--p-in', type=float, required=True)
    gen.add_argument('--p-out', type=float, required=True)
    gen.add_argument('--seed', type=int, required=True)
    gen.add_argument('--out', required=True)

    return parser


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            yield f


def cmd_run(args: argparse.Namespace) -> int:
    with open(args.graph, encoding='utf-8') as f:
        graph, report = load_edge_list(f)
    cfg = QlsConfig(
        subset_size=args.subset_size,
        no_improve_limit=args.no_improve_limit,
        max_iterations=args.max_iterations,
        solver=args.solver,
        solver_options=_solver_options(args),
        seed=args.seed,
    )

    hook: IterationHook | None = None
    if args.dump_subproblems:
        dump_dir = Path(args.dump_subproblems)
        dump_dir.mkdir(parents=True, exist_ok=True)

        def _dump(iteration: int, sp: Subproblem, model: IsingModel) -> None:
            with open(dump_dir / f'iter{iteration:04d}.ising', 'w', encoding='utf-8') as out:
                out.write(f'# subset {" ".join(str(v) for v in sp.subset)}\n')
                dump_ising(model, out)

        hook = _dump

    record = run_qls(graph, cfg, on_iteration=hook)
    payload = {
        'graph': args.graph,
        'n': graph.n,
        'm': graph.m,
        'duplicate_edges': report.duplicates,
        'labels': list(graph.labels),
        **record.to_json(),
    }
    with _output(args.out) as out:
        json.dump(payload, out, indent=2)
        out.write('\n')
    return ExitCode.OK


def cmd_bench(args: argparse.Namespace) -> int:
    graphs = tuple([GraphSpec(path=p) for p in args.graph] + list(args.planted))
    if not graphs:
        raise _UsageError('bench needs at least one --graph or --planted')
    spec = ExperimentSpec(
        graphs=graphs,
        solvers=tuple(args.solver or ['exact']),
        seeds=seed_list(args.seeds, args.seed_list),
        solver_options=_solver_options(args),
        subset_size=args.subset_size,
        no_improve_limit=args.no_improve_limit,
        max_iterations=args.max_iterations,
        global_baseline=args.global_baseline,
    )
    rows = run_bench(spec, workers=resolve_threads())
    with _output(args.out) as out:
        write_rows(rows, ResultRow.header(), out)
    print(bench_summary(rows), file=sys.stderr)
    return ExitCode.OK if all(r.status == 'ok' for r in rows) else ExitCode.FAILURE


def cmd_sweep(args: argparse.Namespace) -> int:
    planted: float | None = None
    if args.graph:
        with open(args.graph, encoding='utf-8') as f:
            graph, report = load_edge_list(f)
        spins = planted_assignment_for(graph, report)
        if spins is None:
            logger.warning('%s has no planted-partition header; planted_modularity is nan', args.graph)
            planted = math.nan
        else:
            planted = modularity(graph, spins)
    else:
        graph = generate_planted_partition(args.n, args.p_in, args.p_out, args.graph_seed)
    rows = run_sweep(
        graph,
        subset_sizes=args.subset_sizes,
        seeds=seed_list(args.seeds),
        solver=args.solver,
        options=_solver_options(args),
        no_improve_limit=args.no_improve_limit,
        max_iterations=args.max_iterations,
        workers=resolve_threads(),
        planted_modularity=planted,
    )
    with _output(args.out) as out:
        write_rows(rows, SweepRow.header(), out)
    print(sweep_summary(rows), file=sys.stderr)
    return ExitCode.OK if all(r.status == 'ok' for r in rows) else ExitCode.FAILURE


def cmd_generate(args: argparse.Namespace) -> int:
    graph = generate_planted_partition(args.n, args.p_in, args.p_out, args.seed)
    header = [
        'planted partition',
        f'n={args.n} p_in={args.p_in!r} p_out={args.p_out!r} seed={args.seed}',
        f'm={graph.m}',
    ]
    with open(args.out, 'w', encoding='utf-8') as out:
        write_edge_list(graph, out, header)
    return ExitCode.OK


_COMMANDS = {
    'run': cmd_run,
    'bench': cmd_bench,
    'sweep': cmd_sweep,
    'generate': cmd_generate,
}


def _exit_code(error: Exception) -> ExitCode:
    if isinstance(error, (_UsageError, ConfigInvalid, InvalidProbability, OddN)):
        return ExitCode.USAGE
    if isinstance(error, (GraphError, OSError)):
        return ExitCode.INPUT
    if isinstance(error, SolverError):
        return ExitCode.SOLVER
    return ExitCode.FAILURE


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')

    try:
        return int(_COMMANDS[args.command](args))
    except (QlsError, OSError, _UsageError) as e:
        print(f'qlsmod {args.command}: {e}', file=sys.stderr)
        return int(_exit_code(e))


if __name__ == '__main__':
    sys.exit(main())

"""
qlsmod - quantum local search for 2-community modularity maximization

Repeatedly re-optimizes a small, high-gain vertex subset as a
boundary-conditioned Ising subproblem and hands it to an interchangeable
solver: exhaustive enumeration, a best-of-N annealing sampler, or a
simulated variational circuit.

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

__version__ = '0.1.0'

from .graph import Graph, load_edge_list, generate_planted_partition, modularity_coefficient
from .modularity import GainTable, apply_move, flip_gain, init_gains, modularity
from .subproblem import IsingModel, Subproblem, build_subproblem, energy, to_ising
from .solvers import AnnealSchedule, SolverResult, default_schedule, solve_anneal, solve_exact
from .variational import solve_variational
from .backends import SolverOptions, make_solver
from .search import QlsConfig, RunRecord, global_optimum, initial_guess, populate_subset, run_qls

__all__ = [
    'Graph', 'load_edge_list', 'generate_planted_partition', 'modularity_coefficient',
    'GainTable', 'apply_move', 'flip_gain', 'init_gains', 'modularity',
    'IsingModel', 'Subproblem', 'build_subproblem', 'energy', 'to_ising',
    'AnnealSchedule', 'SolverResult', 'default_schedule', 'solve_anneal', 'solve_exact',
    'solve_variational',
    'SolverOptions', 'make_solver',
    'QlsConfig', 'RunRecord', 'global_optimum', 'initial_guess', 'populate_subset', 'run_qls',
]

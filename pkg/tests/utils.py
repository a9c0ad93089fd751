"""
Shared fixtures and brute-force oracles for the qlsmod tests

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

import itertools

import numpy as np

from qlsmod.graph import Graph, load_edge_list
from qlsmod.modularity import modularity
from qlsmod.subproblem import IsingModel, energy

# Two triangles {0,1,2} and {3,4,5} joined by the edge (2,3); m = 7
BARBELL_EDGES = '0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n'

BARBELL_OPTIMUM = 5 / 14


def barbell() -> Graph:
    graph, _ = load_edge_list(BARBELL_EDGES)
    return graph


def spins(*values: int) -> np.ndarray:
    return np.array(values, dtype=np.int8)


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """G(n, p) redrawn until it has at least one edge"""
    while True:
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        if edges:
            return Graph.from_edges(n, edges)


def random_spins(n: int, rng: np.random.Generator) -> np.ndarray:
    return (1 - 2 * rng.integers(0, 2, size=n)).astype(np.int8)


def random_model(n: int, rng: np.random.Generator, with_couplings: bool = True) -> IsingModel:
    """Couplings and fields uniform in [-1, 1]"""
    J = np.triu(rng.uniform(-1.0, 1.0, size=(n, n)), k=1) if with_couplings else np.zeros((n, n))
    return IsingModel(J=J, h=rng.uniform(-1.0, 1.0, size=n))


def all_assignments(n: int):
    for values in itertools.product((-1, 1), repeat=n):
        yield np.array(values, dtype=np.int8)


def brute_force_modularity(g: Graph) -> float:
    """Best modularity over all 2^n assignments"""
    return max(modularity(g, s) for s in all_assignments(g.n))


def brute_force_energies(model: IsingModel) -> tuple[float, float]:
    """(min, max) energy over all configurations"""
    values = [energy(model, s) for s in all_assignments(model.n_vars)]
    return min(values), max(values)

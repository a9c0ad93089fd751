"""
Simple undirected graphs: edge-list ingestion, modularity-matrix access and
planted-partition generation

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
import numpy.typing as npt

from .errors import (
    ConfigInvalid,
    EmptyGraph,
    InvalidProbability,
    MalformedLine,
    OddN,
    SelfLoop,
    SubsetOutOfRange,
)

logger = logging.getLogger(__name__)

# Fresh seeds tried by the generator before giving up on an edgeless draw
_MAX_REGENERATIONS = 100


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Immutable simple undirected graph

    Vertices are dense indices 0..n-1; `labels[i]` is the original name of
    vertex i. `edges` holds each edge once as a (u, v) row with u < v.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    degree: npt.NDArray[np.int64]
    m: int
    labels: tuple[str, ...]
    edges: npt.NDArray[np.int64]

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Iterable[str] | None = None,
    ) -> Graph:
        """
        Build a graph on n vertices

        Duplicate edges collapse to one. Raises SelfLoop for (u, u) and
        EmptyGraph when no edge remains.
        """
        names = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(names) != n:
            raise ConfigInvalid(f'Expected {n} labels, got {len(names)}')

        unique: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n):
                raise SubsetOutOfRange(u, n)
            if not (0 <= v < n):
                raise SubsetOutOfRange(v, n)
            if u == v:
                raise SelfLoop(names[u])
            unique.add((u, v) if u < v else (v, u))

        if not unique:
            raise EmptyGraph()

        neighbors: list[list[int]] = [[] for _ in range(n)]
        for u, v in unique:
            neighbors[u].append(v)
            neighbors[v].append(u)

        adjacency = tuple(tuple(sorted(nbrs)) for nbrs in neighbors)
        degree = np.fromiter((len(a) for a in adjacency), dtype=np.int64, count=n)
        edge_array = np.array(sorted(unique), dtype=np.int64).reshape(-1, 2)
        return cls(
            n=n,
            adjacency=adjacency,
            degree=degree,
            m=len(unique),
            labels=names,
            edges=edge_array,
        )

    def has_edge(self, i: int, j: int) -> bool:
        """Adjacency test by binary search in i's sorted neighbor list"""
        nbrs = self.adjacency[i]
        pos = bisect.bisect_left(nbrs, j)
        return pos < len(nbrs) and nbrs[pos] == j


@dataclass
class LoadReport:
    """
    What the edge-list loader saw besides the edges it kept

    `header` collects `key=value` tokens found in comment lines, such as
    the provenance line `generate` writes.
    """

    comments: int = 0
    duplicates: int = 0
    labels: dict[str, int] = field(default_factory=dict)
    header: dict[str, str] = field(default_factory=dict)


class _EdgeListReader:
    """
    Line reader for whitespace-separated edge lists

    Densifies labels in first-appearance order and counts duplicates
    as it goes.
    """

    def __init__(self) -> None:
        self.report = LoadReport()
        self._seen: set[tuple[int, int]] = set()
        self.edges: list[tuple[int, int]] = []

    def _index(self, label: str) -> int:
        idx = self.report.labels.get(label)
        if idx is None:
            idx = len(self.report.labels)
            self.report.labels[label] = idx
        return idx

    def feed(self, lineno: int, line: str) -> None:
        """Consume one line of input"""
        stripped = line.strip()
        if not stripped:
            return
        if stripped.startswith('#'):
            self.report.comments += 1
            for token in stripped[1:].split():
                name, sep, value = token.partition('=')
                if sep and name:
                    self.report.header.setdefault(name, value)
            return

        parts = stripped.split()
        if len(parts) != 2:
            raise MalformedLine(lineno, line.rstrip('\n'))
        a, b = parts
        if a == b:
            raise SelfLoop(a)

        u, v = self._index(a), self._index(b)
        key = (u, v) if u < v else (v, u)
        if key in self._seen:
            self.report.duplicates += 1
            return
        self._seen.add(key)
        self.edges.append(key)


def load_edge_list(text: TextIO | str | Iterable[str]) -> tuple[Graph, LoadReport]:
    """
    Read an edge list into a Graph

    Each non-empty line that does not start with '#' holds two
    whitespace-separated vertex labels. Labels become indices 0..n-1 in
    first-appearance order; the mapping is kept in `Graph.labels` and in
    the returned LoadReport.
    """
    lines: Iterable[str] = text.splitlines() if isinstance(text, str) else text
    reader = _EdgeListReader()
    for lineno, line in enumerate(lines, start=1):
        reader.feed(lineno, line)

    if not reader.edges:
        raise EmptyGraph('edge list contains no edges')

    labels = list(reader.report.labels)
    graph = Graph.from_edges(len(labels), reader.edges, labels)
    logger.info(
        'Loaded graph: n=%d m=%d (%d duplicate edges collapsed)',
        graph.n, graph.m, reader.report.duplicates,
    )
    if reader.report.duplicates:
        logger.warning('Collapsed %d duplicate edges', reader.report.duplicates)
    return graph, reader.report


def write_edge_list(g: Graph, out: TextIO, header: Iterable[str] = ()) -> None:
    """Write g as an edge list using its labels, header lines as '#' comments"""
    for line in header:
        out.write(f'# {line}\n')
    for u, v in g.edges:
        out.write(f'{g.labels[u]} {g.labels[v]}\n')


def modularity_coefficient(g: Graph, i: int, j: int) -> float:
    """
    Modularity-matrix entry B_ij = A_ij - k_i k_j / (2m)

    The diagonal is included: B_ii = -k_i^2 / (2m).
    """
    if not (0 <= i < g.n):
        raise SubsetOutOfRange(i, g.n)
    if not (0 <= j < g.n):
        raise SubsetOutOfRange(j, g.n)
    a_ij = 1 if i != j and g.has_edge(i, j) else 0
    two_m = 2 * g.m
    # single division from integers
    return (a_ij * two_m - int(g.degree[i]) * int(g.degree[j])) / two_m


def modularity_matrix(g: Graph) -> npt.NDArray[np.float64]:
    """Dense B for small graphs (tests, brute-force oracles)"""
    a = np.zeros((g.n, g.n), dtype=np.float64)
    a[g.edges[:, 0], g.edges[:, 1]] = 1.0
    a[g.edges[:, 1], g.edges[:, 0]] = 1.0
    k = g.degree.astype(np.float64)
    return a - np.outer(k, k) / (2 * g.m)


def planted_assignment(n: int) -> npt.NDArray[np.int8]:
    """Ground-truth spins of the planted blocks: first half -1, second half +1"""
    if n <= 0 or n % 2:
        raise OddN(n)
    spins = np.full(n, -1, dtype=np.int8)
    spins[n // 2:] = 1
    return spins


def planted_assignment_for(g: Graph, report: LoadReport) -> npt.NDArray[np.int8] | None:
    """
    Planted spins of a graph reloaded from a `generate` edge list

    The loader renumbers vertices by first appearance and never sees
    isolated ones, so block membership is read from the original integer
    labels against the `n=` recorded in the header. Returns None when the
    file does not carry that provenance.
    """
    raw = report.header.get('n')
    if raw is None:
        return None
    try:
        n = int(raw)
        ids = np.array([int(label) for label in g.labels], dtype=np.int64)
    except ValueError:
        return None
    if n <= 0 or n % 2 or ids.min() < 0 or ids.max() >= n:
        return None
    return np.where(ids < n // 2, -1, 1).astype(np.int8)


def generate_planted_partition(
    n: int,
    p_in: float,
    p_out: float,
    seed: int,
    blocks: int = 2,
) -> Graph:
    """
    Two-block planted-partition random graph

    Vertices 0..n/2-1 form the first block. Each within-block pair is
    joined with probability p_in and each cross-block pair with p_out, one
    Bernoulli draw per pair. Identical arguments give identical graphs.
    If the draw has no edges, seeds seed+1, seed+2, ... are tried.
    """
    if blocks != 2:
        raise ConfigInvalid(f'Only 2 blocks are supported, got {blocks}')
    if n <= 0 or n % 2:
        raise OddN(n)
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise InvalidProbability(p_in, p_out)
    if p_in == 0.0 and p_out == 0.0:
        raise EmptyGraph('p_in = p_out = 0 cannot produce an edge')

    half = n // 2
    rows, cols = np.triu_indices(n, k=1)
    same_block = (rows < half) == (cols < half)
    probs = np.where(same_block, p_in, p_out)

    for attempt in range(_MAX_REGENERATIONS):
        rng = np.random.default_rng(seed + attempt)
        keep = rng.random(rows.shape[0]) < probs
        if keep.any():
            if attempt:
                logger.info('Generator reseeded %d times to obtain an edge', attempt)
            pairs = zip(rows[keep].tolist(), cols[keep].tolist())
            return Graph.from_edges(n, pairs)

    raise EmptyGraph(f'no edges after {_MAX_REGENERATIONS} seeds starting at {seed}')

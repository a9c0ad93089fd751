"""
Boundary-conditioned subproblems and their Ising form

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np
import numpy.typing as npt

from .errors import (
    DuplicateVertex,
    EmptySubset,
    LengthMismatch,
    SubsetOutOfRange,
)
from .graph import Graph
from .modularity import SpinAssignment


@dataclass(frozen=True, eq=False)
class Subproblem:
    """
    Objective over the spins of subset X with all other spins frozen:

        Q_s = sum_{p<q} quad[p, q] s_p s_q + sum_p linear[p] s_p

    `quad` is strictly upper triangular in local indices (local index p is
    the position of the vertex in `subset`). A change of Q_s times `scale`
    is the resulting change of global modularity.
    """

    subset: tuple[int, ...]
    quad: npt.NDArray[np.float64]
    linear: npt.NDArray[np.float64]
    scale: float

    @property
    def size(self) -> int:
        return len(self.subset)


@dataclass(frozen=True, eq=False)
class IsingModel:
    """
    Ising energy  E(s) = sum_{p<q} J[p, q] s_p s_q + sum_p h[p] s_p + offset

    J is strictly upper triangular.
    """

    J: npt.NDArray[np.float64]
    h: npt.NDArray[np.float64]
    offset: float = 0.0

    @property
    def n_vars(self) -> int:
        return int(self.h.shape[0])

    @classmethod
    def from_terms(
        cls,
        n_vars: int,
        couplings: dict[tuple[int, int], float] | None = None,
        fields: Iterable[float] | None = None,
        offset: float = 0.0,
    ) -> IsingModel:
        """Build from a pair -> coupling map and a field sequence"""
        J = np.zeros((n_vars, n_vars), dtype=np.float64)
        for (p, q), value in (couplings or {}).items():
            if p == q:
                raise ValueError(f'Diagonal coupling ({p}, {q}) is not allowed')
            a, b = (p, q) if p < q else (q, p)
            J[a, b] += value
        h = np.zeros(n_vars, dtype=np.float64) if fields is None else np.array(list(fields), dtype=np.float64)
        if h.shape[0] != n_vars:
            raise LengthMismatch(n_vars, h.shape[0])
        return cls(J=J, h=h, offset=offset)

    def max_coefficient(self) -> float:
        """Largest |J| or |h| entry (0 for an all-zero model)"""
        if self.n_vars == 0:
            return 0.0
        return float(max(np.abs(self.J).max(initial=0.0), np.abs(self.h).max(initial=0.0)))


def build_subproblem(g: Graph, s: SpinAssignment, subset: Iterable[int]) -> Subproblem:
    """
    Subproblem for re-optimizing the spins of `subset`

    Pairs inside the subset get 2*B_pq. Pairs with one end outside fold
    into the linear term C_i = 2 * sum_{j not in X} B_ij s_j, computed as
    2 * (sum of outside neighbor spins - k_i/(2m) * sum_{j not in X} k_j s_j).
    Constant terms are dropped. The subset is sorted by vertex id.
    """
    vertices = list(subset)
    if not vertices:
        raise EmptySubset()
    seen: set[int] = set()
    for v in vertices:
        if not (0 <= v < g.n):
            raise SubsetOutOfRange(v, g.n)
        if v in seen:
            raise DuplicateVertex(v)
        seen.add(v)
    if len(s) != g.n:
        raise LengthMismatch(g.n, len(s))

    ordered = sorted(vertices)
    size = len(ordered)
    spins = np.asarray(s, dtype=np.int64)
    k = g.degree[ordered]
    two_m = 2 * g.m

    # 2 * B_pq = 2 * (A_pq - k_p k_q / 2m) over local indices
    local_of = {v: p for p, v in enumerate(ordered)}
    adjacency = np.zeros((size, size), dtype=np.int64)
    for p, v in enumerate(ordered):
        for j in g.adjacency[v]:
            q = local_of.get(j)
            if q is not None:
                adjacency[p, q] = 1
    quad = np.triu(2.0 * (adjacency * two_m - np.outer(k, k)) / two_m, k=1)

    inside_weighted = int(np.dot(k, spins[ordered]))
    outside_weighted = int(np.dot(g.degree, spins)) - inside_weighted
    linear = np.empty(size, dtype=np.float64)
    for p, v in enumerate(ordered):
        outside_neighbors = sum(int(spins[j]) for j in g.adjacency[v] if j not in local_of)
        linear[p] = 2.0 * (outside_neighbors * two_m - int(k[p]) * outside_weighted) / two_m

    return Subproblem(
        subset=tuple(ordered),
        quad=quad,
        linear=linear,
        scale=1.0 / (4 * g.m),
    )


def subproblem_value(sp: Subproblem, local_spins: Sequence[int] | npt.NDArray[np.integer]) -> float:
    """Q_s for one assignment of the subset's spins"""
    x = np.asarray(local_spins, dtype=np.float64)
    if x.shape[0] != sp.size:
        raise LengthMismatch(sp.size, x.shape[0])
    return float(x @ sp.quad @ x + sp.linear @ x)


def to_ising(sp: Subproblem) -> IsingModel:
    """Minimization form: ground states are exactly the maximizers of Q_s"""
    return IsingModel(J=-sp.quad, h=-sp.linear, offset=0.0)


def energy(model: IsingModel, s: Sequence[int] | npt.NDArray[np.integer]) -> float:
    """Ising energy of one configuration"""
    x = np.asarray(s, dtype=np.float64)
    if x.shape[0] != model.n_vars:
        raise LengthMismatch(model.n_vars, x.shape[0])
    return float(x @ model.J @ x + model.h @ x + model.offset)


def dump_ising(model: IsingModel, out: TextIO) -> None:
    """
    Text dump for cross-checking with external tools

    One "p q J" line per nonzero coupling, then one "p h" line per field.
    """
    rows, cols = np.nonzero(model.J)
    for p, q in zip(rows.tolist(), cols.tolist()):
        out.write(f'{p} {q} {model.J[p, q]!r}\n')
    for p, value in enumerate(model.h.tolist()):
        out.write(f'{p} {value!r}\n')

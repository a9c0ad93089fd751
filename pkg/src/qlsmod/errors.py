"""
Exception hierarchy for qlsmod

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations


class QlsError(ValueError):
    """Root of every error raised by qlsmod"""


# Graph input and construction

class GraphError(QlsError):
    """Invalid graph input or construction parameters"""


class SelfLoop(GraphError):
    """Edge list contains a 'u u' line"""

    def __init__(self, label: str) -> None:
        super().__init__(f'Self-loop on vertex {label!r}')
        self.label = label


class MalformedLine(GraphError):
    """Edge list line is not a pair of labels"""

    def __init__(self, lineno: int, line: str = '') -> None:
        super().__init__(f'Malformed edge on line {lineno}: {line!r}')
        self.lineno = lineno


class EmptyGraph(GraphError):
    """Graph has no edges; modularity is undefined"""

    def __init__(self, detail: str = 'graph has no edges') -> None:
        super().__init__(detail)


class InvalidProbability(GraphError):
    def __init__(self, p_in: float, p_out: float) -> None:
        super().__init__(
            f'Need 0 <= p_out <= p_in <= 1, got p_in={p_in!r}, p_out={p_out!r}'
        )
        self.p_in = p_in
        self.p_out = p_out


class OddN(GraphError):
    def __init__(self, n: int) -> None:
        super().__init__(f'Planted partition needs an even, positive n, got {n!r}')
        self.n = n


# Assignments, moves and subsets

class LengthMismatch(QlsError):
    def __init__(self, expected: int, actual: int) -> None:
        super().__init__(f'Expected length {expected}, got {actual}')
        self.expected = expected
        self.actual = actual


class SubsetOutOfRange(QlsError):
    def __init__(self, vertex: int, n: int) -> None:
        super().__init__(f'Vertex {vertex!r} outside 0..{n - 1}')
        self.vertex = vertex


class EmptySubset(QlsError):
    def __init__(self) -> None:
        super().__init__('Subset must contain at least one vertex')


class DuplicateVertex(QlsError):
    def __init__(self, vertex: int) -> None:
        super().__init__(f'Vertex {vertex!r} appears twice in subset')
        self.vertex = vertex


class ConsistencyError(QlsError):
    """Incremental modularity disagrees with a from-scratch evaluation"""

    def __init__(self, incremental: float, scratch: float) -> None:
        super().__init__(
            f'Incremental modularity {incremental!r} != scratch value {scratch!r}'
        )
        self.incremental = incremental
        self.scratch = scratch


# Solvers

class SolverError(QlsError):
    """Failure inside a subproblem solver"""


class TooManyVariables(SolverError):
    def __init__(self, n_vars: int, limit: int) -> None:
        super().__init__(f'Exact enumeration supports at most {limit} variables, got {n_vars}')
        self.n_vars = n_vars
        self.limit = limit


class InvalidSchedule(SolverError):
    pass


class ParamLengthMismatch(SolverError):
    def __init__(self, expected: int, actual: int) -> None:
        super().__init__(f'Ansatz needs {expected} angles, got {actual}')
        self.expected = expected
        self.actual = actual


class TooManyQubits(SolverError):
    def __init__(self, n_qubits: int, limit: int) -> None:
        super().__init__(f'Statevector supports at most {limit} qubits, got {n_qubits}')
        self.n_qubits = n_qubits
        self.limit = limit


class SizeMismatch(SolverError):
    def __init__(self, n_qubits: int, n_vars: int) -> None:
        super().__init__(f'State has {n_qubits} qubits but model has {n_vars} variables')


class BudgetTooSmall(SolverError):
    def __init__(self, budget: int, needed: int) -> None:
        super().__init__(f'Budget {budget} is below the {needed} evaluations of the initial simplex')
        self.budget = budget
        self.needed = needed


# Configuration

class ConfigInvalid(QlsError):
    pass


class UnknownSolver(ConfigInvalid):
    def __init__(self, name: str, valid: list[str]) -> None:
        super().__init__(f'Solver {name!r} not recognized. Available: {valid}')
        self.name = name
        self.valid = valid

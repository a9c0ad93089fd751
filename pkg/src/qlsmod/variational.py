"""
Statevector simulation of a layered Ry/Rz ansatz for diagonal Ising
Hamiltonians, with a budgeted Nelder-Mead parameter search

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

import logging
import math
import time
from collections import Counter
from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from .errors import (
    BudgetTooSmall,
    ConfigInvalid,
    ParamLengthMismatch,
    SizeMismatch,
    TooManyQubits,
)
from .seeding import derive_seed
from .solvers import SolverResult, all_energies, index_spins
from .subproblem import IsingModel, energy

logger = logging.getLogger(__name__)

MAX_QUBITS = 20

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Dense n-qubit state

    Amplitude index z encodes qubit q as bit q (qubit 0 least significant).
    """

    amplitudes: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        n = self.n_qubits
        if (1 << n) != self.amplitudes.shape[0]:
            raise ConfigInvalid(f'Amplitude count {self.amplitudes.shape[0]} is not a power of two')
        if n > MAX_QUBITS:
            raise TooManyQubits(n, MAX_QUBITS)

    @property
    def n_qubits(self) -> int:
        return int(self.amplitudes.shape[0]).bit_length() - 1

    def probabilities(self) -> FloatArray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(self.probabilities().sum())


@dataclass(frozen=True, eq=False)
class AnsatzParams:
    """
    Angles of a depth-d ansatz on n qubits

    Rotation layer l uses theta[l*2n + 2q] as the Ry angle and
    theta[l*2n + 2q + 1] as the Rz angle of qubit q; there are depth + 1
    rotation layers.
    """

    theta: FloatArray
    depth: int

    @staticmethod
    def length(n_qubits: int, depth: int) -> int:
        return 2 * n_qubits * (depth + 1)

    @classmethod
    def random(cls, n_qubits: int, depth: int, rng: np.random.Generator) -> AnsatzParams:
        """Angles uniform in [-pi, pi]"""
        theta = rng.uniform(-math.pi, math.pi, size=cls.length(n_qubits, depth))
        return cls(theta=theta, depth=depth)


def ry(theta: float) -> npt.NDArray[np.complex128]:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rz(theta: float) -> npt.NDArray[np.complex128]:
    return np.array(
        [[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]],
        dtype=np.complex128,
    )


def apply_single_qubit(
    amplitudes: npt.NDArray[np.complex128],
    gate: npt.NDArray[np.complex128],
    qubit: int,
    n_qubits: int,
) -> npt.NDArray[np.complex128]:
    """Apply a 2x2 gate to one qubit"""
    psi = amplitudes.reshape(1 << (n_qubits - qubit - 1), 2, 1 << qubit)
    return np.einsum('ab,ibj->iaj', gate, psi).reshape(-1)


def cnot_permutation(control: int, target: int, n_qubits: int) -> npt.NDArray[np.int64]:
    """Index map of CNOT: new[z] = old[perm[z]]"""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    return idx ^ (((idx >> control) & 1) << target)


def apply_cnot(
    amplitudes: npt.NDArray[np.complex128],
    control: int,
    target: int,
    n_qubits: int,
) -> npt.NDArray[np.complex128]:
    return amplitudes[cnot_permutation(control, target, n_qubits)]


def _entangler(n_qubits: int) -> npt.NDArray[np.int64]:
    """Linear CNOT chain 0->1, 1->2, ..., (n-2)->(n-1) as one permutation"""
    perm = np.arange(1 << n_qubits, dtype=np.int64)
    for q in range(n_qubits - 1):
        # composing gathers: apply q's CNOT after the earlier ones
        perm = perm[cnot_permutation(q, q + 1, n_qubits)]
    return perm


def prepare_state(n_qubits: int, params: AnsatzParams) -> StateVector:
    """
    Run the ansatz on |0...0>

    Each rotation layer applies Ry then Rz to every qubit; the first
    `depth` layers are each followed by the linear CNOT chain.
    """
    if n_qubits > MAX_QUBITS:
        raise TooManyQubits(n_qubits, MAX_QUBITS)
    expected = AnsatzParams.length(n_qubits, params.depth)
    if len(params.theta) != expected:
        raise ParamLengthMismatch(expected, len(params.theta))

    amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
    amplitudes[0] = 1.0
    chain = _entangler(n_qubits) if params.depth and n_qubits > 1 else None

    stride = 2 * n_qubits
    for layer in range(params.depth + 1):
        angles = params.theta[layer * stride:(layer + 1) * stride]
        for q in range(n_qubits):
            gate = rz(float(angles[2 * q + 1])) @ ry(float(angles[2 * q]))
            amplitudes = apply_single_qubit(amplitudes, gate, q, n_qubits)
        if layer < params.depth and chain is not None:
            amplitudes = amplitudes[chain]

    return StateVector(amplitudes)


def expectation(sv: StateVector, model: IsingModel) -> float:
    """Average Ising energy over the state's measurement distribution"""
    if sv.n_qubits != model.n_vars:
        raise SizeMismatch(sv.n_qubits, model.n_vars)
    return float(sv.probabilities() @ all_energies(model))


def _sample_indices(sv: StateVector, count: int, seed: int) -> npt.NDArray[np.int64]:
    rng = np.random.default_rng(seed)
    probs = sv.probabilities()
    probs = probs / probs.sum()
    return rng.choice(probs.shape[0], size=count, p=probs).astype(np.int64)


def sample(sv: StateVector, count: int, seed: int) -> Counter[str]:
    """
    Draw `count` measurement outcomes

    Bitstrings print qubit 0 as the rightmost character.
    """
    if count < 1:
        raise ConfigInvalid(f'Sample count must be >= 1, got {count}')
    n = sv.n_qubits
    values, counts = np.unique(_sample_indices(sv, count, seed), return_counts=True)
    return Counter({format(int(z), f'0{n}b'): int(c) for z, c in zip(values, counts)})


def bitstring_spins(bits: str) -> npt.NDArray[np.int8]:
    """Spins of a sampled bitstring (bit b -> spin 1 - 2b)"""
    return np.array([1 - 2 * int(ch) for ch in reversed(bits)], dtype=np.int8)


class _BudgetExhausted(Exception):
    pass


def optimize_params(
    objective: Callable[[FloatArray], float],
    theta0: FloatArray,
    budget: int,
    step: float = 0.5,
    tol: float = 1e-10,
) -> tuple[FloatArray, float]:
    """
    Minimize `objective` with the Nelder-Mead simplex method

    The objective is evaluated at most `budget` times. Returns the best
    point ever evaluated and its value, not the final simplex.
    """
    x0 = np.asarray(theta0, dtype=np.float64).copy()
    dim = x0.shape[0]
    if budget < dim + 1:
        raise BudgetTooSmall(budget, dim + 1)

    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    evaluations = 0
    best_x = x0
    best_f = math.inf

    def evaluate(x: FloatArray) -> float:
        nonlocal evaluations, best_x, best_f
        if evaluations >= budget:
            raise _BudgetExhausted
        evaluations += 1
        f = float(objective(x))
        if f < best_f:
            best_x, best_f = x.copy(), f
        return f

    try:
        simplex = [x0] + [x0 + step * np.eye(dim)[i] for i in range(dim)]
        values = [evaluate(x) for x in simplex]

        while True:
            order = sorted(range(dim + 1), key=lambda i: values[i])
            simplex = [simplex[i] for i in order]
            values = [values[i] for i in order]
            if values[-1] - values[0] <= tol:
                break

            centroid = np.mean(simplex[:-1], axis=0)
            worst = simplex[-1]

            # Reflection
            xr = centroid + alpha * (centroid - worst)
            fr = evaluate(xr)
            if values[0] <= fr < values[-2]:
                simplex[-1], values[-1] = xr, fr
                continue

            # Expansion
            if fr < values[0]:
                xe = centroid + gamma * (xr - centroid)
                fe = evaluate(xe)
                if fe < fr:
                    simplex[-1], values[-1] = xe, fe
                else:
                    simplex[-1], values[-1] = xr, fr
                continue

            # Contraction: outside keeps xc if no worse than the reflection,
            # inside only if it beats the worst vertex
            if fr < values[-1]:
                xc = centroid + rho * (xr - centroid)
                fc = evaluate(xc)
                contracted = fc <= fr
            else:
                xc = centroid + rho * (worst - centroid)
                fc = evaluate(xc)
                contracted = fc < values[-1]
            if contracted:
                simplex[-1], values[-1] = xc, fc
                continue

            # Shrink toward the best vertex
            for i in range(1, dim + 1):
                simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
                values[i] = evaluate(simplex[i])
    except _BudgetExhausted:
        pass

    logger.debug('Nelder-Mead used %d/%d evaluations, best %.6g', evaluations, budget, best_f)
    return best_x, best_f


def solve_variational(
    model: IsingModel,
    depth: int = 1,
    budget: int = 100,
    n_samples: int = 10_000,
    seed: int = 0,
) -> SolverResult:
    """
    Variational solve: optimize the ansatz angles against the energy
    expectation, sample the optimized state and return the best sample

    The reported energy is the minimum over the sampled bitstrings; ties
    go to the smallest configuration index.
    """
    n = model.n_vars
    if n > MAX_QUBITS:
        raise TooManyQubits(n, MAX_QUBITS)
    if n_samples < 1:
        raise ConfigInvalid(f'n_samples must be >= 1, got {n_samples}')

    started = time.perf_counter()
    energies = all_energies(model)
    theta0 = AnsatzParams.random(n, depth, np.random.default_rng(derive_seed(seed, 0)))
    calls = 0

    def objective(theta: FloatArray) -> float:
        nonlocal calls
        calls += 1
        state = prepare_state(n, AnsatzParams(theta, depth))
        return float(state.probabilities() @ energies)

    theta, value = optimize_params(objective, theta0.theta, budget)
    state = prepare_state(n, AnsatzParams(theta, depth))
    drawn = np.unique(_sample_indices(state, n_samples, derive_seed(seed, 1)))
    best = int(drawn[int(np.argmin(energies[drawn]))])
    spins = index_spins(np.array([best], dtype=np.int64), n)[0]
    logger.debug('Variational solve: expectation %.6g, best sample energy %.6g', value, energies[best])

    return SolverResult(
        spins=spins,
        energy=energy(model, spins),
        evaluations=calls,
        solver_name='variational',
        wall_time=time.perf_counter() - started,
    )

"""
Seed derivation shared by the stochastic components

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 output step for state x"""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """
    Child seed for stream `index` under `seed`

    Distinct indices give statistically independent streams; the mapping is
    stable across platforms and runs.
    """
    return splitmix64((seed & _MASK64) ^ splitmix64(index & _MASK64))

"""
Tests for modularity evaluation, flip gains and the incremental gain table

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

import math

import numpy as np
import pytest

from qlsmod.errors import DuplicateVertex, LengthMismatch, SubsetOutOfRange
from qlsmod.graph import Graph, load_edge_list
from qlsmod.modularity import apply_move, flip_gain, init_gains, modularity
from tests.utils import BARBELL_OPTIMUM, barbell, random_graph, random_spins, spins


class TestModularity:
    """Test suite for modularity"""

    def test_barbell_optimum(self):
        value = modularity(barbell(), spins(-1, -1, -1, 1, 1, 1))
        assert math.isclose(value, BARBELL_OPTIMUM, abs_tol=1e-15)

    def test_single_community_is_zero(self):
        assert modularity(barbell(), spins(1, 1, 1, 1, 1, 1)) == 0.0
        assert modularity(barbell(), spins(-1, -1, -1, -1, -1, -1)) == 0.0

    def test_unbalanced_split(self):
        value = modularity(barbell(), spins(-1, -1, 1, 1, 1, 1))
        assert math.isclose(value, 6 / 49, abs_tol=1e-15)

    def test_global_flip_symmetry(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            graph = random_graph(int(rng.integers(2, 20)), 0.3, rng)
            s = random_spins(graph.n, rng)
            assert math.isclose(modularity(graph, s), modularity(graph, -s), abs_tol=1e-12)
            assert abs(modularity(graph, s)) <= 1.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            modularity(barbell(), spins(1, -1))

    def test_matches_networkx(self):
        """Agrees with networkx's two-community modularity"""
        nx = pytest.importorskip('networkx')
        rng = np.random.default_rng(2)
        for _ in range(30):
            graph = random_graph(int(rng.integers(3, 25)), 0.25, rng)
            s = random_spins(graph.n, rng)
            if abs(int(s.sum())) == graph.n:
                continue
            G = nx.Graph()
            G.add_nodes_from(range(graph.n))
            G.add_edges_from(graph.edges.tolist())
            parts = [
                {i for i in range(graph.n) if s[i] == 1},
                {i for i in range(graph.n) if s[i] == -1},
            ]
            expected = nx.community.modularity(G, parts)
            assert math.isclose(modularity(graph, s), expected, abs_tol=1e-9)


class TestFlipGain:
    """Test suite for flip_gain"""

    def test_leaving_the_optimum(self):
        value = flip_gain(barbell(), spins(-1, -1, -1, 1, 1, 1), 2)
        assert math.isclose(value, -23 / 98, abs_tol=1e-15)

    def test_single_community(self):
        value = flip_gain(barbell(), spins(-1, -1, -1, -1, -1, -1), 0)
        assert math.isclose(value, -2 / 49, abs_tol=1e-15)

    def test_matches_definition(self):
        """gain(v) equals H after the flip minus H before"""
        rng = np.random.default_rng(3)
        for _ in range(100):
            graph = random_graph(int(rng.integers(2, 16)), 0.35, rng)
            s = random_spins(graph.n, rng)
            v = int(rng.integers(0, graph.n))
            flipped = s.copy()
            flipped[v] = -flipped[v]
            expected = modularity(graph, flipped) - modularity(graph, s)
            assert math.isclose(flip_gain(graph, s, v), expected, abs_tol=1e-12)

    def test_isolated_vertex(self):
        padded = Graph.from_edges(3, [(0, 1)])
        assert flip_gain(padded, spins(1, -1, 1), 2) == 0.0


class TestGainTable:
    """Test suite for init_gains and apply_move"""

    def test_barbell_single_community(self):
        table = init_gains(barbell(), spins(-1, -1, -1, -1, -1, -1))
        expected = [-2 / 49, -2 / 49, -9 / 98, -9 / 98, -2 / 49, -2 / 49]
        assert np.allclose(table.gain, expected, atol=1e-15)
        assert table.current_modularity == 0.0

    def test_single_edge(self):
        graph, _ = load_edge_list('0 1\n')
        table = init_gains(graph, spins(-1, 1))
        assert math.isclose(table.current_modularity, -0.5, abs_tol=1e-15)
        assert np.allclose(table.gain, [0.5, 0.5], atol=1e-15)

    def test_move_reaches_optimum(self):
        graph = barbell()
        s = spins(-1, -1, -1, -1, -1, -1)
        table = init_gains(graph, s)
        new_s, new_table = apply_move(graph, s, table, [3, 4, 5], [1, 1, 1])
        assert new_s.tolist() == [-1, -1, -1, 1, 1, 1]
        assert math.isclose(new_table.current_modularity, BARBELL_OPTIMUM, abs_tol=1e-12)
        fresh = init_gains(graph, new_s)
        assert np.allclose(new_table.gain, fresh.gain, atol=1e-12)

    def test_inputs_untouched(self):
        graph = barbell()
        s = spins(-1, -1, -1, -1, -1, -1)
        table = init_gains(graph, s)
        before = table.gain.copy()
        apply_move(graph, s, table, [0], [1])
        assert s.tolist() == [-1] * 6
        assert np.array_equal(table.gain, before)

    def test_no_op_move(self):
        graph = barbell()
        s = spins(-1, -1, -1, 1, 1, 1)
        table = init_gains(graph, s)
        new_s, new_table = apply_move(graph, s, table, [0, 3], [-1, 1])
        assert np.array_equal(new_s, s)
        assert new_table.current_modularity == table.current_modularity
        assert np.array_equal(new_table.gain, table.gain)

    def test_incremental_matches_scratch(self):
        """200 random moves agree with a from-scratch table"""
        rng = np.random.default_rng(4)
        for _ in range(200):
            graph = random_graph(int(rng.integers(2, 20)), 0.3, rng)
            s = random_spins(graph.n, rng)
            table = init_gains(graph, s)
            size = int(rng.integers(1, graph.n + 1))
            subset = rng.choice(graph.n, size=size, replace=False).tolist()
            new_values = random_spins(size, rng)
            new_s, new_table = apply_move(graph, s, table, subset, new_values)
            fresh = init_gains(graph, new_s)
            assert math.isclose(new_table.current_modularity, modularity(graph, new_s), abs_tol=1e-9)
            assert np.allclose(new_table.gain, fresh.gain, atol=1e-9)
            assert np.array_equal(new_table.neighbor_sum, fresh.neighbor_sum)
            assert new_table.weighted_sum == fresh.weighted_sum

    def test_chained_moves_stay_exact(self):
        rng = np.random.default_rng(5)
        graph = random_graph(30, 0.2, rng)
        s = random_spins(graph.n, rng)
        table = init_gains(graph, s)
        for _ in range(100):
            subset = rng.choice(graph.n, size=4, replace=False).tolist()
            s, table = apply_move(graph, s, table, subset, random_spins(4, rng))
        assert math.isclose(table.current_modularity, modularity(graph, s), abs_tol=1e-9)

    def test_errors(self):
        graph = barbell()
        s = spins(-1, -1, -1, 1, 1, 1)
        table = init_gains(graph, s)
        with pytest.raises(LengthMismatch):
            apply_move(graph, s, table, [0, 1], [1])
        with pytest.raises(SubsetOutOfRange):
            apply_move(graph, s, table, [6], [1])
        with pytest.raises(DuplicateVertex):
            apply_move(graph, s, table, [1, 1], [1, 1])

"""
Tests for the qlsmod command line

Copyright (c) 2024 qlsmod contributors
SPDX-License-Identifier: BSD-3-Clause
"""

import json
import math

import pytest

from qlsmod.bench import read_result_rows, read_sweep_rows
from qlsmod.cli import ExitCode, main
from qlsmod.graph import generate_planted_partition, load_edge_list, planted_assignment
from qlsmod.modularity import modularity
from tests.utils import BARBELL_EDGES, BARBELL_OPTIMUM


@pytest.fixture
def barbell_path(tmp_path):
    path = tmp_path / 'barbell.txt'
    path.write_text(BARBELL_EDGES, encoding='utf-8')
    return str(path)


def _strip_times(payload):
    return {k: v for k, v in payload.items() if k not in ('wall_time', 'solver_wall_time')}


class TestRun:
    """Test suite for `qlsmod run`"""

    def test_writes_record(self, barbell_path, tmp_path):
        out = tmp_path / 'run.json'
        code = main(['run', '--graph', barbell_path, '--solver', 'exact', '--seed', '1', '--out', str(out)])
        assert code == ExitCode.OK
        payload = json.loads(out.read_text(encoding='utf-8'))
        assert math.isclose(payload['final_modularity'], BARBELL_OPTIMUM, abs_tol=1e-12)
        assert payload['n'] == 6 and payload['m'] == 7
        assert payload['subset_clamped'] is True
        assert len(payload['modularity_trajectory']) == payload['iterations'] + 1

    def test_deterministic(self, barbell_path, tmp_path):
        outputs = []
        for name in ('a.json', 'b.json'):
            out = tmp_path / name
            main(['run', '--graph', barbell_path, '--solver', 'anneal', '--seed', '4',
                  '--subset-size', '3', '--anneal-samples', '50', '--sweeps', '20', '--out', str(out)])
            outputs.append(_strip_times(json.loads(out.read_text(encoding='utf-8'))))
        assert outputs[0] == outputs[1]

    def test_dump_subproblems(self, barbell_path, tmp_path):
        dump_dir = tmp_path / 'dumps'
        out = tmp_path / 'run.json'
        main(['run', '--graph', barbell_path, '--solver', 'exact', '--seed', '0',
              '--subset-size', '2', '--out', str(out), '--dump-subproblems', str(dump_dir)])
        payload = json.loads(out.read_text(encoding='utf-8'))
        dumps = sorted(dump_dir.iterdir())
        assert len(dumps) == payload['iterations']
        assert dumps[0].name == 'iter0000.ising'
        assert dumps[0].read_text(encoding='utf-8').startswith('# subset ')

    def test_record_schema(self, barbell_path, tmp_path):
        """The JSON record has exactly the documented keys and value types"""
        out = tmp_path / 'run.json'
        main(['run', '--graph', barbell_path, '--solver', 'exact', '--seed', '2',
              '--subset-size', '2', '--out', str(out)])
        payload = json.loads(out.read_text(encoding='utf-8'))
        scalars = {
            'graph': str, 'n': int, 'm': int, 'duplicate_edges': int, 'seed': int,
            'solver': str, 'subset_size': int, 'subset_clamped': bool, 'iterations': int,
            'accepted_moves': int, 'final_modularity': float, 'converged_reason': str,
            'solver_evaluations': int, 'solver_wall_time': float, 'wall_time': float,
        }
        lists = {
            'labels': str, 'modularity_trajectory': float, 'accepted': bool,
            'final_assignment': int,
        }
        assert set(payload) == set(scalars) | set(lists) | {'subsets'}
        for key, kind in scalars.items():
            assert type(payload[key]) is kind, key
        for key, kind in lists.items():
            assert all(type(item) is kind for item in payload[key]), key
        assert all(type(v) is int for subset in payload['subsets'] for v in subset)
        assert payload['converged_reason'] in ('no_improve', 'max_iter')
        assert set(payload['final_assignment']) <= {-1, 1}
        assert len(payload['final_assignment']) == len(payload['labels']) == payload['n']
        assert len(payload['accepted']) == len(payload['subsets']) == payload['iterations']
        assert payload['accepted_moves'] == sum(payload['accepted'])

    def test_missing_graph_argument(self):
        with pytest.raises(SystemExit) as info:
            main(['run', '--solver', 'exact', '--seed', '0'])
        assert info.value.code == ExitCode.USAGE

    def test_unknown_solver(self, barbell_path):
        with pytest.raises(SystemExit) as info:
            main(['run', '--graph', barbell_path, '--solver', 'magic', '--seed', '0'])
        assert info.value.code == ExitCode.USAGE

    def test_unreadable_graph(self, tmp_path):
        code = main(['run', '--graph', str(tmp_path / 'absent.txt'), '--solver', 'exact', '--seed', '0'])
        assert code == ExitCode.INPUT

    def test_malformed_graph(self, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text('0 1\n2 2\n', encoding='utf-8')
        code = main(['run', '--graph', str(path), '--solver', 'exact', '--seed', '0'])
        assert code == ExitCode.INPUT

    def test_bad_subset_size(self, barbell_path):
        code = main(['run', '--graph', barbell_path, '--solver', 'exact', '--seed', '0', '--subset-size', '0'])
        assert code == ExitCode.USAGE

    def test_solver_failure(self, tmp_path):
        """Subsets beyond the enumeration limit fail with the solver exit code"""
        graph_path = tmp_path / 'g.txt'
        main(['generate', '--n', '40', '--p-in', '0.3', '--p-out', '0.05', '--seed', '0',
              '--out', str(graph_path)])
        code = main(['run', '--graph', str(graph_path), '--solver', 'exact', '--seed', '0',
                     '--subset-size', '30'])
        assert code == ExitCode.SOLVER


class TestBench:
    """Test suite for `qlsmod bench`"""

    def test_writes_csv(self, barbell_path, tmp_path):
        out = tmp_path / 'bench.csv'
        code = main(['bench', '--graph', barbell_path, '--solver', 'exact', '--seeds', '2',
                     '--global-baseline', '--out', str(out)])
        assert code == ExitCode.OK
        with open(out, encoding='utf-8') as f:
            rows = list(read_result_rows(f))
        assert [(r.solver, r.seed) for r in rows] == [('exact', 0), ('exact', 1), ('global', 0)]

    def test_planted_graph(self, tmp_path):
        out = tmp_path / 'bench.csv'
        code = main(['bench', '--planted', '12,0.8,0.05,3', '--seed-list', '5', '--subset-size', '4',
                     '--out', str(out)])
        assert code == ExitCode.OK
        with open(out, encoding='utf-8') as f:
            rows = list(read_result_rows(f))
        assert rows[0].graph == 'planted-n12-pin0.8-pout0.05-s3'
        assert rows[0].seed == 5

    def test_zero_seeds(self, barbell_path):
        assert main(['bench', '--graph', barbell_path, '--seeds', '0']) == ExitCode.USAGE

    def test_no_graphs(self):
        assert main(['bench', '--seeds', '1']) == ExitCode.USAGE


class TestSweep:
    """Test suite for `qlsmod sweep`"""

    def test_writes_csv(self, tmp_path):
        out = tmp_path / 'sweep.csv'
        code = main(['sweep', '--n', '16', '--p-in', '0.6', '--p-out', '0.05', '--subset-sizes', '2,4',
                     '--seeds', '2', '--out', str(out)])
        assert code == ExitCode.OK
        with open(out, encoding='utf-8') as f:
            rows = list(read_sweep_rows(f))
        assert [(r.subset_size, r.seed) for r in rows] == [(2, 0), (2, 1), (4, 0), (4, 1)]
        assert all(r.converged_reason == 'no_improve' for r in rows)

    def test_planted_modularity_from_generated_file(self, tmp_path):
        """A generated file swept from disk reports the same planted modularity as the generator"""
        graph_path = tmp_path / 'planted.txt'
        main(['generate', '--n', '40', '--p-in', '0.3', '--p-out', '0.05', '--seed', '6',
              '--out', str(graph_path)])
        from_file = tmp_path / 'file.csv'
        generated = tmp_path / 'generated.csv'
        assert main(['sweep', '--graph', str(graph_path), '--subset-sizes', '4', '--seeds', '1',
                     '--out', str(from_file)]) == ExitCode.OK
        assert main(['sweep', '--n', '40', '--p-in', '0.3', '--p-out', '0.05', '--graph-seed', '6',
                     '--subset-sizes', '4', '--seeds', '1', '--out', str(generated)]) == ExitCode.OK

        expected = modularity(generate_planted_partition(40, 0.3, 0.05, seed=6), planted_assignment(40))
        for path in (from_file, generated):
            with open(path, encoding='utf-8') as f:
                (row,) = read_sweep_rows(f)
            assert math.isclose(row.planted_modularity, expected, abs_tol=1e-9)

    def test_planted_modularity_unknown(self, barbell_path, tmp_path):
        out = tmp_path / 'sweep.csv'
        assert main(['sweep', '--graph', barbell_path, '--subset-sizes', '2', '--seeds', '1',
                     '--out', str(out)]) == ExitCode.OK
        with open(out, encoding='utf-8') as f:
            (row,) = read_sweep_rows(f)
        assert math.isnan(row.planted_modularity)


class TestGenerate:
    """Test suite for `qlsmod generate`"""

    def test_two_triangles(self, tmp_path):
        out = tmp_path / 'g.txt'
        assert main(['generate', '--n', '6', '--p-in', '1', '--p-out', '0', '--seed', '0',
                     '--out', str(out)]) == ExitCode.OK
        text = out.read_text(encoding='utf-8')
        edge_lines = [line for line in text.splitlines() if line and not line.startswith('#')]
        assert len(edge_lines) == 6
        graph, _ = load_edge_list(text)
        assert graph.m == 6

    def test_reproducible(self, tmp_path):
        paths = [tmp_path / 'a.txt', tmp_path / 'b.txt']
        for path in paths:
            main(['generate', '--n', '30', '--p-in', '0.3', '--p-out', '0.05', '--seed', '9',
                  '--out', str(path)])
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_empty_graph(self, tmp_path):
        code = main(['generate', '--n', '10', '--p-in', '0', '--p-out', '0', '--seed', '0',
                     '--out', str(tmp_path / 'g.txt')])
        assert code == ExitCode.INPUT

    def test_inverted_probabilities(self, tmp_path):
        code = main(['generate', '--n', '10', '--p-in', '0.1', '--p-out', '0.5', '--seed', '0',
                     '--out', str(tmp_path / 'g.txt')])
        assert code == ExitCode.USAGE

    def test_odd_n(self, tmp_path):
        code = main(['generate', '--n', '7', '--p-in', '0.5', '--p-out', '0.1', '--seed', '0',
                     '--out', str(tmp_path / 'g.txt')])
        assert code == ExitCode.USAGE

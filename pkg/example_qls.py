#!/usr/bin/env python
"""
Example usage of the qlsmod library

Runs local search on a small hand-written graph and on a generated
planted-partition graph with each subproblem backend.
"""

from qlsmod import (
    QlsConfig,
    SolverOptions,
    generate_planted_partition,
    global_optimum,
    load_edge_list,
    run_qls,
)

BARBELL = """\
# two triangles joined by one edge
0 1
0 2
1 2
2 3
3 4
3 5
4 5
"""


def example_barbell():
    """Pairs of vertices re-optimized exactly"""
    print("=== Barbell Example ===")

    graph, report = load_edge_list(BARBELL)
    print(f"n={graph.n} m={graph.m} comments={report.comments}")

    record = run_qls(graph, QlsConfig(subset_size=2, solver="exact", seed=0))
    best, _ = global_optimum(graph)
    print(f"Trajectory: {[round(h, 4) for h in record.modularity_trajectory]}")
    print(f"Final modularity {record.final_modularity:.6f} (optimum {best:.6f})")
    print(f"Assignment: {record.final_assignment}")
    print()


def example_backends():
    """Same graph and seed, three backends"""
    print("=== Backend Comparison ===")

    graph = generate_planted_partition(60, 0.4, 0.03, seed=1)
    options = SolverOptions(anneal_samples=500, shots=2000)
    print(f"Planted partition n={graph.n} m={graph.m}")

    for solver in ("exact", "anneal", "variational"):
        cfg = QlsConfig(subset_size=6, solver=solver, solver_options=options, seed=7)
        record = run_qls(graph, cfg)
        print(
            f"  {solver:12s} H={record.final_modularity:.6f} "
            f"iterations={record.iterations} accepted={record.accepted_moves} "
            f"time={record.wall_time:.2f}s"
        )

    print()


def main():
    """Run all examples"""
    example_barbell()
    example_backends()

    print("All examples completed successfully!")


if __name__ == "__main__":
    main()

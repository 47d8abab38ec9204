"""Independent oracles and instance generators shared by the test suite.

The oracles work straight off arc lists and color tuples, never through
the package's precomputed adjacency, so they stay independent of the code
paths they check.
"""

from __future__ import annotations

import random

from unicolor import Configuration, DirectedGraph, build_graph


def oracle_enabled(arcs, colors, i) -> bool:
    return any(colors[p] == colors[i] for (p, q) in arcs if q == i)


def oracle_enabled_set(arcs, colors) -> set[int]:
    return {i for i in range(len(colors)) if oracle_enabled(arcs, colors, i)}


def oracle_legitimate(arcs, colors) -> bool:
    return all(colors[i] != colors[j] for (i, j) in arcs)


def oracle_conflict_pairs(arcs, colors) -> set[tuple[int, int]]:
    return {(j, i) for (i, j) in arcs if colors[i] == colors[j]}


def oracle_det_do_loop(colors_of_preds, old: int, k: int, fuel: int = 10_000) -> int:
    """Literal increment loop run to quiescence; fuel bounds runaway loops."""
    c = old
    while c in colors_of_preds:
        c = (c + 1) % k
        fuel -= 1
        if fuel == 0:
            raise RuntimeError("do-loop did not quiesce")
    return c


def random_arcs(rng: random.Random, n: int) -> list[tuple[int, int]]:
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    rng.shuffle(pairs)
    count = rng.randrange(1, len(pairs) + 1)
    return pairs[:count]


def random_instance(rng: random.Random, max_n: int = 8, max_k: int = 5):
    """A random (graph, configuration) pair for property sweeps."""
    n = rng.randrange(2, max_n + 1)
    arcs = random_arcs(rng, n)
    graph = build_graph(n, arcs)
    k = rng.randrange(2, max_k + 1)
    config = Configuration(colors=tuple(rng.randrange(k) for _ in range(n)), k=k)
    return graph, config


def apply_moves(config: Configuration, moves) -> Configuration:
    return config.replace({m.process: m.new_color for m in moves})


def graph_arc_list(graph: DirectedGraph) -> list[tuple[int, int]]:
    return list(graph.arcs)

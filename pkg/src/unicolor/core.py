"""Directed-graph topologies, colored configurations, and the base predicates.

An arc ``(i, j)`` means process ``j`` can read process ``i``'s variables:
``i`` is a predecessor of ``j`` and ``j`` a successor of ``i``.  A
bidirectional link is modeled as two opposed arcs.  Everything downstream
(recoloring rules, schedulers, the execution engine, the verifier) is built
on the three predicates defined here: per-process enabledness, the list of
color conflicts, and configuration legitimacy (no arc joins two processes
of equal color).
"""

from __future__ import annotations

import random
from dataclasses import dataclass


class GraphConstructionError(ValueError):
    """Self-loop, out-of-range endpoint, or duplicate arc in a graph spec."""


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable directed graph with precomputed adjacency.

    ``preds[i]``/``succs[i]`` are sorted tuples of the processes ``i`` reads
    from / is read by; ``neighbors[i]`` is their union.  ``degrees[i]`` is
    the size of that union, so a bidirectional pair of arcs counts as one
    neighbor.  Build instances through :func:`build_graph` or a generator,
    never directly.
    """

    n: int
    arcs: tuple[tuple[int, int], ...]
    preds: tuple[tuple[int, ...], ...]
    succs: tuple[tuple[int, ...], ...]
    neighbors: tuple[tuple[int, ...], ...]
    in_degrees: tuple[int, ...]
    out_degrees: tuple[int, ...]
    degrees: tuple[int, ...]
    max_in_degree: int
    max_out_degree: int
    max_degree: int
    label: str = "custom"

    def is_arc(self, i: int, j: int) -> bool:
        return j in self.succs[i]

    def summary(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "arcs": len(self.arcs),
            "max_in_degree": self.max_in_degree,
            "max_out_degree": self.max_out_degree,
            "max_degree": self.max_degree,
        }


def build_graph(n: int, arcs, label: str = "custom") -> DirectedGraph:
    """Validate an arc list and precompute all adjacency structure.

    Raises :class:`GraphConstructionError` naming the offending arc on a
    self-loop, an endpoint outside ``0..n-1``, or a duplicate arc.
    Duplicates are rejected rather than silently merged.
    """
    if n < 1:
        raise GraphConstructionError(f"need at least one process, got n={n}")
    seen: set[tuple[int, int]] = set()
    pred_sets: list[set[int]] = [set() for _ in range(n)]
    succ_sets: list[set[int]] = [set() for _ in range(n)]
    for arc in arcs:
        i, j = arc
        if i == j:
            raise GraphConstructionError(f"self-loop arc ({i}, {j})")
        if not (0 <= i < n and 0 <= j < n):
            raise GraphConstructionError(f"arc ({i}, {j}) endpoint out of range for n={n}")
        if (i, j) in seen:
            raise GraphConstructionError(f"duplicate arc ({i}, {j})")
        seen.add((i, j))
        succ_sets[i].add(j)
        pred_sets[j].add(i)

    preds = tuple(tuple(sorted(s)) for s in pred_sets)
    succs = tuple(tuple(sorted(s)) for s in succ_sets)
    neighbors = tuple(tuple(sorted(pred_sets[i] | succ_sets[i])) for i in range(n))
    in_degrees = tuple(len(p) for p in preds)
    out_degrees = tuple(len(s) for s in succs)
    degrees = tuple(len(nb) for nb in neighbors)
    return DirectedGraph(
        n=n,
        arcs=tuple(sorted(seen)),
        preds=preds,
        succs=succs,
        neighbors=neighbors,
        in_degrees=in_degrees,
        out_degrees=out_degrees,
        degrees=degrees,
        max_in_degree=max(in_degrees),
        max_out_degree=max(out_degrees),
        max_degree=max(degrees),
        label=label,
    )


def ring(n: int) -> DirectedGraph:
    """Unidirectional ring: arcs (i, i+1 mod n), so i's predecessor is i-1."""
    if n < 2:
        raise GraphConstructionError(f"ring needs n >= 2, got {n}")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)], label=f"ring:{n}")


def chain(n: int) -> DirectedGraph:
    """Unidirectional chain oriented source -> sink.

    Process 0 is the sink and process n-1 the source: arcs are (i, i-1),
    so process i reads process i+1 and the source has no predecessor.
    """
    if n < 2:
        raise GraphConstructionError(f"chain needs n >= 2, got {n}")
    return build_graph(n, [(i, i - 1) for i in range(1, n)], label=f"chain:{n}")


def bidirectional_clique(n: int) -> DirectedGraph:
    """Complete graph with both arcs between every pair; max_degree = n-1."""
    if n < 2:
        raise GraphConstructionError(f"clique needs n >= 2, got {n}")
    arcs = [(i, j) for i in range(n) for j in range(n) if i != j]
    return build_graph(n, arcs, label=f"clique:{n}")


def random_digraph(n: int, max_degree: int, seed: int) -> DirectedGraph:
    """Random digraph saturated under a combined-degree cap.

    Candidate arcs are tried in a seeded random order and kept whenever
    neither endpoint's neighbor count would exceed ``max_degree``.  On a
    saturated graph the cap is reached exactly (some process has
    ``max_degree`` neighbors) whenever ``max_degree < n``.
    """
    if n < 2 or max_degree < 1:
        raise GraphConstructionError(f"random digraph needs n >= 2, max_degree >= 1, got n={n}, max_degree={max_degree}")
    rng = random.Random(seed)
    candidates = [(i, j) for i in range(n) for j in range(n) if i != j]
    rng.shuffle(candidates)
    neighbor_sets: list[set[int]] = [set() for _ in range(n)]
    arcs: list[tuple[int, int]] = []
    for i, j in candidates:
        grows_i = j not in neighbor_sets[i]
        grows_j = i not in neighbor_sets[j]
        if grows_i and len(neighbor_sets[i]) >= max_degree:
            continue
        if grows_j and len(neighbor_sets[j]) >= max_degree:
            continue
        neighbor_sets[i].add(j)
        neighbor_sets[j].add(i)
        arcs.append((i, j))
    graph = build_graph(n, arcs, label=f"random:{n}:{max_degree}:{seed}")
    if max_degree < n and graph.max_degree != max_degree:
        raise GraphConstructionError(
            f"saturation reached max_degree {graph.max_degree}, wanted {max_degree}"
        )
    return graph


def parse_graph_text(text: str, label: str = "file") -> DirectedGraph:
    """Parse the plain-text graph format.

    First non-comment line is the process count ``n``; each following line
    is one arc ``i j``.  ``#`` starts a comment, blank lines are skipped.
    """
    n: int | None = None
    arcs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise GraphConstructionError(f"line {lineno}: expected process count, got {raw!r}")
            n = int(fields[0])
            continue
        if len(fields) != 2:
            raise GraphConstructionError(f"line {lineno}: expected 'i j', got {raw!r}")
        arcs.append((int(fields[0]), int(fields[1])))
    if n is None:
        raise GraphConstructionError("empty graph file")
    return build_graph(n, arcs, label=label)


def read_graph_file(path: str) -> DirectedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read(), label=f"file:{path}")


@dataclass(frozen=True)
class Configuration:
    """A color per process, drawn from the palette ``0..k-1``."""

    colors: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"palette size must be >= 1, got k={self.k}")
        object.__setattr__(self, "colors", tuple(self.colors))
        for i, c in enumerate(self.colors):
            if not (0 <= c < self.k):
                raise ValueError(f"color {c} of process {i} outside palette 0..{self.k - 1}")

    @classmethod
    def uniform(cls, n: int, color: int, k: int) -> Configuration:
        return cls(colors=(color,) * n, k=k)

    @classmethod
    def random(cls, n: int, k: int, rng: random.Random) -> Configuration:
        return cls(colors=tuple(rng.randrange(k) for _ in range(n)), k=k)

    def replace(self, assignments: dict[int, int]) -> Configuration:
        colors = list(self.colors)
        for i, c in assignments.items():
            colors[i] = c
        return Configuration(colors=tuple(colors), k=self.k)


@dataclass(frozen=True)
class Conflict:
    """Process whose color equals one of its predecessors' colors."""

    process: int
    offending_predecessor: int


def _check(graph: DirectedGraph, config: Configuration) -> None:
    if len(config.colors) != graph.n:
        raise ValueError(f"configuration has {len(config.colors)} colors for a {graph.n}-process graph")


def enabled(graph: DirectedGraph, config: Configuration, i: int) -> bool:
    """True iff some predecessor of ``i`` holds ``i``'s color."""
    _check(graph, config)
    ci = config.colors[i]
    return any(config.colors[p] == ci for p in graph.preds[i])


def enabled_set(graph: DirectedGraph, config: Configuration) -> tuple[int, ...]:
    """All enabled processes, ascending."""
    _check(graph, config)
    colors = config.colors
    return tuple(
        i for i in range(graph.n)
        if any(colors[p] == colors[i] for p in graph.preds[i])
    )


def conflicts(graph: DirectedGraph, config: Configuration) -> list[Conflict]:
    """One entry per (process, predecessor) pair with equal colors."""
    _check(graph, config)
    colors = config.colors
    return [
        Conflict(process=i, offending_predecessor=p)
        for i in range(graph.n)
        for p in graph.preds[i]
        if colors[p] == colors[i]
    ]


def is_legitimate(graph: DirectedGraph, config: Configuration) -> bool:
    """True iff every arc joins two distinct colors."""
    _check(graph, config)
    colors = config.colors
    return all(colors[i] != colors[j] for i, j in graph.arcs)

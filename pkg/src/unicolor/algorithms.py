"""The two local recoloring rules and their closed-form expectation bounds.

Both rules share one guard: a process is enabled when some predecessor
holds its color.  The deterministic command walks the palette cyclically
from the current color to the first color no predecessor holds, all in one
atomic move.  The probabilistic command draws uniformly among the colors no
predecessor holds.  The bound evaluators return exact rationals so that
tests can compare them without tolerances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .core import Configuration, DirectedGraph


class AlgorithmKind(Enum):
    DETERMINISTIC = "det"
    PROBABILISTIC = "prob"


@dataclass(frozen=True)
class AlgorithmSpec:
    """Which rule a run executes, and the palette size it uses.

    The probabilistic rule additionally needs ``k > max_degree`` of the
    target graph; that depends on the graph, so it is checked at run setup
    rather than here.
    """

    kind: AlgorithmKind
    k: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"palette size must be >= 2, got k={self.k}")

    @classmethod
    def deterministic(cls, k: int) -> AlgorithmSpec:
        return cls(AlgorithmKind.DETERMINISTIC, k)

    @classmethod
    def probabilistic(cls, k: int) -> AlgorithmSpec:
        return cls(AlgorithmKind.PROBABILISTIC, k)

    @classmethod
    def ring_deterministic(cls, k: int) -> AlgorithmSpec:
        """Deterministic rule on a single-predecessor graph.

        Not a separate rule: with one predecessor the cyclic scan reduces to
        a plain increment (two at most, when the predecessor sits on the
        next color).  The constructor only documents the specialization.
        """
        return cls(AlgorithmKind.DETERMINISTIC, k)

    def summary(self) -> dict:
        return {"kind": self.kind.value, "k": self.k}


@dataclass(frozen=True)
class Move:
    """One command execution: a process leaving old_color for new_color."""

    process: int
    old_color: int
    new_color: int


class NonTerminatingCommandError(RuntimeError):
    """Deterministic command found every palette color among predecessors."""


def predecessor_colors(graph: DirectedGraph, config: Configuration, i: int) -> set[int]:
    return {config.colors[p] for p in graph.preds[i]}


def det_command(graph: DirectedGraph, config: Configuration, i: int) -> Move:
    """Recolor ``i`` to the first conflict-free color in cyclic order.

    Runs the inner increment loop to quiescence as one atomic move: the
    returned color is the first of ``old+1, old+2, ...`` (mod k) absent
    from the predecessors' colors.  Raises
    :class:`NonTerminatingCommandError` when the predecessors hold every
    palette color, which the increment loop would never escape.
    """
    taken = predecessor_colors(graph, config, i)
    old = config.colors[i]
    if old not in taken:
        raise ValueError(f"process {i} is not enabled")
    k = config.k
    if len(taken) >= k:
        raise NonTerminatingCommandError(
            f"process {i}: all {k} colors held by predecessors (in-degree {graph.in_degrees[i]})"
        )
    new = (old + 1) % k
    while new in taken:
        new = (new + 1) % k
    return Move(process=i, old_color=old, new_color=new)


def prob_command(graph: DirectedGraph, config: Configuration, i: int, rng: random.Random) -> Move:
    """Recolor ``i`` uniformly among the colors no predecessor holds.

    The draw indexes into the sorted candidate list, so runs are
    bit-reproducible for a fixed seed.
    """
    taken = predecessor_colors(graph, config, i)
    old = config.colors[i]
    if old not in taken:
        raise ValueError(f"process {i} is not enabled")
    candidates = [c for c in range(config.k) if c not in taken]
    if not candidates:
        raise ValueError(
            f"process {i}: empty candidate set, palette {config.k} too small for in-degree {graph.in_degrees[i]}"
        )
    new = candidates[rng.randrange(len(candidates))]
    return Move(process=i, old_color=old, new_color=new)


def command(
    graph: DirectedGraph,
    config: Configuration,
    i: int,
    algo: AlgorithmSpec,
    rng: random.Random,
) -> Move:
    if algo.kind is AlgorithmKind.DETERMINISTIC:
        return det_command(graph, config, i)
    return prob_command(graph, config, i, rng)


def expected_new_conflicts(graph: DirectedGraph, i: int, k: int) -> Fraction:
    """Expected conflicts one probabilistic move of ``i`` creates.

    Exactly (degree - in_degree) / (k - in_degree): each successor outside
    the predecessor set is hit with probability 1/(k - in_degree).
    """
    d = graph.degrees[i]
    d_in = graph.in_degrees[i]
    if k <= d_in:
        raise ValueError(f"need k > in-degree, got k={k}, in-degree={d_in}")
    return Fraction(d - d_in, k - d_in)


def conflict_creation_bound(max_degree: int, k: int) -> Fraction:
    """Graph-wide bound (max_degree - 1) / (k - 1) on conflicts per move."""
    if max_degree < 1:
        raise ValueError(f"need max_degree >= 1, got {max_degree}")
    if k <= max_degree:
        raise ValueError(f"need k > max_degree, got k={k}, max_degree={max_degree}")
    return Fraction(max_degree - 1, k - 1)


def expected_steps_per_conflict(max_degree: int, k: int) -> Fraction:
    """Expected moves to extinguish one conflict and its descendants.

    Geometric series over the per-move creation bound M: sum of M^i equals
    1/(1 - M) = (k - 1)/(k - max_degree).
    """
    bound = conflict_creation_bound(max_degree, k)
    return 1 / (1 - bound)


def expected_total_steps_bound(n: int, max_degree: int, k: int) -> Fraction:
    """Expected-move bound n(k-1)/(k-max_degree) from a worst-case start.

    At most n initial conflicts, each costing ``expected_steps_per_conflict``.
    With k = max_degree + 1 this is n * max_degree; as k grows it tends to n.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return n * expected_steps_per_conflict(max_degree, k)

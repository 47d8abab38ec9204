"""The execution loop: scheduler round, command application, trace record.

Within one step every activated process computes its command against the
pre-step configuration and all moves are applied together.  That
synchronous-within-step semantics is what lets the synchronous policy
exhibit lock-step non-convergence on uniform rings; for single-activation
policies it coincides with plain interleaving.  Moves write disjoint
variables (one process moves at most once per step), so application order
inside a step is immaterial.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .core import Configuration, DirectedGraph, enabled_set
from .algorithms import AlgorithmKind, AlgorithmSpec, Move, command
from .schedulers import SchedulerPolicy, select


class EngineStepError(RuntimeError):
    """Command or scheduler failure, tagged with the step it happened at."""

    def __init__(self, step_index: int, cause: BaseException):
        super().__init__(f"step {step_index}: {cause}")
        self.step_index = step_index
        self.cause = cause


@dataclass(frozen=True)
class StepRecord:
    activated: tuple[int, ...]
    moves: tuple[Move, ...]
    config_after: tuple[int, ...] | None = None


@dataclass(frozen=True)
class ExecutionTrace:
    """Step-by-step record of one execution.

    ``total_steps`` counts scheduler rounds, ``total_moves`` counts process
    activations; convergence bounds are stated in moves.  ``terminated``
    means the final configuration has no enabled process, which for these
    rules coincides with legitimacy.
    """

    graph: dict
    algorithm: dict
    scheduler: str
    seed: int
    max_steps: int
    initial: tuple[int, ...]
    steps: tuple[StepRecord, ...]
    final: tuple[int, ...]
    terminated: bool
    total_steps: int
    total_moves: int

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "algorithm": self.algorithm,
            "scheduler": self.scheduler,
            "seed": self.seed,
            "max_steps": self.max_steps,
            "initial": list(self.initial),
            "final": list(self.final),
            "terminated": self.terminated,
            "total_steps": self.total_steps,
            "total_moves": self.total_moves,
            "steps": [
                {
                    "activated": list(rec.activated),
                    "moves": [[m.process, m.old_color, m.new_color] for m in rec.moves],
                    **(
                        {"config": list(rec.config_after)}
                        if rec.config_after is not None
                        else {}
                    ),
                }
                for rec in self.steps
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_tsv(self) -> str:
        lines = ["step\tprocess\told\tnew"]
        for t, rec in enumerate(self.steps):
            for m in rec.moves:
                lines.append(f"{t}\t{m.process}\t{m.old_color}\t{m.new_color}")
        return "\n".join(lines) + "\n"


def default_max_steps(graph: DirectedGraph, algo: AlgorithmSpec) -> int:
    """10 n^2 rounds for the deterministic rule (well above n(n-1)/2);
    100x the expected-move bound for the probabilistic one."""
    if algo.kind is AlgorithmKind.DETERMINISTIC:
        return 10 * graph.n * graph.n
    bound = graph.n * (algo.k - 1) / (algo.k - graph.max_degree)
    return math.ceil(100 * bound)


def run(
    graph: DirectedGraph,
    algo: AlgorithmSpec,
    policy: SchedulerPolicy,
    initial: Configuration,
    max_steps: int | None = None,
    seed: int = 0,
    record: str = "moves",
) -> ExecutionTrace:
    """Run until terminal or the step cap; return the trace.

    ``record`` is "full" (per-step configurations), "moves" (activation
    sets and moves only), or "none" (counters only, for long experiment
    batches).  Non-termination within the cap is reported via
    ``terminated=False``, not raised.
    """
    if len(initial.colors) != graph.n:
        raise ValueError(f"initial configuration has {len(initial.colors)} colors for n={graph.n}")
    if initial.k != algo.k:
        raise ValueError(f"initial palette {initial.k} != algorithm palette {algo.k}")
    if algo.kind is AlgorithmKind.PROBABILISTIC and algo.k <= graph.max_degree:
        raise ValueError(
            f"probabilistic rule needs k > max_degree, got k={algo.k}, max_degree={graph.max_degree}"
        )
    if record not in ("none", "moves", "full"):
        raise ValueError(f"unknown record mode {record!r}")
    if max_steps is None:
        max_steps = default_max_steps(graph, algo)

    rng = random.Random(seed)
    config = initial
    steps: list[StepRecord] = []
    total_moves = 0
    total_steps = 0
    terminated = False
    while True:
        if not enabled_set(graph, config):
            terminated = True
            break
        if total_steps >= max_steps:
            break
        try:
            chosen = select(policy, graph, config, rng, total_steps)
            if chosen is None:
                break  # script exhausted before termination
            moves = tuple(command(graph, config, i, algo, rng) for i in chosen)
        except Exception as exc:
            raise EngineStepError(total_steps, exc) from exc
        config = config.replace({m.process: m.new_color for m in moves})
        total_moves += len(moves)
        total_steps += 1
        if record != "none":
            steps.append(
                StepRecord(
                    activated=chosen,
                    moves=moves,
                    config_after=config.colors if record == "full" else None,
                )
            )

    return ExecutionTrace(
        graph=graph.summary(),
        algorithm=algo.summary(),
        scheduler=policy.name,
        seed=seed,
        max_steps=max_steps,
        initial=initial.colors,
        steps=tuple(steps),
        final=config.colors,
        terminated=terminated,
        total_steps=total_steps,
        total_moves=total_moves,
    )


def run_uniform(
    graph: DirectedGraph,
    algo: AlgorithmSpec,
    policy: SchedulerPolicy,
    color0: int,
    max_steps: int | None = None,
    seed: int = 0,
    record: str = "moves",
) -> ExecutionTrace:
    """Run from the all-``color0`` configuration, the adversarial start."""
    initial = Configuration.uniform(graph.n, color0, algo.k)
    return run(graph, algo, policy, initial, max_steps=max_steps, seed=seed, record=record)

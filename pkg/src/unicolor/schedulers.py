"""Scheduler policies: which enabled processes fire at each step.

The policies are adversary models, not fairness providers.  Synchronous
fires every enabled process at once; the distributed policy draws a
uniformly random nonempty subset of the enabled processes; the two locally
central policies never fire two neighbors in the same step (a single
uniform pick, or a greedy maximal independent subset over a seeded
permutation).  Scripted policies replay a fixed activation sequence and
validate it against the evolving configuration at replay time, since
enabledness cannot be known at script-construction time.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .core import Configuration, DirectedGraph, enabled_set, ring
from .algorithms import det_command


class SchedulerKind(Enum):
    SYNCHRONOUS = "sync"
    DISTRIBUTED_RANDOM_SUBSET = "dist"
    LOCALLY_CENTRAL_SINGLE = "lc1"
    LOCALLY_CENTRAL_MAXIMAL = "lcmax"
    SCRIPTED = "script"


class ScriptViolationError(RuntimeError):
    """A scripted activation was disabled or clashed with a neighbor."""

    def __init__(self, step_index: int, message: str):
        super().__init__(f"script step {step_index}: {message}")
        self.step_index = step_index


class AmbiguousChaseError(RuntimeError):
    """Chase schedule found several enabled processes where one was required."""


@dataclass(frozen=True)
class Script:
    """Fixed sequence of activation sets, one per step.

    ``locally_central`` scripts are rejected at replay if a step activates
    two neighboring processes; it is turned off only to replay divergence
    witnesses, which deliberately fire neighbors together.
    """

    steps: tuple[tuple[int, ...], ...]
    locally_central: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "steps", tuple(tuple(sorted(set(step))) for step in self.steps)
        )

    def __len__(self) -> int:
        return len(self.steps)

    @classmethod
    def from_text(cls, text: str) -> Script:
        steps = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            steps.append(tuple(int(tok) for tok in line.split()))
        return cls(steps=tuple(steps))

    @classmethod
    def from_file(cls, path: str) -> Script:
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def to_text(self) -> str:
        return "".join(" ".join(str(i) for i in step) + "\n" for step in self.steps)


@dataclass(frozen=True)
class SchedulerPolicy:
    kind: SchedulerKind
    script: Script | None = None

    def __post_init__(self) -> None:
        if self.kind is SchedulerKind.SCRIPTED and self.script is None:
            raise ValueError("scripted policy needs a script")

    @classmethod
    def synchronous(cls) -> SchedulerPolicy:
        return cls(SchedulerKind.SYNCHRONOUS)

    @classmethod
    def distributed(cls) -> SchedulerPolicy:
        return cls(SchedulerKind.DISTRIBUTED_RANDOM_SUBSET)

    @classmethod
    def locally_central_single(cls) -> SchedulerPolicy:
        return cls(SchedulerKind.LOCALLY_CENTRAL_SINGLE)

    @classmethod
    def locally_central_maximal(cls) -> SchedulerPolicy:
        return cls(SchedulerKind.LOCALLY_CENTRAL_MAXIMAL)

    @classmethod
    def scripted(cls, script: Script) -> SchedulerPolicy:
        return cls(SchedulerKind.SCRIPTED, script=script)

    @property
    def name(self) -> str:
        return self.kind.value


def _validate_scripted(
    policy: SchedulerPolicy,
    graph: DirectedGraph,
    enabled_now: tuple[int, ...],
    step_index: int,
) -> tuple[int, ...] | None:
    script = policy.script
    assert script is not None
    if step_index >= len(script.steps):
        return None
    chosen = script.steps[step_index]
    enabled_lookup = set(enabled_now)
    for i in chosen:
        if i not in enabled_lookup:
            raise ScriptViolationError(step_index, f"process {i} is not enabled")
    if script.locally_central:
        for a in chosen:
            for b in chosen:
                if a < b and b in graph.neighbors[a]:
                    raise ScriptViolationError(
                        step_index, f"processes {a} and {b} are neighbors"
                    )
    return chosen


def select(
    policy: SchedulerPolicy,
    graph: DirectedGraph,
    config: Configuration,
    rng: random.Random,
    step_index: int = 0,
) -> tuple[int, ...] | None:
    """Pick this step's activation set from the enabled processes.

    Returns a sorted tuple, or None when a scripted policy has run out of
    steps.  Callers check terminality first; with at least one process
    enabled every non-scripted policy returns a nonempty set.
    """
    enabled_now = enabled_set(graph, config)
    if not enabled_now:
        raise ValueError("select called on a terminal configuration")

    kind = policy.kind
    if kind is SchedulerKind.SYNCHRONOUS:
        return enabled_now
    if kind is SchedulerKind.DISTRIBUTED_RANDOM_SUBSET:
        mask = rng.randrange(1, 1 << len(enabled_now))
        return tuple(i for bit, i in enumerate(enabled_now) if mask >> bit & 1)
    if kind is SchedulerKind.LOCALLY_CENTRAL_SINGLE:
        return (enabled_now[rng.randrange(len(enabled_now))],)
    if kind is SchedulerKind.LOCALLY_CENTRAL_MAXIMAL:
        order = list(enabled_now)
        rng.shuffle(order)
        picked: list[int] = []
        blocked: set[int] = set()
        for i in order:
            if i not in blocked:
                picked.append(i)
                blocked.add(i)
                blocked.update(graph.neighbors[i])
        return tuple(sorted(picked))
    return _validate_scripted(policy, graph, enabled_now, step_index)


def chain_schedule(n: int) -> Script:
    """Worst-case singleton schedule for the n-process chain.

    With the sink as process 0 and the source as process n-1, activates
    processes 0..j-1 in ascending order for j = n-1 down to 1: exactly
    n(n-1)/2 activations, each moving the uniform prefix one color forward.
    """
    if n < 2:
        raise ValueError(f"chain schedule needs n >= 2, got {n}")
    steps = [(i,) for j in range(n - 1, 0, -1) for i in range(j)]
    return Script(steps=tuple(steps))


def ring_chase_initial(n: int, k: int | None = None) -> Configuration:
    """Ring configuration with one duplicated adjacent pair.

    Colors (0, 0, 1, 2, ..., n-2): the unique near-coloring (up to
    rotation) on an n-ring with a k = n-1 palette that has exactly one
    conflicting adjacent pair.
    """
    if n < 3:
        raise ValueError(f"chase initial needs n >= 3, got {n}")
    if k is None:
        k = n - 1
    if k < n - 1:
        raise ValueError(f"palette k={k} cannot hold colors 0..{n - 2}")
    return Configuration(colors=(0,) + tuple(range(n - 1)), k=k)


def ring_chase_schedule(
    n: int,
    max_steps: int,
    k: int | None = None,
    initial: Configuration | None = None,
) -> Script:
    """Schedule that always activates the single conflicted ring process.

    Generated against the evolving configuration of the deterministic rule
    on the n-ring started from ``initial`` (default:
    :func:`ring_chase_initial`): each step activates the unique process
    whose color equals its predecessor's.  Stops at ``max_steps`` or when
    no process is enabled, so a legitimate start yields an empty script.
    With the default k = n-1 palette the conflict is chased around the ring
    forever; with k = n it dies out.  Raises :class:`AmbiguousChaseError`
    if the single conflict ever splits, which would mean the construction
    is wrong.
    """
    graph = ring(n)
    config = ring_chase_initial(n, k) if initial is None else initial
    steps: list[tuple[int, ...]] = []
    for _ in range(max_steps):
        enabled_now = enabled_set(graph, config)
        if not enabled_now:
            break
        if len(enabled_now) > 1:
            raise AmbiguousChaseError(
                f"expected one enabled process, found {enabled_now} after {len(steps)} steps"
            )
        i = enabled_now[0]
        move = det_command(graph, config, i)
        config = config.replace({i: move.new_color})
        steps.append((i,))
    return Script(steps=tuple(steps))

"""Self-stabilizing vertex coloring on unidirectional networks.

Simulator, Monte Carlo experiment harness, and exhaustive small-instance
verifier for the deterministic (cyclic next-free-color) and probabilistic
(uniform free-color) local recoloring rules under adversarial schedulers.
"""

from .core import (
    Configuration,
    Conflict,
    DirectedGraph,
    GraphConstructionError,
    bidirectional_clique,
    build_graph,
    chain,
    conflicts,
    enabled,
    enabled_set,
    is_legitimate,
    parse_graph_text,
    random_digraph,
    read_graph_file,
    ring,
)
from .algorithms import (
    AlgorithmKind,
    AlgorithmSpec,
    Move,
    NonTerminatingCommandError,
    command,
    conflict_creation_bound,
    det_command,
    expected_new_conflicts,
    expected_steps_per_conflict,
    expected_total_steps_bound,
    prob_command,
)
from .schedulers import (
    AmbiguousChaseError,
    SchedulerKind,
    SchedulerPolicy,
    Script,
    ScriptViolationError,
    chain_schedule,
    ring_chase_initial,
    ring_chase_schedule,
    select,
)
from .engine import EngineStepError, ExecutionTrace, StepRecord, run, run_uniform
from .verify import (
    DivergenceWitness,
    EnumerationCapError,
    PolicyClass,
    VerificationReport,
    WorstCaseWitness,
    replay_witness,
    verify_deterministic,
    verify_probabilistic_support,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    InitialDistribution,
    TrialResult,
    run_experiment,
    split_seed,
    sweep,
)
from .repro import (
    ReproReport,
    repro_chain_worst_case,
    repro_clique_state_bound,
    repro_ring_chase,
    repro_sync_ring,
)

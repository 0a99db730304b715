"""Evaluation toolkit for program-repair outputs.

Measures how much of a source program a candidate fix rewrites
(normalized edit cost), scores candidate pools with unbiased pass@k and
cost-bounded fix_p@k metrics, selects maximally diverse candidate
subsets, computes edit-aware group rewards and advantages for
reinforcement-style training, and models the throughput of speculative
editing that drafts unchanged lines from the buggy source. Decoupled
from any model: inputs are program texts and correctness flags.
"""

from ._kernels import backend
from .diversity import (
    DEFAULT_SUBSET_BUDGET,
    SimilarityMatrix,
    build_similarity,
    select_diverse,
    subset_objective,
)
from .editcost import (
    EditCostResult,
    edit_cost,
    edit_cost_sequences,
    levenshtein,
    levenshtein_script,
)
from .errors import (
    DomainError,
    EmptyGroup,
    EmptySource,
    ExactTooLarge,
    GoldenIsIdentical,
    InconsistentN,
    NoCorrectSamples,
    ParseError,
    RepairEvalError,
    SchemaError,
    UnknownLanguageTag,
)
from .harness import (
    EvalRecord,
    EvalResult,
    Rejection,
    RunConfig,
    TaskDetail,
    emit_report,
    ingest,
    iter_ingest,
    load_config,
    parse_report,
    run_eval,
    run_reward,
)
from .metrics import (
    CandidateOutcome,
    MetricReport,
    TaskOutcomes,
    as_ratio,
    at_k_estimator,
    fix_count,
    report,
)
from .normalize import (
    Language,
    NormalizedProgram,
    SourceText,
    normalize,
    render,
)
from .reward import (
    AdvantageVector,
    RewardVector,
    RolloutGroup,
    advantages,
    edit_penalties,
    group_accuracy,
    rewards,
    threshold_gate,
)
from .specdecode import (
    SimTrace,
    SpecDecodeProfile,
    acceptance_from_edit_cost,
    acceptance_rate,
    expected_tokens,
    profile,
    sim_standard_error,
    simulate_geometric,
    simulate_prompt_lookup,
    throughput_factor,
)

__version__ = "0.1.0"

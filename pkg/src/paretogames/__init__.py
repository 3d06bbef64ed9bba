"""Exact Pareto-curve toolkit for two-objective total-reward stochastic games.

The package computes, for every state of a turn-based stochastic game with
two reward dimensions, the frontier of point vectors the maximizing player
can ensure: exact curves by memoryless-strategy enumeration for stopping
games, anytime approximations by value iteration with sound residual bounds,
plus structural audits of the slope laws those curves obey, a reduction from
discounted to total reward, and a simulation harness for the credit-growth
strategy in inverse betting games.

Everything is exact: coordinates, probabilities, and rewards are
``fractions.Fraction`` throughout; no float enters any computation (floats
appear only in rendered SVG coordinates).
"""

from .errors import (
    AdamCheated,
    BadDirection,
    DeltaOutOfRange,
    EmptyInput,
    GameSolverError,
    HypothesisViolated,
    IncompleteCurveMap,
    InvalidBettingGame,
    InvalidGame,
    InvalidStrategy,
    InvalidValuation,
    NonPositiveEpsilon,
    NotStopping,
    NotStoppingUnderPolicy,
    NotWinningVertex,
    OutOfDomain,
    RelationMismatch,
    StepBoundExceeded,
    UnknownState,
    WeightsInvalid,
)
from .frontier import (
    MINUS_INFINITY,
    Frontier,
    as_fraction,
    as_point,
    canonicalize,
    contains,
    distance,
    dwc_conv_union,
    evaluate,
    extremal_points,
    frontier_from_csv,
    frontier_to_csv,
    frontier_to_svg,
    intersect_min,
    slope_at,
    support,
    translate,
    weighted_sum,
)
from .games import (
    Game,
    Kind,
    StateRecord,
    StoppingReport,
    ValidationReport,
    check_stopping,
    discount_transform,
    fixture_game,
    game_from_json,
    game_to_json,
    load_game,
    make_game,
    normalize,
    require_valid,
    save_game,
    validate_game,
)
from .bellman import (
    CurveMap,
    IterationResult,
    achievable,
    achievable_within,
    bellman_step,
    check_fixpoint,
    initial_curves,
    tail_bound,
    value_iterate,
)
from .mdp import (
    induce_mdp,
    mdp_pareto_curve,
    optimal_policy,
    policy_evaluate,
)
from .determined import (
    check_determinacy,
    enumerate_md_strategies,
    solve_determined,
)
from .betting import (
    ADAM_FACTORIES,
    AttractorResult,
    BetKind,
    BetVertex,
    BettingConfig,
    BettingGame,
    EqualSplitAdam,
    FundTargetAdam,
    MixedAdam,
    RandomAdam,
    ScriptedAdam,
    StarveAdam,
    Trace,
    TraceStep,
    attractor,
    betting_from_json,
    betting_to_json,
    eve_move,
    load_betting,
    potential,
    save_betting,
    simulate,
    step_bound,
    trace_to_csv,
    validate_betting,
)
from .audit import (
    AuditFinding,
    AuditReport,
    audit_chance,
    audit_frontier,
    audit_game,
    audit_p1,
    audit_p2,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

"""Exact curves for determined games by minimizer-strategy enumeration.

Fixing each memoryless deterministic choice function for the minimizer
leaves a maximizer-only process whose exact Pareto curves we can compute;
folding the per-strategy curves with pointwise minimum yields the candidate
family V.  In a stopping game the fixpoint of the curve operator is unique,
so V passes the fixpoint check iff the game is determined — and then V *is*
the family of true Pareto curves.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import reduce
from itertools import product
from typing import Iterator, Mapping

from .bellman import CurveMap, check_fixpoint
from .errors import NotStopping
from .frontier import Frontier, intersect_min
from .games import Game, Kind, check_stopping, require_valid
from .mdp import MDStrategy, induce_mdp, mdp_pareto_curve


def enumerate_md_strategies(g: Game) -> Iterator[MDStrategy]:
    """Every total memoryless deterministic choice function of the
    minimizer, exactly once (one empty mapping if it controls nothing)."""
    require_valid(g)
    p2_states = [s for s in g.states if s.kind is Kind.P2]
    ids = [s.id for s in p2_states]
    for combo in product(*(s.successors for s in p2_states)):
        yield dict(zip(ids, combo))


def _strategy_curves(g: Game, sigma: MDStrategy) -> CurveMap:
    mdp = induce_mdp(g, sigma)
    return {sid: mdp_pareto_curve(mdp, sid) for sid in g.state_ids}


def solve_determined(g: Game, threads: int | None = None) -> CurveMap:
    """V_s = pointwise minimum over all minimizer strategies of the exact
    per-strategy curve at s.  Exact; equals the true Pareto curves whenever
    the game is determined."""
    require_valid(g)
    report = check_stopping(g)
    if not report.stopping:
        raise NotStopping(
            "strategy enumeration requires a stopping game",
            witness=tuple(sorted(report.witness_closed_set)),
        )
    strategies = list(enumerate_md_strategies(g))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_strategy = list(
                pool.map(lambda sig: _strategy_curves(g, sig), strategies)
            )
    else:
        per_strategy = [_strategy_curves(g, sig) for sig in strategies]

    def fold(acc: Mapping[str, Frontier], nxt: Mapping[str, Frontier]) -> CurveMap:
        return {sid: intersect_min(acc[sid], nxt[sid]) for sid in acc}

    return dict(reduce(fold, per_strategy))


def check_determinacy(
    g: Game, threads: int | None = None
) -> tuple[bool, CurveMap]:
    """Compute V by strategy enumeration and test it against the curve
    equations: in a stopping game their solution is unique, so a fixpoint
    certifies V as the Pareto-curve family and a failure certifies that the
    game is not determined.  Returns (verdict, V) either way."""
    curves = solve_determined(g, threads=threads)
    return check_fixpoint(g, curves), curves

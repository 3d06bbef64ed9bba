"""Seeded random instance generators shared across the test suite.

Every generator is a deterministic function of its seed, so a failing case
reproduces exactly from the test id.  Generators only assemble model
objects; no solver logic lives here.
"""
from __future__ import annotations

import random
from fractions import Fraction as F

from paretogames import (
    BetVertex,
    BettingConfig,
    BettingGame,
    Frontier,
    Game,
    Kind,
    StateRecord,
    attractor,
    canonicalize,
    check_stopping,
    validate_game,
)

# Probability pairs for two-way chance splits: small denominators keep the
# exact arithmetic fast while still exercising non-dyadic values.
PROB_PAIRS = [
    (F(1, 2), F(1, 2)),
    (F(1, 3), F(2, 3)),
    (F(2, 3), F(1, 3)),
    (F(1, 4), F(3, 4)),
    (F(3, 4), F(1, 4)),
]

# 32 directions spanning the closed nonnegative quadrant, axes included.
DIRECTIONS_32 = tuple(
    [(F(1), F(0)), (F(0), F(1))] + [(F(i), F(31 - i)) for i in range(1, 31)]
)


def _random_reward(rng: random.Random, bound: int) -> tuple[F, F]:
    """A reward vector with half-integer entries in [-bound, bound]."""
    return (
        F(rng.randint(-2 * bound, 2 * bound), 2),
        F(rng.randint(-2 * bound, 2 * bound), 2),
    )


def _assemble(rng: random.Random, ids: list[str], kinds: list[Kind],
              bound: int) -> Game:
    terminal_count = rng.randint(1, max(1, len(ids) // 3))
    terminals = set(rng.sample(ids, terminal_count))
    states = []
    for sid in ids:
        if sid in terminals:
            states.append(
                StateRecord(sid, Kind.TERMINAL, (F(0), F(0)), ((sid, F(1)),))
            )
            continue
        kind = rng.choice(kinds)
        reward = _random_reward(rng, bound)
        k = rng.randint(1, 2)
        targets = rng.sample(ids, k)
        if kind is Kind.CHANCE and k == 2:
            pa, pb = rng.choice(PROB_PAIRS)
            trans = ((targets[0], pa), (targets[1], pb))
        else:
            trans = tuple((t, F(1)) for t in targets)
        states.append(StateRecord(sid, kind, reward, trans))
    return Game(ids[0], tuple(states))


def random_stopping_game(seed: int, max_states: int = 6,
                         reward_bound: int = 3) -> Game:
    """A valid stopping two-player game with at most ``max_states`` states
    and rewards in [-reward_bound, reward_bound].  Resamples until both
    the structural check and the stopping check pass."""
    rng = random.Random(seed)
    kinds = [Kind.P1, Kind.P2, Kind.CHANCE]
    while True:
        n = rng.randint(2, max_states)
        ids = [f"s{i}" for i in range(n)]
        g = _assemble(rng, ids, kinds, reward_bound)
        if validate_game(g).ok and check_stopping(g).stopping:
            return g


def random_stopping_mdp(seed: int, max_states: int = 6,
                        reward_bound: int = 3) -> Game:
    """Like random_stopping_game but with no minimizer states, so the game
    is already a one-player stochastic decision process."""
    rng = random.Random(seed)
    kinds = [Kind.P1, Kind.P1, Kind.CHANCE]
    while True:
        n = rng.randint(2, max_states)
        ids = [f"m{i}" for i in range(n)]
        g = _assemble(rng, ids, kinds, reward_bound)
        if validate_game(g).ok and check_stopping(g).stopping:
            return g


def random_game(seed: int, max_states: int = 6,
                reward_bound: int = 3) -> Game:
    """A valid game that need not be stopping."""
    rng = random.Random(seed)
    kinds = [Kind.P1, Kind.P2, Kind.CHANCE]
    while True:
        n = rng.randint(2, max_states)
        ids = [f"s{i}" for i in range(n)]
        g = _assemble(rng, ids, kinds, reward_bound)
        if validate_game(g).ok:
            return g


def random_frontier(rng: random.Random, span: int = 8) -> Frontier:
    """Canonical frontier from 1-5 random points with halves/thirds
    coordinates in [-span, span]."""
    k = rng.randint(1, 5)
    pts = []
    for _ in range(k):
        den = rng.choice([1, 2, 3])
        pts.append(
            (
                F(rng.randint(-span * den, span * den), den),
                F(rng.randint(-span * den, span * den), den),
            )
        )
    return canonicalize(pts)


def random_positive_direction(rng: random.Random) -> tuple[F, F]:
    """A strictly positive rational direction vector."""
    return (
        F(rng.randint(1, 20), rng.randint(1, 5)),
        F(rng.randint(1, 20), rng.randint(1, 5)),
    )


# ---------------------------------------------------------------------------
# Betting arenas

WEIGHT_POOL = [F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(3, 4), F(2, 5), F(3, 5)]


def random_betting_game(
    rng: random.Random, start_credit: F = F(0)
) -> tuple[BettingGame, frozenset[str]]:
    """A betting arena (at most 8 vertices) where the bettor wins the
    underlying reachability game from every vertex, with its target set;
    resamples until the all-winning hypothesis holds."""
    while True:
        n = rng.randint(2, 8)
        ids = [f"v{i}" for i in range(n)]
        vertices = []
        for vid in ids:
            kind = rng.choice(["eve", "adam"])
            t1, t2 = rng.sample(ids, 2)
            w1 = rng.choice(WEIGHT_POOL)
            vertices.append(BetVertex(vid, kind, ((t1, w1), (t2, 1 - w1))))
        k = rng.randint(1, max(1, n // 3))
        targets = frozenset(rng.sample(ids, k))
        bg = BettingGame(
            tuple(vertices),
            BettingConfig(rng.choice(ids), start_credit),
        )
        if attractor(bg, targets).winning == set(ids):
            return bg, targets

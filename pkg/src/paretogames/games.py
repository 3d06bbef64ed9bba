"""Turn-based stochastic game model: representation, validation, stopping
check, normalization, and the discounted-to-total-reward reduction.

A game is a finite directed graph of typed states — Player-1 (maximizer),
Player-2 (minimizer), chance, terminal — with an exact rational reward pair
on every state and exact rational transition probabilities.  Values are
immutable after construction and all operations are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DeltaOutOfRange, InvalidGame, UnknownState
from .frontier import Point, RationalLike, as_fraction, as_point


class Kind(str, Enum):
    P1 = "p1"
    P2 = "p2"
    CHANCE = "chance"
    TERMINAL = "terminal"


CONTROLLED = (Kind.P1, Kind.P2)


@dataclass(frozen=True)
class StateRecord:
    id: str
    kind: Kind
    reward: Point
    transitions: tuple[tuple[str, Fraction], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "reward", as_point(self.reward))
        object.__setattr__(
            self,
            "transitions",
            tuple((str(t), as_fraction(p)) for t, p in self.transitions),
        )

    @property
    def successors(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.transitions)


@dataclass(frozen=True)
class Game:
    initial: str
    states: tuple[StateRecord, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "_by_id", {s.id: s for s in self.states})

    def state(self, sid: str) -> StateRecord:
        try:
            return self._by_id[sid]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownState(f"no state with id {sid!r}") from None

    def has_state(self, sid: str) -> bool:
        return sid in self._by_id  # type: ignore[attr-defined]

    @property
    def state_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.states)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return self.initial == other.initial and self.states == other.states

    def __hash__(self) -> int:
        return hash((self.initial, self.states))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class StoppingReport:
    stopping: bool
    witness_closed_set: frozenset[str] = field(default_factory=frozenset)


# ---------------------------------------------------------------------------
# Validation


def _collect_violations(g: Game, max_successors: int | None = 2) -> list[str]:
    out: list[str] = []
    seen: set[str] = set()
    for s in g.states:
        if not s.id:
            out.append("state with empty id")
        if s.id in seen:
            out.append(f"{s.id}: duplicate state id")
        seen.add(s.id)
    if g.initial not in seen:
        out.append(f"initial state {g.initial!r} does not exist")
    for s in g.states:
        targets = [t for t, _ in s.transitions]
        for t in targets:
            if not g.has_state(t):
                out.append(f"{s.id}: transition to unknown state {t!r}")
        if len(set(targets)) != len(targets):
            out.append(f"{s.id}: duplicate transition targets")
        if s.kind is Kind.TERMINAL:
            if s.reward != (0, 0):
                out.append(f"{s.id}: terminal reward nonzero")
            if s.transitions != ((s.id, Fraction(1)),):
                out.append(
                    f"{s.id}: terminal must have a single self-transition "
                    f"with probability 1"
                )
            continue
        if not targets:
            out.append(f"{s.id}: non-terminal state with no successor")
            continue
        if max_successors is not None and len(targets) > max_successors:
            out.append(
                f"{s.id}: more than {max_successors} successors "
                f"({len(targets)})"
            )
        if s.kind in CONTROLLED:
            for t, p in s.transitions:
                if p != 1:
                    out.append(
                        f"{s.id}: controlled transition to {t} has "
                        f"probability {p} != 1"
                    )
        else:  # chance
            probs = [p for _, p in s.transitions]
            if any(p <= 0 for p in probs):
                out.append(f"{s.id}: non-positive transition probability")
            if sum(probs) != 1:
                out.append(f"{s.id}: probabilities sum != 1")
    return out


def validate_game(g: Game) -> ValidationReport:
    """Structural validation; report-valued, never raises."""
    violations = tuple(_collect_violations(g))
    return ValidationReport(ok=not violations, violations=violations)


def require_valid(g: Game, max_successors: int | None = 2) -> None:
    """Raise InvalidGame when g violates the structural invariants."""
    violations = tuple(_collect_violations(g, max_successors))
    if violations:
        raise InvalidGame(
            "invalid game: " + "; ".join(violations), violations=violations
        )


# ---------------------------------------------------------------------------
# Stopping check


def check_stopping(g: Game) -> StoppingReport:
    """Largest closed set of non-terminal states, by iterated removal.

    A state is deleted when it can no longer sustain an infinite play inside
    the candidate set: a controlled state with no remaining successor, or a
    chance state with a deleted-or-terminal successor (chance leaves the set
    with positive probability).  The game is stopping iff nothing survives —
    both players cooperating cannot avoid the terminals.
    """
    require_valid(g)
    alive: set[str] = {s.id for s in g.states if s.kind is not Kind.TERMINAL}
    changed = True
    while changed:
        changed = False
        for sid in sorted(alive):
            s = g.state(sid)
            if s.kind in CONTROLLED:
                keep = any(t in alive for t in s.successors)
            else:  # chance
                keep = all(t in alive for t in s.successors)
            if not keep:
                alive.discard(sid)
                changed = True
    return StoppingReport(stopping=not alive, witness_closed_set=frozenset(alive))


# ---------------------------------------------------------------------------
# Normalization


def _fresh_id(base: str, taken: set[str]) -> str:
    cand = base
    n = 1
    while cand in taken:
        n += 1
        cand = f"{base}{n}"
    taken.add(cand)
    return cand


def _binary_split(g: Game) -> Game:
    """Split every >2-successor state into a chain of 2-successor states."""
    taken = set(g.state_ids)
    out: list[StateRecord] = []
    for s in g.states:
        if s.kind is Kind.TERMINAL or len(s.transitions) <= 2:
            out.append(s)
            continue
        # Chain: s keeps its first edge and defers the rest to fresh
        # same-kind helper states with reward (0,0); for chance states the
        # deferred probabilities are renormalized conditionals.
        rest = list(s.transitions)
        head_id = s.id
        reward = s.reward
        while len(rest) > 2:
            (t0, p0), tail = rest[0], rest[1:]
            helper = _fresh_id(f"{s.id}__split", taken)
            if s.kind is Kind.CHANCE:
                remaining = sum(p for _, p in tail)
                out.append(
                    StateRecord(
                        head_id,
                        s.kind,
                        reward,
                        ((t0, p0), (helper, remaining)),
                    )
                )
                rest = [(t, p / remaining) for t, p in tail]
            else:
                out.append(
                    StateRecord(
                        head_id,
                        s.kind,
                        reward,
                        ((t0, Fraction(1)), (helper, Fraction(1))),
                    )
                )
                rest = tail
            head_id = helper
            reward = (Fraction(0), Fraction(0))
        out.append(StateRecord(head_id, s.kind, reward, tuple(rest)))
    return Game(g.initial, tuple(out))


def normalize(g: Game) -> Game:
    """Equivalent game with <=2 successors everywhere and rewards only on
    Player-2 states.

    Nonzero rewards are moved onto a fresh single-successor Player-2 state
    through which every incoming edge of the original carrier is rerouted;
    when the carrier is the initial state the fresh state becomes initial, so
    its curve equals the original carrier's.  Total reward along every path
    is preserved.
    """
    require_valid(g, max_successors=None)
    g = _binary_split(g)
    taken = set(g.state_ids)
    # one relocation state per nonzero-reward carrier
    needs_move = [
        s for s in g.states if s.reward != (0, 0) and s.kind is not Kind.P2
    ]
    if not needs_move:
        require_valid(g)
        return g
    entry_for = {s.id: _fresh_id(f"{s.id}__in", taken) for s in needs_move}
    out: list[StateRecord] = []
    for s in g.states:
        transitions = tuple(
            (entry_for.get(t, t), p) for t, p in s.transitions
        )
        if s.kind is Kind.TERMINAL:
            transitions = s.transitions  # self-loop stays put
        reward = (Fraction(0), Fraction(0)) if s.id in entry_for else s.reward
        out.append(StateRecord(s.id, s.kind, reward, transitions))
    for s in needs_move:
        out.append(
            StateRecord(
                entry_for[s.id], Kind.P2, s.reward, ((s.id, Fraction(1)),)
            )
        )
    initial = entry_for.get(g.initial, g.initial)
    result = Game(initial, tuple(out))
    require_valid(result)
    return result


# ---------------------------------------------------------------------------
# Discounted -> total reduction


def discount_transform(g: Game, delta: RationalLike) -> Game:
    """Reroute every edge into a non-terminal target through a fresh chance
    state that stops with probability 1-delta, so that total reward in the
    result equals delta-discounted reward in the input.  The initial state is
    entered directly (step 0 is undiscounted)."""
    require_valid(g)
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise DeltaOutOfRange(f"delta must be in (0,1), got {delta}")
    non_terminal_targets = sorted(
        {
            t
            for s in g.states
            if s.kind is not Kind.TERMINAL
            for t in s.successors
            if g.state(t).kind is not Kind.TERMINAL
        }
    )
    if not non_terminal_targets:
        return g
    taken = set(g.state_ids)
    sink = _fresh_id("__sink", taken)
    gate_for = {t: _fresh_id(f"{t}__disc", taken) for t in non_terminal_targets}
    out: list[StateRecord] = []
    for s in g.states:
        if s.kind is Kind.TERMINAL:
            out.append(s)
            continue
        transitions = tuple((gate_for.get(t, t), p) for t, p in s.transitions)
        out.append(StateRecord(s.id, s.kind, s.reward, transitions))
    for t, gate in gate_for.items():
        out.append(
            StateRecord(
                gate,
                Kind.CHANCE,
                (Fraction(0), Fraction(0)),
                ((sink, 1 - delta), (t, delta)),
            )
        )
    out.append(
        StateRecord(
            sink, Kind.TERMINAL, (Fraction(0), Fraction(0)), ((sink, Fraction(1)),)
        )
    )
    result = Game(g.initial, tuple(out))
    require_valid(result)
    return result


# ---------------------------------------------------------------------------
# JSON serialization


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def game_to_json(g: Game) -> dict:
    states = []
    for s in g.states:
        rec: dict = {
            "id": s.id,
            "kind": s.kind.value,
            "reward": [_frac_str(s.reward[0]), _frac_str(s.reward[1])],
        }
        if s.kind is Kind.CHANCE:
            rec["transitions"] = [
                {"to": t, "prob": _frac_str(p)} for t, p in s.transitions
            ]
        else:
            rec["transitions"] = [{"to": t} for t, _ in s.transitions]
        states.append(rec)
    return {"initial": g.initial, "states": states}


def game_from_json(data: Mapping) -> Game:
    try:
        states = []
        for rec in data["states"]:
            transitions = tuple(
                (edge["to"], as_fraction(edge.get("prob", 1)))
                for edge in rec.get("transitions", ())
            )
            states.append(
                StateRecord(
                    id=rec["id"],
                    kind=Kind(rec["kind"]),
                    reward=as_point(rec["reward"]),
                    transitions=transitions,
                )
            )
        return Game(initial=data["initial"], states=tuple(states))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidGame(f"malformed game description: {exc}") from exc


def load_game(path) -> Game:
    with open(path, "r", encoding="utf-8") as fh:
        return game_from_json(json.load(fh))


def save_game(g: Game, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(game_to_json(g), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Fixtures


def fixture_game(name: str) -> Game:
    """Load one of the bundled example games ("heating", "fig3")."""
    from importlib.resources import files

    res = files("paretogames.fixtures").joinpath(f"{name}.json")
    return game_from_json(json.loads(res.read_text(encoding="utf-8")))


def make_game(
    initial: str,
    states: Iterable[
        tuple[str, str, Sequence[RationalLike], Sequence[tuple[str, RationalLike]]]
    ],
) -> Game:
    """Compact constructor: (id, kind, reward, [(target, prob), ...])."""
    recs = tuple(
        StateRecord(
            sid,
            Kind(kind),
            as_point(reward),
            tuple((t, as_fraction(p)) for t, p in transitions),
        )
        for sid, kind, reward, transitions in states
    )
    return Game(initial, recs)

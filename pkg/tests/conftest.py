"""Shared fixtures: the two bundled example games and their exact curve
families, plus commonly reused helpers."""
from __future__ import annotations

from fractions import Fraction as F

import pytest

from paretogames import Frontier, fixture_game, value_iterate

# Exact fixpoint family of the bundled heating game, computed by hand from
# the curve equations (each entry is the canonical vertex list).
HEATING_EXACT: dict[str, list[tuple[F, F]]] = {
    "HH1": [(F(0), F(0))],
    "D1": [(F(-1), F(0))],
    "HC1": [(F(-1), F(0)), (F(0), F(-1))],
    "HC2": [(F(-1), F(-1)), (F(0), F(-2))],
    "HC3": [(F(-1, 2), F(0)), (F(0), F(-1, 2))],
    "HCS3": [(F(-1, 2), F(-1, 2)), (F(0), F(-1))],
    "CC1": [(F(-2), F(-1)), (F(-1), F(-2))],
    "CH1": [(F(-1), F(0)), (F(-1, 3), F(-4, 3))],
    "CH2": [(F(-3, 2), F(-3, 2)), (F(-1), F(-2)), (F(-2, 3), F(-8, 3))],
    "CH3": [(F(-3, 2), F(-1, 2)), (F(-1), F(-1)), (F(-2, 3), F(-5, 3))],
    "CHS3": [(F(-3, 4), F(-3, 4)), (F(-1, 2), F(-1)), (F(-1, 3), F(-4, 3))],
}

# Exact fixpoint family of the bundled six-state pathology game.
FIG3_EXACT: dict[str, list[tuple[F, F]]] = {
    "s0": [(F(0), F(1)), (F(1), F(0))],
    "s1": [(F(1, 2), F(1, 2)), (F(1), F(0))],
    "s2": [(F(0), F(1)), (F(9, 10), F(1, 10))],
    "s3": [(F(1), F(0))],
    "s4": [(F(0), F(1))],
    "s5": [(F(0), F(0))],
}


def frontier_of(points: list[tuple[F, F]]) -> Frontier:
    return Frontier(tuple(points))


@pytest.fixture(scope="session")
def heating():
    return fixture_game("heating")


@pytest.fixture(scope="session")
def fig3():
    return fixture_game("fig3")


@pytest.fixture(scope="session")
def fig3_vi(fig3):
    """The long tail-bound-terminated run at epsilon 1/1000 (429 sweeps,
    ~45 s); computed once and shared."""
    return value_iterate(fig3, F(1, 1000), 10000, keep_history=False)

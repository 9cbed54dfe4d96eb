import random
from fractions import Fraction

import pytest

from querypower import (RescalingRow, SimpleGame, TUGame, builtin_family,
                        enumerate_monotone_tables)


@pytest.fixture(scope="session")
def uniform():
    return builtin_family("uniform")


@pytest.fixture(scope="session")
def coleman():
    return builtin_family("coleman")


@pytest.fixture(scope="session")
def shapley_family():
    return builtin_family("shapley")


@pytest.fixture(scope="session")
def battery():
    """Fixed simulation battery: dictator, straight majority, the two-pivotal-
    voter game, and grand-coalition unanimity."""
    return {
        "dictator": SimpleGame.dictator(4, 0),
        "majority5": SimpleGame.from_minimal_winning(
            5, [[i, j, k] for i in range(5) for j in range(i + 1, 5)
                for k in range(j + 1, 5)]),
        "two_pivotal": SimpleGame.from_minimal_winning(4, [[2], [3]]),
        "unanimity": SimpleGame.unanimity(4, [0, 1, 2, 3]),
    }


@pytest.fixture(scope="session")
def monotone_catalog():
    """Standard-model monotone games (as winning tables) for small n."""
    catalog = {}
    for n in range(1, 6):
        catalog[n] = [t for t in enumerate_monotone_tables(n) if not t & 1]
    return catalog


def random_tu(rng: random.Random, n: int, denominator: int = 6,
              span: int = 30, model: str = "standard") -> TUGame:
    values = [Fraction(rng.randint(-span, span), denominator)
              for _ in range(1 << n)]
    if model == "standard":
        values[0] = Fraction(0)
    return TUGame(values, model=model)


def random_self_dual_tu(rng: random.Random, n: int,
                        denominator: int = 6, span: int = 30) -> TUGame:
    """Pick v freely on one member of each complement pair; mirror the other."""
    full = (1 << n) - 1
    values = [None] * (1 << n)
    grand = Fraction(rng.randint(-span, span), denominator)
    values[0], values[full] = Fraction(0), grand
    for m in range(1 << n):
        if values[m] is None:
            values[m] = Fraction(rng.randint(-span, span), denominator)
            values[full ^ m] = grand - values[m]
    return TUGame(values)


def random_explicit_game(rng: random.Random, n: int, p: float = 0.4,
                         model: str = "standard") -> SimpleGame:
    """Possibly nonmonotone game: each coalition wins independently."""
    lo = 1 if model == "standard" else 0
    winning = [m for m in range(lo, 1 << n) if rng.random() < p]
    if not winning:
        return SimpleGame.empty(n, model=model)
    return SimpleGame.from_explicit(n, winning, model=model)


def random_row(rng: random.Random, n: int, denominator: int = 24) -> RescalingRow:
    weights = [rng.randint(0, 9) for _ in range(n + 1)]
    if sum(weights) == 0:
        weights[rng.randrange(n + 1)] = 1
    total = sum(weights)
    return RescalingRow(n, [Fraction(w, total) for w in weights])

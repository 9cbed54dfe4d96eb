"""Coalitional manipulability of 3-candidate positional scoring elections.

Voters submit strict orders over candidates a, b, c; a rule awards 1, alpha,
0 points by rank and elects the top scorer, breaking ties uniformly at
random.  A coalition manipulates if some joint insincere vote produces an
outcome lottery that every member strictly prefers to the sincere one, where
"strictly prefers" is first-order stochastic dominance with respect to the
member's true ranking (and a different lottery).  The induced simple game
declares a voter set winning iff it contains a manipulating coalition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import CapacityError, FormatError, GameError
from .games import Coalition, SimpleGame, coalition, enumeration_limit, members

CANDIDATES = ("a", "b", "c")
ORDERS = ("abc", "acb", "bac", "bca", "cab", "cba")

#: brute force explores 6**|coalition| joint deviations
DEFAULT_MAX_COALITION = 8


@dataclass(frozen=True)
class ScoringRule:
    """Positional scores 1, alpha, 0 for first, second, third rank."""

    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if not 0 <= self.alpha <= 1:
            raise GameError(f"alpha must lie in [0, 1], got {self.alpha}")

    def points(self, rank: int) -> Fraction:
        return (Fraction(1), self.alpha, Fraction(0))[rank]


@dataclass(frozen=True)
class OutcomeLottery:
    """Uniform lottery over the set of top-scoring candidates."""

    support: frozenset[str]

    def __post_init__(self):
        if not self.support or not self.support <= set(CANDIDATES):
            raise GameError(f"invalid lottery support {set(self.support)!r}")

    def probability(self, candidate: str) -> Fraction:
        if candidate in self.support:
            return Fraction(1, len(self.support))
        return Fraction(0)


def parse_profile(text: Union[str, Sequence[str]]) -> tuple[str, ...]:
    """Comma-separated strict orders, e.g. ``"abc,abc,bac,cba"``."""
    parts = text.split(",") if isinstance(text, str) else list(text)
    orders = tuple(p.strip() for p in parts)
    for o in orders:
        if o not in ORDERS:
            raise FormatError(f"invalid preference order {o!r}; expected one of {ORDERS}")
    if not 1 <= len(orders) <= enumeration_limit():
        raise FormatError(f"profiles support 1..{enumeration_limit()} voters")
    return orders


def scores(profile: Sequence[str], rule: ScoringRule) -> dict[str, Fraction]:
    totals = {c: Fraction(0) for c in CANDIDATES}
    for order in profile:
        for rank, c in enumerate(order):
            totals[c] += rule.points(rank)
    return totals


def _winners(totals: dict[str, Fraction]) -> OutcomeLottery:
    best = max(totals.values())
    return OutcomeLottery(frozenset(c for c, s in totals.items() if s == best))


def sincere_outcome(profile: Sequence[str], rule: ScoringRule) -> OutcomeLottery:
    """Uniform lottery over the argmax of the sincere scores."""
    return _winners(scores(profile, rule))


def prefers(ranking: str, challenger: OutcomeLottery, incumbent: OutcomeLottery) -> bool:
    """Strict preference of a voter with the given true ranking.

    True iff the challenger lottery first-order stochastically dominates the
    incumbent with respect to the ranking and the two lotteries differ: for
    every prefix of the ranking, the challenger puts at least as much
    probability on it.
    """
    if ranking not in ORDERS:
        raise GameError(f"invalid ranking {ranking!r}")
    if challenger.support == incumbent.support:
        return False
    for t in (1, 2):
        prefix = set(ranking[:t])
        p_new = sum((challenger.probability(c) for c in prefix), Fraction(0))
        p_old = sum((incumbent.probability(c) for c in prefix), Fraction(0))
        if p_new < p_old:
            return False
    return True


def can_manipulate(profile: Sequence[str], rule: ScoringRule,
                   manipulators: Union[Coalition, Iterable[int]],
                   max_coalition: int = DEFAULT_MAX_COALITION) -> bool:
    """Can some joint insincere vote of the given voters (others sincere)
    produce an outcome every one of them strictly prefers?"""
    mask = manipulators if isinstance(manipulators, int) else coalition(manipulators)
    voters = members(mask)
    if not voters:
        raise GameError("the manipulating coalition must be nonempty")
    if voters[-1] >= len(profile):
        raise GameError(f"voter {voters[-1]} not in a {len(profile)}-voter profile")
    if len(voters) > max_coalition:
        raise CapacityError(
            f"brute force over 6**{len(voters)} deviations exceeds the "
            f"cap (max_coalition={max_coalition})")

    base = scores(profile, rule)
    sincere = _winners(base)
    # subtract the coalition's sincere ballots once; add deviations per case
    partial = dict(base)
    for v in voters:
        for rank, c in enumerate(profile[v]):
            partial[c] -= rule.points(rank)

    for deviation in itertools.product(ORDERS, repeat=len(voters)):
        totals = dict(partial)
        for order in deviation:
            for rank, c in enumerate(order):
                totals[c] += rule.points(rank)
        outcome = _winners(totals)
        if all(prefers(profile[v], outcome, sincere) for v in voters):
            return True
    return False


def build_manipulation_game(profile: Sequence[str], rule: ScoringRule,
                            max_coalition: int = DEFAULT_MAX_COALITION) -> SimpleGame:
    """Simple game on the voters: a set wins iff it contains a manipulating
    coalition.  Monotone by construction; empty when nobody can manipulate.

    Subsets are explored by size with superset pruning, so only inclusion-
    minimal manipulating coalitions are brute-forced.
    """
    n = len(profile)
    if n > max_coalition:
        raise CapacityError(
            f"building the game needs deviation searches for coalitions up to "
            f"size {n} (max_coalition={max_coalition})")
    minimal: list[int] = []
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            mask = coalition(combo)
            if any(mask & m == m for m in minimal):
                continue
            if can_manipulate(profile, rule, mask, max_coalition=max_coalition):
                minimal.append(mask)
    if not minimal:
        return SimpleGame.empty(n)
    return SimpleGame.from_minimal_winning(n, minimal)

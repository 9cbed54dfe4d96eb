"""Independent brute-force oracles used to freeze expected values.

These deliberately avoid the library's bitmask/numpy paths: they work with
frozensets and itertools enumeration, driven only by a game's raw winning
predicate (or a plain value function), so they cross-check the closed forms
through a genuinely different route.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial


def subsets(n, size=None):
    players = range(n)
    if size is not None:
        yield from (frozenset(c) for c in itertools.combinations(players, size))
        return
    for k in range(n + 1):
        yield from (frozenset(c) for c in itertools.combinations(players, k))


def profile_by_subsets(n, wins):
    """Per-size winning counts from a set-valued predicate ``wins(frozenset)``."""
    return tuple(sum(1 for s in subsets(n, k) if wins(s)) for k in range(n + 1))


def minimal_winning_wins(minimal_sets):
    """Predicate: contains one of the given minimal coalitions (as iterables)."""
    mins = [frozenset(m) for m in minimal_sets]

    def wins(s: frozenset) -> bool:
        return any(m <= s for m in mins)

    return wins


def game_wins(game):
    """Set-valued adapter over a SimpleGame's raw predicate."""
    def wins(s: frozenset) -> bool:
        mask = 0
        for i in s:
            mask |= 1 << i
        return game.is_winning(mask)
    return wins


def coleman_by_subsets(n, wins) -> Fraction:
    """Share of all 2**n coalitions that win."""
    profile = profile_by_subsets(n, wins)
    return Fraction(sum(profile), 2**n)


def uniform_decisiveness_by_subsets(n, wins) -> Fraction:
    """(1/(n+1)) * sum_k |W_k| / C(n, k)."""
    profile = profile_by_subsets(n, wins)
    return sum(Fraction(w, comb(n, k)) for k, w in enumerate(profile)) / (n + 1)


def shapley_by_permutations(n, value) -> dict[int, Fraction]:
    """Average marginal contribution along all n! arrival orders.

    ``value`` maps a frozenset of players to an exact worth.
    """
    totals = {i: Fraction(0) for i in range(n)}
    for order in itertools.permutations(range(n)):
        prev = value(frozenset())
        seen = set()
        for player in order:
            seen.add(player)
            cur = value(frozenset(seen))
            totals[player] += cur - prev
            prev = cur
    f = factorial(n)
    return {i: t / f for i, t in totals.items()}


def shapley_shubik_by_pivots(n, wins) -> dict[int, Fraction]:
    """Pivot frequencies over all n! orders of a monotone simple game."""
    counts = {i: 0 for i in range(n)}
    for order in itertools.permutations(range(n)):
        seen = set()
        for player in order:
            seen.add(player)
            if wins(frozenset(seen)):
                counts[player] += 1
                break
    f = factorial(n)
    return {i: Fraction(c, f) for i, c in counts.items()}


def stop_counts_by_permutations(n, contains_winning) -> dict[int, int]:
    """Stop-time counts of the query process over all n! orders.

    ``contains_winning`` is the closure predicate on frozensets; stop time
    n+1 when no prefix ever contains a winning coalition, 0 when the empty
    set already does.
    """
    counts: dict[int, int] = {}
    if contains_winning(frozenset()):
        counts[0] = factorial(n)
        return counts
    for order in itertools.permutations(range(n)):
        seen = set()
        stop = n + 1
        for at, player in enumerate(order, start=1):
            seen.add(player)
            if contains_winning(frozenset(seen)):
                stop = at
                break
        counts[stop] = counts.get(stop, 0) + 1
    return counts


def banzhaf_by_subsets(n, value) -> dict[int, Fraction]:
    """Per-player total marginal contribution / 2**(n-1)."""
    totals = {i: Fraction(0) for i in range(n)}
    for s in subsets(n):
        for i in s:
            totals[i] += value(s) - value(s - {i})
    return {i: t / 2**(n - 1) for i, t in totals.items()}

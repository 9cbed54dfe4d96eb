"""Closed-form collective and individual power measures, all exact.

Collective side: the expected number of random queries needed to reveal a
winning coalition, and its size-rescaled cousin, the decisiveness index
(the probability that a coalition sampled by "pick a size from mu, then a
uniform coalition of that size" is winning).

Individual side: weighted semivalues (per-player expected marginal
contribution under the same sampling), their normalized semivalues, and the
classic Shapley and Banzhaf values as independently-coded cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, NormalizationUndefined, RescalingError
from .games import (Classification, Game, SimpleGame, TUGame, popcounts,
                    _check_coalition)
from .rescaling import RescalingFamily, RescalingRow

Allocation = dict[int, Fraction]


def _row_for(game: Game, source: Union[RescalingRow, RescalingFamily]) -> RescalingRow:
    if isinstance(source, RescalingFamily):
        return source.row(game.n)
    if source.n != game.n:
        raise DimensionMismatch(
            f"rescaling row is for n={source.n}, game has n={game.n}")
    return source


def expected_query_count(game: SimpleGame) -> Fraction:
    """Mean number of players revealed, in uniformly random order, until the
    revealed set contains a winning coalition; n+1 when the game is empty.

    Nonmonotone games are evaluated through their monotone closure, matching
    the query process ("contains", not "is").
    """
    if not isinstance(game, SimpleGame):
        raise DimensionMismatch("expected_query_count needs a simple game")
    n = game.n
    profile = game.closure_profile()
    seen = sum(Fraction(w, math.comb(n, k)) for k, w in enumerate(profile))
    return Fraction(n + 1) - seen


def decisiveness(game: Game, rescaling: Union[RescalingRow, RescalingFamily]) -> Fraction:
    """Collective value sum_k f[k] * (total worth of size-k coalitions).

    For a simple game this is sum_k f[k] * |W_k|, the probability of drawing
    a winning coalition under the row's size-biased sampling.  Uses the raw
    predicate (no closure); extended-model games contribute their k=0 term.
    """
    row = _row_for(game, rescaling)
    if isinstance(game, SimpleGame):
        sums: Sequence = game.size_profile()
    else:
        sums = game.per_size_sums()
    return sum((f * s for f, s in zip(row.f, sums) if s), Fraction(0))


def _marginal_sums(game: Game) -> list[list[Fraction]]:
    """For each player i, the per-size sums of v(S) - v(S \\ {i}) over S containing i."""
    n = game.n
    if isinstance(game, SimpleGame):
        table = game.win_table().astype(np.int8)
        pc = popcounts(n)
        masks = np.arange(1 << n, dtype=np.int64)
        out = []
        for i in range(n):
            with_i = masks[(masks >> i) & 1 == 1]
            diff = table[with_i] - table[with_i ^ (1 << i)]
            sizes = pc[with_i]
            plus = np.bincount(sizes[diff > 0], minlength=n + 1)
            minus = np.bincount(sizes[diff < 0], minlength=n + 1)
            out.append([Fraction(int(p) - int(m)) for p, m in zip(plus, minus)])
        return out
    sums = [[Fraction(0)] * (n + 1) for _ in range(n)]
    for m, v in enumerate(game.values):
        for i in range(n):
            if m >> i & 1:
                d = v - game.values[m ^ (1 << i)]
                if d:
                    sums[i][m.bit_count()] += d
    return sums


def weighted_semivalue(game: Game, rescaling: Union[RescalingRow, RescalingFamily]) -> Allocation:
    """Per-player sum over coalitions containing them of f[|S|] * (v(S) - v(S\\{i}))."""
    row = _row_for(game, rescaling)
    f = row.f
    return {
        i: sum((f[k] * s for k, s in enumerate(sums) if s), Fraction(0))
        for i, sums in enumerate(_marginal_sums(game))
    }


def potential_difference(game: Game, family: RescalingFamily, i: int) -> Fraction:
    """Drop in collective decisiveness when player i is deleted.

    Computed with the family's rows at n and n-1.  Coincides with the
    player's weighted semivalue exactly when the family's weights satisfy
    the standard cross-n recursion (uniform and coleman do).
    """
    if not isinstance(family, RescalingFamily):
        raise RescalingError("potential_difference needs a family (rows at n and n-1)")
    whole = decisiveness(game, family.row(game.n))
    rest = decisiveness(game.restrict(i), family.row(game.n - 1))
    return whole - rest


def semivalue(game: Game, rescaling: Union[RescalingRow, RescalingFamily]) -> Allocation:
    """Weighted semivalue normalized by the row's c_norm.

    Raises :class:`NormalizationUndefined` for the degenerate row whose mass
    sits entirely on size 0 (c_norm = 0).
    """
    row = _row_for(game, rescaling)
    c = row.c_norm()
    if c == 0:
        raise NormalizationUndefined(
            "row has all its mass on size 0; the semivalue normalization is undefined")
    return {i: v / c for i, v in weighted_semivalue(game, row).items()}


def shapley(game: Game) -> Allocation:
    """Classic Shapley value via the factorial-weight formula, coded directly
    (its own enumeration; not routed through the rescaling machinery)."""
    n = game.n
    fact = [math.factorial(k) for k in range(n + 1)]
    weight = [Fraction(0)] + [Fraction(fact[k - 1] * fact[n - k], fact[n])
                              for k in range(1, n + 1)]
    if isinstance(game, SimpleGame):
        values: Sequence = [1 if w else 0 for w in game.win_table()]
    else:
        values = game.values
    out = {i: Fraction(0) for i in range(n)}
    for m in range(1, 1 << n):
        v = values[m]
        k = m.bit_count()
        rest = m
        while rest:
            b = rest & -rest
            rest ^= b
            d = v - values[m ^ b]
            if d:
                out[b.bit_length() - 1] += weight[k] * d
    return out


def banzhaf(game: Game) -> Allocation:
    """Per-player sum of marginal contributions over all coalitions containing
    them, divided by 2**(n-1).  For simple games: swing count / 2**(n-1)."""
    n = game.n
    if isinstance(game, SimpleGame):
        values: Sequence = [1 if w else 0 for w in game.win_table()]
    else:
        values = game.values
    denom = 1 << (n - 1)
    totals = [Fraction(0)] * n
    for m in range(1, 1 << n):
        v = values[m]
        rest = m
        while rest:
            b = rest & -rest
            rest ^= b
            d = v - values[m ^ b]
            if d:
                totals[b.bit_length() - 1] += d
    return {i: t / denom for i, t in enumerate(totals)}


class Contribution(NamedTuple):
    ex_ante: Fraction
    ex_interim: Fraction


def coalition_formation(game: Game, distribution: Mapping[int, Fraction],
                        i: int) -> Contribution:
    """Expected marginal contribution of player i when one coalition forms.

    ``distribution`` maps coalition bitmasks to formation probabilities.
    ``ex_ante`` is the unconditional expectation of v(S) - v(S \\ {i}) over
    coalitions containing i; ``ex_interim`` conditions on membership.
    """
    n = game.n
    total = sum(distribution.values())
    if total != 1 or any(p < 0 for p in distribution.values()):
        raise ValueError("coalition distribution must be a probability measure")
    bit = 1 << i
    ex_ante = Fraction(0)
    prob_member = Fraction(0)
    for S, p in distribution.items():
        _check_coalition(S, n)
        if p and S & bit:
            prob_member += p
            ex_ante += p * game.marginal(S, i)
    if prob_member == 0:
        raise NormalizationUndefined(
            f"player {i} belongs to no coalition with positive probability")
    return Contribution(ex_ante, ex_ante / prob_member)


def size_weight_distribution(row: RescalingRow) -> dict[int, Fraction]:
    """The coalition distribution p(S) = f[|S|] induced by a row (sums to 1)."""
    n = row.n
    f = row.f
    return {m: f[m.bit_count()] for m in range(1 << n)}


MEASURE_TOKENS = ("qbar", "qstar", "individual", "semivalue", "shapley",
                  "banzhaf", "classification")


@dataclass
class MeasureReport:
    """Bundle of requested measures for one game (None = not requested)."""

    n: int
    qbar: Fraction | None = None
    qstar: Fraction | None = None
    individual: Allocation | None = None
    semivalue: Allocation | None = None
    shapley: Allocation | None = None
    banzhaf: Allocation | None = None
    classification: Classification | None = None


def compute_report(game: Game,
                   rescaling: Union[RescalingRow, RescalingFamily, None],
                   measures: Sequence[str] = MEASURE_TOKENS) -> MeasureReport:
    report = MeasureReport(n=game.n)
    for token in measures:
        if token not in MEASURE_TOKENS:
            raise ValueError(f"unknown measure {token!r}; expected {MEASURE_TOKENS}")
        if token in ("qstar", "individual", "semivalue") and rescaling is None:
            raise RescalingError(f"measure {token!r} needs a rescaling row or family")
        if token == "qbar":
            report.qbar = expected_query_count(game)
        elif token == "qstar":
            report.qstar = decisiveness(game, rescaling)
        elif token == "individual":
            report.individual = weighted_semivalue(game, rescaling)
        elif token == "semivalue":
            report.semivalue = semivalue(game, rescaling)
        elif token == "shapley":
            report.shapley = shapley(game)
        elif token == "banzhaf":
            report.banzhaf = banzhaf(game)
        elif token == "classification":
            if not isinstance(game, SimpleGame):
                raise DimensionMismatch("classification needs a simple game")
            report.classification = game.classify()
    return report

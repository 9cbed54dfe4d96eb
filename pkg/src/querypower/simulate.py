"""Random query process: exact law, Monte Carlo engines, proposer bargaining.

The query process reveals players one by one in uniformly random order and
stops as soon as the revealed set contains a winning coalition.  The exact
law of the stop time follows from per-size counts of coalitions containing a
winning one; the Monte Carlo engines here are the empirical counterweight.

Reproducibility contract: results are a pure function of (seed, trials) and
do not depend on the worker count.  Trials are partitioned into fixed-size
blocks; block b draws from a counter-based generator keyed by (seed, b), and
aggregation adds exact integer tallies, which commutes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import AllZeroError, DimensionMismatch, GameError, NormalizationUndefined
from .games import SimpleGame
from .rescaling import RescalingFamily, RescalingRow

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo run parameters.

    ``workers`` only changes how blocks are dispatched, never the result.
    ``max_rounds`` caps proposer-rejection rounds per bargaining trial.
    """

    trials: int
    seed: int
    workers: int = 1
    block_size: int = 1 << 14
    max_rounds: int = 10_000

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.block_size < 1 or self.max_rounds < 1 or self.workers < 1:
            raise ValueError("block_size, max_rounds and workers must be >= 1")


@dataclass(frozen=True)
class QueryOutcome:
    """Stop time (1..n+1; 0 when the empty coalition already wins) and the
    player whose arrival completed a winning coalition, if any."""

    stop_time: int
    pivot: int | None


def _block_rng(seed: int, block_index: int) -> np.random.Generator:
    key = np.array([seed & _MASK64, block_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _blocks(cfg: SimConfig):
    start = 0
    index = 0
    while start < cfg.trials:
        size = min(cfg.block_size, cfg.trials - start)
        yield index, size
        start += size
        index += 1


def _sum_blocks(fn: Callable[[int, int], np.ndarray], cfg: SimConfig) -> np.ndarray:
    jobs = list(_blocks(cfg))
    if cfg.workers == 1:
        parts = [fn(bi, size) for bi, size in jobs]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda job: fn(*job), jobs))
    total = parts[0].copy()
    for p in parts[1:]:
        total += p
    return total


def _random_permutations(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    # argsort of iid uniforms is a uniformly random permutation per row
    return np.argsort(rng.random((size, n)), axis=1)


def _prefix_masks(perm: np.ndarray) -> np.ndarray:
    size, n = perm.shape
    out = np.empty((size, n), dtype=np.int64)
    mask = np.zeros(size, dtype=np.int64)
    for c in range(n):
        mask = mask | (np.int64(1) << perm[:, c])
        out[:, c] = mask
    return out


def run_query(game: SimpleGame, order: Sequence[int]) -> QueryOutcome:
    """Deterministic query run for one ordering of the players.

    The stop time is the least k such that the first k players of ``order``
    contain a winning coalition ("contain": nonmonotone games are read
    through their monotone closure); n+1 with no pivot if none ever does.
    In the extended model a game where the empty coalition wins stops at 0.
    """
    n = game.n
    if sorted(order) != list(range(n)):
        raise GameError(f"order must be a permutation of 0..{n - 1}")
    if game.model == "extended" and game.is_winning(0):
        return QueryOutcome(0, None)
    if game.is_monotone():
        contains = game.is_winning  # "is" and "contains" agree
    else:
        closure = game.closure_table()

        def contains(mask: int) -> bool:
            return bool(closure[mask])

    mask = 0
    for k, player in enumerate(order, start=1):
        mask |= 1 << player
        if contains(mask):
            return QueryOutcome(k, player)
    return QueryOutcome(n + 1, None)


def exact_query_cdf(game: SimpleGame) -> tuple[Fraction, ...]:
    """Pr(stop time <= k) for k = 0..n+1, exact.

    Equals the probability that a uniformly random size-k coalition contains
    a winning coalition: closure_profile[k] / C(n, k).
    """
    n = game.n
    profile = game.closure_profile()
    cdf = [Fraction(w, math.comb(n, k)) for k, w in enumerate(profile)]
    cdf.append(Fraction(1))
    return tuple(cdf)


def exact_stop_distribution(game: SimpleGame) -> tuple[Fraction, ...]:
    """Pr(stop time = k) for k = 0..n+1, as consecutive differences of the CDF."""
    cdf = exact_query_cdf(game)
    return tuple(c - p for c, p in zip(cdf, (Fraction(0),) + cdf[:-1]))


def _pivot_stop_tallies(game: SimpleGame, cfg: SimConfig) -> np.ndarray:
    """(n+1) x (n+2) integer tallies: rows pivot+1 (0 = none), columns stop time."""
    n = game.n
    table = game.closure_table()
    shape = (n + 1, n + 2)

    if table[0]:  # the empty coalition wins: every trial stops at 0
        counts = np.zeros(shape, dtype=np.int64)
        counts[0, 0] = cfg.trials
        return counts

    def block(bi: int, size: int) -> np.ndarray:
        rng = _block_rng(cfg.seed, bi)
        perm = _random_permutations(rng, size, n)
        wins = table[_prefix_masks(perm)]
        anyw = wins.any(axis=1)
        first = wins.argmax(axis=1)
        stop = np.where(anyw, first + 1, n + 1)
        pivot = np.where(anyw, perm[np.arange(size), first], -1)
        flat = (pivot + 1) * (n + 2) + stop
        return np.bincount(flat, minlength=shape[0] * shape[1]).reshape(shape)

    return _sum_blocks(block, cfg)


@dataclass(frozen=True)
class QueryEstimate:
    trials: int
    seed: int
    workers: int = field(compare=False)
    stop_counts: tuple[int, ...]     # index = stop time 0..n+1
    mean: Fraction                   # exact sample mean
    stderr: float

    def within(self, exact: Fraction, sigmas: float = 4.0) -> bool:
        return abs(float(self.mean - exact)) <= sigmas * self.stderr


def _mean_and_stderr(values: Sequence[Fraction], counts: Sequence[int],
                     trials: int) -> tuple[Fraction, float]:
    mean = sum((v * c for v, c in zip(values, counts) if c), Fraction(0)) / trials
    if trials == 1:
        return mean, 0.0
    sq = sum((v * v * c for v, c in zip(values, counts) if c), Fraction(0))
    var = (sq - trials * mean * mean) / (trials - 1)
    return mean, math.sqrt(float(var) / trials)


def estimate_query_count(game: SimpleGame, cfg: SimConfig) -> QueryEstimate:
    """Sample mean of the stop time over uniformly random player orders."""
    n = game.n
    tallies = _pivot_stop_tallies(game, cfg)
    stop_counts = tuple(int(c) for c in tallies.sum(axis=0))
    values = [Fraction(k) for k in range(n + 2)]
    mean, stderr = _mean_and_stderr(values, stop_counts, cfg.trials)
    return QueryEstimate(cfg.trials, cfg.seed, cfg.workers, stop_counts, mean, stderr)


@dataclass(frozen=True)
class AwardsEstimate:
    trials: int
    seed: int
    workers: int = field(compare=False)
    normalized: bool
    means: dict[int, Fraction]       # per-player mean award (exact)
    stderrs: dict[int, float]
    pivot_counts: tuple[tuple[int, ...], ...]  # [player][stop time]


def estimate_awards(game: SimpleGame, rescaling: Union[RescalingRow, RescalingFamily],
                    cfg: SimConfig, normalized: bool = False) -> AwardsEstimate:
    """Run the query process, awarding k * mu[k] to the pivot at stop time k.

    Per-player mean awards converge to the weighted semivalue; with
    ``normalized`` they are divided by c_norm (converging to the semivalue).
    """
    n = game.n
    row = rescaling.row(n) if isinstance(rescaling, RescalingFamily) else rescaling
    if row.n != n:
        raise DimensionMismatch(f"row is for n={row.n}, game has n={n}")
    scale = Fraction(1)
    if normalized:
        c = row.c_norm()
        if c == 0:
            raise NormalizationUndefined("cannot normalize: c_norm is zero")
        scale = 1 / c
    awards = [Fraction(k) * row.mu[k] * scale for k in range(n + 1)] + [Fraction(0)]
    tallies = _pivot_stop_tallies(game, cfg)
    means: dict[int, Fraction] = {}
    stderrs: dict[int, float] = {}
    for i in range(n):
        counts = [int(c) for c in tallies[i + 1]]
        counts[0] += cfg.trials - sum(counts)  # zero-award trials (pivot elsewhere)
        mean, stderr = _mean_and_stderr(awards, counts, cfg.trials)
        means[i] = mean
        stderrs[i] = stderr
    return AwardsEstimate(cfg.trials, cfg.seed, cfg.workers, normalized, means,
                          stderrs, tuple(tuple(int(c) for c in r) for r in tallies[1:]))


def _positive_swing_counts(game: SimpleGame) -> list[list[int]]:
    """swings[i][k] = number of size-k coalitions S containing i with S winning
    and S minus i losing (raw predicate)."""
    n = game.n
    table = game.win_table()
    from .games import popcounts  # local import to keep module deps flat
    pc = popcounts(n)
    masks = np.arange(1 << n, dtype=np.int64)
    out = []
    for i in range(n):
        with_i = masks[(masks >> i) & 1 == 1]
        swing = table[with_i] & ~table[with_i ^ (1 << i)]
        out.append([int(c) for c in np.bincount(pc[with_i][swing], minlength=n + 1)])
    return out


@dataclass(frozen=True)
class BargainingValues:
    """Exact proposer probabilities: r = first-round, pi = overall."""

    r: dict[int, Fraction]
    pi: dict[int, Fraction]


@dataclass(frozen=True)
class BargainingEstimate:
    trials: int
    seed: int
    workers: int = field(compare=False)
    proposer_counts: tuple[int, ...]
    first_round_counts: tuple[int, ...]
    capped_trials: int
    r: dict[int, Fraction]           # first-round proposer frequency
    pi: dict[int, Fraction]          # overall proposer frequency


def bargaining(game: SimpleGame, rescaling: Union[RescalingRow, RescalingFamily],
               mode: str = "exact",
               cfg: SimConfig | None = None) -> Union[BargainingValues, BargainingEstimate]:
    """Proposer-selection protocol: draw a coalition size from mu, a uniform
    coalition of that size, and a uniform member; the member proposes if they
    swing the coalition, otherwise the round repeats.

    ``exact`` mode evaluates the closed forms r_i = sum_k f[k]/k * (number of
    size-k swings of i) and pi_i = r_i / sum_j r_j.  ``montecarlo`` simulates
    the rounds under ``cfg``.
    """
    if not isinstance(game, SimpleGame):
        raise DimensionMismatch("bargaining needs a simple game")
    n = game.n
    row = rescaling.row(n) if isinstance(rescaling, RescalingFamily) else rescaling
    if row.n != n:
        raise DimensionMismatch(f"row is for n={row.n}, game has n={n}")
    swings = _positive_swing_counts(game)

    if mode == "exact":
        r = {
            i: sum((row.f[k] * Fraction(counts[k], k)
                    for k in range(1, n + 1) if counts[k]), Fraction(0))
            for i, counts in enumerate(swings)
        }
        total = sum(r.values())
        if total == 0:
            raise AllZeroError("no player ever swings; proposer shares are undefined")
        pi = {i: v / total for i, v in r.items()}
        return BargainingValues(r, pi)

    if mode != "montecarlo":
        raise ValueError(f"unknown mode {mode!r}; expected 'exact' or 'montecarlo'")
    if cfg is None:
        raise ValueError("montecarlo mode needs a SimConfig")
    if not any(any(c) for c in swings):
        raise AllZeroError("no player ever swings; proposer shares are undefined")

    table = game.win_table()
    cum = np.cumsum(np.array([float(m) for m in row.mu]))

    def block(bi: int, size: int) -> np.ndarray:
        rng = _block_rng(cfg.seed, bi)
        proposer = np.zeros(n, dtype=np.int64)
        first_round = np.zeros(n, dtype=np.int64)
        active = np.arange(size)
        for round_index in range(cfg.max_rounds):
            if active.size == 0:
                break
            a = active.size
            k = np.minimum(np.searchsorted(cum, rng.random(a), side="right"), n)
            perm = _random_permutations(rng, a, n)
            prefix = _prefix_masks(perm)
            member_pos = (rng.random(a) * np.maximum(k, 1)).astype(np.int64)
            picked = perm[np.arange(a), member_pos]
            coalition_mask = np.where(k > 0, prefix[np.arange(a), np.maximum(k, 1) - 1], 0)
            swing = (k > 0) & table[coalition_mask] & ~table[coalition_mask ^ (np.int64(1) << picked)]
            if swing.any():
                chosen = picked[swing]
                np.add.at(proposer, chosen, 1)
                if round_index == 0:
                    np.add.at(first_round, chosen, 1)
            active = active[~swing]
        capped = active.size
        return np.concatenate([proposer, first_round, [capped]])

    totals = _sum_blocks(block, cfg)
    proposer = tuple(int(c) for c in totals[:n])
    first_round = tuple(int(c) for c in totals[n:2 * n])
    capped = int(totals[-1])
    accepted = cfg.trials - capped
    if accepted == 0:
        raise AllZeroError("no trial found a proposer within the round cap")
    r = {i: Fraction(first_round[i], cfg.trials) for i in range(n)}
    pi = {i: Fraction(proposer[i], accepted) for i in range(n)}
    return BargainingEstimate(cfg.trials, cfg.seed, cfg.workers, proposer,
                              first_round, capped, r, pi)

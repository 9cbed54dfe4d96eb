"""Simple games and TU-games on the player set {0, ..., n-1}.

Coalitions are plain ints used as bitmasks: bit i set means player i belongs
to the coalition.  Characteristic values are exact throughout (`int` 0/1 for
simple games, `fractions.Fraction` for TU-games); floating point never enters
a formula path.  numpy is used only for boolean winning tables and integer
tallies, which are exact by construction.

Two models are supported:

* ``standard``: the empty coalition never wins (``v({}) = 0``).
* ``extended``: the class is closed under duality, so games where the empty
  coalition wins ("trivial" games) are legal alongside empty games.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import CapacityError, DimensionMismatch, GameError

Coalition = int

MODELS = ("standard", "extended")

#: Hard default for dense enumeration: a 2**n table must fit in memory.
DEFAULT_ENUMERATION_LIMIT = 26

_ENV_LIMIT = "QUERYPOWER_N_MAX"


def enumeration_limit() -> int:
    """Largest n for which full 2**n coalition enumeration is permitted.

    Overridable through the ``QUERYPOWER_N_MAX`` environment variable.
    """
    raw = os.environ.get(_ENV_LIMIT)
    if raw is None:
        return DEFAULT_ENUMERATION_LIMIT
    try:
        return int(raw)
    except ValueError as exc:
        raise CapacityError(f"invalid {_ENV_LIMIT!r} value: {raw!r}") from exc


def coalition(members: Iterable[int]) -> Coalition:
    """Bitmask for an iterable of player indices."""
    mask = 0
    for i in members:
        if i < 0:
            raise GameError(f"negative player index {i}")
        mask |= 1 << i
    return mask


def members(S: Coalition) -> tuple[int, ...]:
    """Sorted player indices of a coalition bitmask."""
    out = []
    i = 0
    while S:
        if S & 1:
            out.append(i)
        S >>= 1
        i += 1
    return tuple(out)


def coalition_size(S: Coalition) -> int:
    return S.bit_count()


def drop_player(S: Coalition, i: int) -> Coalition:
    """Reindex a coalition after deleting player i (players above i shift down)."""
    low = S & ((1 << i) - 1)
    high = (S >> (i + 1)) << i
    return low | high


def popcounts(n: int) -> np.ndarray:
    """uint8 array of bit counts for all masks 0 .. 2**n - 1."""
    pc = np.zeros(1, dtype=np.uint8)
    for _ in range(n):
        pc = np.concatenate([pc, pc + 1])
    return pc


def _check_model(model: str) -> str:
    if model not in MODELS:
        raise GameError(f"unknown model {model!r}; expected one of {MODELS}")
    return model


def _check_coalition(S: Coalition, n: int) -> Coalition:
    if not isinstance(S, int) or S < 0 or S >= (1 << n):
        raise GameError(f"coalition {S!r} has players outside 0..{n - 1}")
    return S


def _require_capacity(n: int, what: str) -> None:
    limit = enumeration_limit()
    if n > limit:
        raise CapacityError(
            f"{what} needs enumeration of 2**{n} coalitions "
            f"(limit n <= {limit}; override with {_ENV_LIMIT})"
        )


def normalize_antichain(coalitions: Iterable[Coalition]) -> tuple[Coalition, ...]:
    """Drop duplicates and any coalition containing another (keep minimal sets)."""
    unique = sorted(set(coalitions), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for m in unique:
        if not any(m & k == k for k in kept):
            kept.append(m)
    return tuple(kept)


@dataclass(frozen=True)
class Classification:
    """Structural flags of a simple game, computed by full enumeration."""

    monotone: bool
    proper: bool       # complement of every winning coalition loses
    strong: bool       # complement of every losing coalition wins
    self_dual: bool    # equal to its own dual
    empty: bool        # no winning coalitions
    trivial: bool      # the empty coalition wins


@dataclass(frozen=True)
class TypeCounts:
    """Per-size counts of the four complement types of coalitions.

    For each size k: ``d[k]`` winning with losing complement, ``c[k]`` winning
    with winning complement, ``q[k]`` losing with losing complement, ``p[k]``
    losing with winning complement.
    """

    d: tuple[int, ...]
    c: tuple[int, ...]
    q: tuple[int, ...]
    p: tuple[int, ...]


class SimpleGame:
    """A simple game: player count plus a winning-coalition predicate.

    Several representations are supported; all operations go through the
    winning predicate, so two games with the same predicate behave alike.
    Instances are immutable and safe to share between threads (lazy caches
    are idempotent).
    """

    __slots__ = (
        "n", "model", "kind", "labels",
        "_minimal", "_winning", "_weights", "_quota", "_base",
        "_table", "_closure", "_monotone",
    )

    def __init__(self, *_args, **_kwargs):
        raise TypeError(
            "use a named constructor: from_minimal_winning, from_explicit, "
            "weighted, unanimity, dictator, empty, trivial, from_table"
        )

    @classmethod
    def _new(cls, n: int, model: str, kind: str,
             labels: Sequence[str] | None = None) -> "SimpleGame":
        if n < 1:
            raise GameError(f"player count must be >= 1, got {n}")
        if labels is not None and len(labels) != n:
            raise GameError("labels must have one entry per player")
        self = object.__new__(cls)
        self._set("n", n)
        self._set("model", _check_model(model))
        self._set("kind", kind)
        self._set("labels", tuple(labels) if labels is not None else None)
        for f in ("_minimal", "_winning", "_weights", "_quota", "_base",
                  "_table", "_closure", "_monotone"):
            self._set(f, None)
        return self

    def _set(self, name: str, value) -> None:
        object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("SimpleGame instances are immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def from_minimal_winning(cls, n: int, coalitions: Iterable[Union[Coalition, Iterable[int]]],
                             model: str = "standard",
                             labels: Sequence[str] | None = None) -> "SimpleGame":
        """Monotone game from its minimal winning coalitions (normalized to an antichain)."""
        masks = [c if isinstance(c, int) else coalition(c) for c in coalitions]
        for m in masks:
            _check_coalition(m, n)
        antichain = normalize_antichain(masks)
        if not antichain:
            return cls.empty(n, model=model, labels=labels)
        if model == "standard" and antichain[0] == 0:
            raise GameError("standard model forbids the empty coalition in a winning list")
        g = cls._new(n, model, "minimal_winning", labels)
        g._set("_minimal", antichain)
        g._set("_monotone", True)
        return g

    @classmethod
    def from_explicit(cls, n: int, winning: Iterable[Union[Coalition, Iterable[int]]],
                      model: str = "standard",
                      labels: Sequence[str] | None = None) -> "SimpleGame":
        """Game from the explicit set of winning coalitions (may be nonmonotone)."""
        masks = frozenset(c if isinstance(c, int) else coalition(c) for c in winning)
        for m in masks:
            _check_coalition(m, n)
        if model == "standard" and 0 in masks:
            raise GameError("standard model forbids a winning empty coalition")
        if not masks:
            return cls.empty(n, model=model, labels=labels)
        g = cls._new(n, model, "explicit_winning", labels)
        g._set("_winning", masks)
        return g

    @classmethod
    def weighted(cls, weights: Sequence[Union[int, Fraction]], quota: Union[int, Fraction],
                 model: str = "standard",
                 labels: Sequence[str] | None = None) -> "SimpleGame":
        """Weighted voting game: a coalition wins iff its total weight reaches the quota."""
        ws = tuple(Fraction(w) for w in weights)
        q = Fraction(quota)
        if any(w < 0 for w in ws):
            raise GameError("weights must be nonnegative")
        if model == "standard" and q <= 0:
            raise GameError("standard model needs quota > 0 (the empty coalition would win)")
        g = cls._new(len(ws), model, "weighted", labels)
        g._set("_weights", ws)
        g._set("_quota", q)
        g._set("_monotone", True)
        return g

    @classmethod
    def unanimity(cls, n: int, base: Union[Coalition, Iterable[int]],
                  model: str = "standard",
                  labels: Sequence[str] | None = None) -> "SimpleGame":
        """Coalitions containing ``base`` win; dictatorial when base is a singleton."""
        mask = base if isinstance(base, int) else coalition(base)
        _check_coalition(mask, n)
        if mask == 0:
            if model == "standard":
                raise GameError("unanimity over the empty set makes every coalition "
                                "(including the empty one) winning; extended model only")
            return cls.trivial(n, labels=labels)
        g = cls._new(n, model, "unanimity", labels)
        g._set("_base", mask)
        g._set("_monotone", True)
        return g

    @classmethod
    def dictator(cls, n: int, i: int, model: str = "standard",
                 labels: Sequence[str] | None = None) -> "SimpleGame":
        return cls.unanimity(n, [i], model=model, labels=labels)

    @classmethod
    def empty(cls, n: int, model: str = "standard",
              labels: Sequence[str] | None = None) -> "SimpleGame":
        """The game with no winning coalitions."""
        g = cls._new(n, model, "empty", labels)
        g._set("_monotone", True)
        return g

    @classmethod
    def trivial(cls, n: int, labels: Sequence[str] | None = None) -> "SimpleGame":
        """Every coalition, including the empty one, wins (extended model only)."""
        g = cls._new(n, "extended", "trivial", labels)
        g._set("_monotone", True)
        return g

    @classmethod
    def from_table(cls, n: int, table: Union[int, Sequence[bool], np.ndarray],
                   model: str = "standard",
                   labels: Sequence[str] | None = None) -> "SimpleGame":
        """Game from a full winning table (entry m = does coalition mask m win).

        ``table`` may be a numpy/bool sequence of length 2**n or an int whose
        bit m encodes entry m.
        """
        size = 1 << n
        if isinstance(table, int):
            winning = [m for m in range(size) if (table >> m) & 1]
        else:
            arr = np.asarray(table, dtype=bool)
            if arr.shape != (size,):
                raise GameError(f"table must have length 2**{n}")
            winning = [int(m) for m in np.nonzero(arr)[0]]
        return cls.from_explicit(n, winning, model=model, labels=labels)

    # -- predicate and tables -------------------------------------------

    def is_winning(self, S: Coalition) -> bool:
        """Raw winning predicate (no monotone closure)."""
        _check_coalition(S, self.n)
        kind = self.kind
        if kind == "empty":
            return False
        if kind == "trivial":
            return True
        if kind == "unanimity":
            return S & self._base == self._base
        if kind == "minimal_winning":
            return any(S & m == m for m in self._minimal)
        if kind == "weighted":
            total = sum((w for i, w in enumerate(self._weights) if S >> i & 1),
                        Fraction(0))
            return total >= self._quota
        return S in self._winning

    def value(self, S: Coalition) -> int:
        return 1 if self.is_winning(S) else 0

    def win_table(self) -> np.ndarray:
        """Boolean table over all 2**n coalitions (cached; capacity-bounded)."""
        if self._table is None:
            _require_capacity(self.n, "winning table")
            self._set("_table", self._build_table())
            self._table.setflags(write=False)
        return self._table

    def _build_table(self) -> np.ndarray:
        n, size = self.n, 1 << self.n
        masks = np.arange(size, dtype=np.int64)
        kind = self.kind
        if kind == "empty":
            return np.zeros(size, dtype=bool)
        if kind == "trivial":
            return np.ones(size, dtype=bool)
        if kind == "unanimity":
            return (masks & self._base) == self._base
        if kind == "minimal_winning":
            table = np.zeros(size, dtype=bool)
            for m in self._minimal:
                table |= (masks & m) == m
            return table
        if kind == "explicit_winning":
            table = np.zeros(size, dtype=bool)
            table[np.fromiter(self._winning, dtype=np.int64)] = True
            return table
        # weighted: exact integer subset sums after clearing denominators
        scale = math.lcm(self._quota.denominator,
                         *(w.denominator for w in self._weights))
        ws = [int(w * scale) for w in self._weights]
        quota = int(self._quota * scale)
        if sum(ws) < 2**62:
            sums = np.zeros(1, dtype=np.int64)
            for w in ws:
                sums = np.concatenate([sums, sums + w])
            return sums >= quota
        table = np.zeros(size, dtype=bool)  # big weights: exact python ints
        for m in range(size):
            total = 0
            rest = m
            while rest:
                b = rest & -rest
                total += ws[b.bit_length() - 1]
                rest ^= b
            table[m] = total >= quota
        return table

    def closure_table(self) -> np.ndarray:
        """Entry m = does coalition m *contain* a winning coalition (monotone closure)."""
        if self._closure is None:
            table = self.win_table()
            if self.is_monotone():
                self._set("_closure", table)
            else:
                closure = table.copy()
                for i in range(self.n):
                    view = closure.reshape(-1, 2, 1 << i)
                    view[:, 1, :] |= view[:, 0, :]
                closure.setflags(write=False)
                self._set("_closure", closure)
        return self._closure

    def is_monotone(self) -> bool:
        if self._monotone is None:
            table = self.win_table()
            mono = True
            for i in range(self.n):
                view = table.reshape(-1, 2, 1 << i)
                if np.any(view[:, 0, :] & ~view[:, 1, :]):
                    mono = False
                    break
            self._set("_monotone", mono)
        return self._monotone

    # -- structural operations -------------------------------------------

    def size_profile(self) -> tuple[int, ...]:
        """Number of winning coalitions of each size 0..n (raw predicate)."""
        return self._profile_of(self.win_table())

    def closure_profile(self) -> tuple[int, ...]:
        """Per-size counts of coalitions containing a winning coalition."""
        return self._profile_of(self.closure_table())

    def _profile_of(self, table: np.ndarray) -> tuple[int, ...]:
        pc = popcounts(self.n)
        counts = np.bincount(pc[table], minlength=self.n + 1)
        return tuple(int(c) for c in counts)

    def dual(self) -> "SimpleGame":
        """Complement-rule dual: S wins in the dual iff its complement loses here.

        An involution.  In the extended model empty and trivial games are
        dual to each other; in the standard model the dual is illegal when
        the grand coalition loses (the empty coalition would win).
        """
        if self.kind == "empty":
            if self.model == "standard":
                raise GameError("dual of an empty game makes the empty coalition "
                                "winning; extended model only")
            return SimpleGame.trivial(self.n, labels=self.labels)
        if self.kind == "trivial":
            return SimpleGame.empty(self.n, model="extended", labels=self.labels)
        table = self.win_table()
        dual_table = ~table[::-1]
        if self.model == "standard" and dual_table[0]:
            raise GameError("dual of a game whose grand coalition loses makes the "
                            "empty coalition winning; extended model only")
        winning = [int(m) for m in np.nonzero(dual_table)[0]]
        return SimpleGame.from_explicit(self.n, winning, model=self.model,
                                        labels=self.labels)

    def restrict(self, i: int) -> "SimpleGame":
        """Delete player i; remaining players are reindexed to 0..n-2 in order."""
        n = self.n
        if n < 2:
            raise GameError("cannot delete a player from a 1-player game")
        if not 0 <= i < n:
            raise GameError(f"no player {i} in a {n}-player game")
        labels = None
        if self.labels is not None:
            labels = self.labels[:i] + self.labels[i + 1:]
        kind = self.kind
        if kind == "empty":
            return SimpleGame.empty(n - 1, model=self.model, labels=labels)
        if kind == "trivial":
            return SimpleGame.trivial(n - 1, labels=labels)
        if kind == "unanimity":
            if self._base >> i & 1:
                return SimpleGame.empty(n - 1, model=self.model, labels=labels)
            return SimpleGame.unanimity(n - 1, drop_player(self._base, i),
                                        model=self.model, labels=labels)
        if kind == "weighted":
            ws = self._weights[:i] + self._weights[i + 1:]
            return SimpleGame.weighted(ws, self._quota, model=self.model, labels=labels)
        if kind == "minimal_winning":
            kept = [drop_player(m, i) for m in self._minimal if not m >> i & 1]
            if not kept:
                return SimpleGame.empty(n - 1, model=self.model, labels=labels)
            return SimpleGame.from_minimal_winning(n - 1, kept, model=self.model,
                                                   labels=labels)
        kept = [drop_player(m, i) for m in self._winning if not m >> i & 1]
        if not kept:
            return SimpleGame.empty(n - 1, model=self.model, labels=labels)
        return SimpleGame.from_explicit(n - 1, kept, model=self.model, labels=labels)

    def classify(self) -> Classification:
        table = self.win_table()
        comp = table[::-1]  # entry m = does the complement of m win
        return Classification(
            monotone=self.is_monotone(),
            proper=not bool(np.any(table & comp)),
            strong=not bool(np.any(~table & ~comp)),
            self_dual=bool(np.all(table ^ comp)),
            empty=not bool(table.any()),
            trivial=bool(table[0]),
        )

    def coalition_type_counts(self) -> TypeCounts:
        """Per-size counts of (winning, complement-winning) type combinations."""
        table = self.win_table()
        comp = table[::-1]
        pc = popcounts(self.n)
        n = self.n

        def counts(sel: np.ndarray) -> tuple[int, ...]:
            return tuple(int(c) for c in np.bincount(pc[sel], minlength=n + 1))

        return TypeCounts(
            d=counts(table & ~comp),
            c=counts(table & comp),
            q=counts(~table & ~comp),
            p=counts(~table & comp),
        )

    def minimal_winning_coalitions(self) -> tuple[Coalition, ...]:
        """Winning coalitions none of whose proper subsets win."""
        if self.kind == "minimal_winning":
            return self._minimal
        if self.kind == "empty":
            return ()
        table = self.win_table()
        closure = self.closure_table()
        out = []
        for m in np.nonzero(table)[0]:
            m = int(m)
            rest = m
            minimal = True
            while rest:
                b = rest & -rest
                if closure[m ^ b]:
                    minimal = False
                    break
                rest ^= b
            if minimal:
                out.append(m)
        return tuple(out)

    def marginal(self, S: Coalition, i: int) -> Fraction:
        """v(S) - v(S minus i); for monotone games, 1 iff i swings S."""
        _check_coalition(S, self.n)
        if not S >> i & 1:
            raise GameError(f"player {i} is not a member of the coalition")
        return Fraction(self.value(S) - self.value(S ^ (1 << i)))

    def equivalent(self, other: "SimpleGame") -> bool:
        """Same player count, model and winning predicate."""
        if not isinstance(other, SimpleGame):
            return NotImplemented
        if self.n != other.n or self.model != other.model:
            return False
        return bool(np.array_equal(self.win_table(), other.win_table()))

    def __repr__(self) -> str:
        extra = ""
        if self.kind == "minimal_winning":
            extra = f", minimal={[members(m) for m in self._minimal]}"
        elif self.kind == "weighted":
            extra = f", weights={[str(w) for w in self._weights]}, quota={self._quota}"
        elif self.kind == "unanimity":
            extra = f", base={members(self._base)}"
        return f"SimpleGame({self.kind}, n={self.n}, model={self.model}{extra})"


class TUGame:
    """A transferable-utility game: exact rational worth for every coalition.

    ``values[m]`` is v(S) for the coalition with bitmask m.  The standard
    model requires v({}) = 0; the extended model leaves it free.
    """

    __slots__ = ("n", "model", "values", "labels", "_size_sums")

    def __init__(self, values: Sequence[Union[int, Fraction]],
                 model: str = "standard",
                 labels: Sequence[str] | None = None):
        size = len(values)
        n = size.bit_length() - 1
        if size != 1 << n or n < 1:
            raise GameError(f"value table length {size} is not 2**n for n >= 1")
        vals = tuple(Fraction(v) for v in values)
        if model not in MODELS:
            raise GameError(f"unknown model {model!r}")
        if model == "standard" and vals[0] != 0:
            raise GameError("standard model requires v(empty) = 0")
        if labels is not None and len(labels) != n:
            raise GameError("labels must have one entry per player")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "labels", tuple(labels) if labels is not None else None)
        object.__setattr__(self, "_size_sums", None)

    def __setattr__(self, name, value):
        raise AttributeError("TUGame instances are immutable")

    @classmethod
    def from_function(cls, n: int, fn, model: str = "standard") -> "TUGame":
        return cls([fn(m) for m in range(1 << n)], model=model)

    @classmethod
    def additive(cls, weights: Sequence[Union[int, Fraction]]) -> "TUGame":
        """Additive game: v(S) is the sum of the members' weights."""
        ws = [Fraction(w) for w in weights]
        n = len(ws)
        vals = [Fraction(0)] * (1 << n)
        for i, w in enumerate(ws):
            bit = 1 << i
            for m in range(bit):
                vals[m | bit] = vals[m] + w
        return cls(vals)

    def value(self, S: Coalition) -> Fraction:
        _check_coalition(S, self.n)
        return self.values[S]

    def grand_value(self) -> Fraction:
        return self.values[-1]

    def per_size_sums(self) -> tuple[Fraction, ...]:
        """Sum of v(S) over coalitions of each size 0..n."""
        if self._size_sums is None:
            sums = [Fraction(0)] * (self.n + 1)
            for m, v in enumerate(self.values):
                if v:
                    sums[m.bit_count()] += v
            object.__setattr__(self, "_size_sums", tuple(sums))
        return self._size_sums

    def dual(self) -> "TUGame":
        """v*(S) = v(X) - v(X minus S).  Involutive when v(empty) = 0."""
        full = (1 << self.n) - 1
        grand = self.values[full]
        vals = [grand - self.values[full ^ m] for m in range(full + 1)]
        return TUGame(vals, model=self.model, labels=self.labels)

    def restrict(self, i: int) -> "TUGame":
        if self.n < 2:
            raise GameError("cannot delete a player from a 1-player game")
        if not 0 <= i < self.n:
            raise GameError(f"no player {i} in a {self.n}-player game")
        bit_low = (1 << i) - 1
        vals = []
        for t in range(1 << (self.n - 1)):
            m = (t & bit_low) | ((t >> i) << (i + 1))
            vals.append(self.values[m])
        labels = None
        if self.labels is not None:
            labels = self.labels[:i] + self.labels[i + 1:]
        return TUGame(vals, model=self.model, labels=labels)

    def marginal(self, S: Coalition, i: int) -> Fraction:
        _check_coalition(S, self.n)
        if not S >> i & 1:
            raise GameError(f"player {i} is not a member of the coalition")
        return self.values[S] - self.values[S ^ (1 << i)]

    def equivalent(self, other: "TUGame") -> bool:
        return (isinstance(other, TUGame) and self.n == other.n
                and self.model == other.model and self.values == other.values)

    def __repr__(self) -> str:
        return f"TUGame(n={self.n}, model={self.model})"


Game = Union[SimpleGame, TUGame]


def enumerate_monotone_tables(n: int) -> list[int]:
    """All monotone winning tables on n players, as table ints (bit m = S wins).

    Built by the doubling recursion: a monotone table on k players is a pair
    (t0, t1) of monotone tables on k-1 players with t0 implying t1 pointwise
    (t0 = tables where the new player is absent, t1 = present).  Includes the
    two constant tables; the all-ones table is the only one where the empty
    coalition wins.
    """
    if n < 0:
        raise GameError("n must be nonnegative")
    level = [0, 1]  # tables on 0 players: constants
    for k in range(n):
        width = 1 << k
        nxt = []
        for t0 in level:
            for t1 in level:
                if t0 & ~t1 == 0:  # t0 <= t1 pointwise
                    nxt.append(t0 | (t1 << width))
        level = nxt
    return level


def monotone_games(n: int, nonempty: bool = False) -> Iterator[SimpleGame]:
    """Standard-model monotone simple games on exactly n players."""
    for t in enumerate_monotone_tables(n):
        if t & 1:
            continue  # empty coalition wins: not a standard-model game
        if nonempty and t == 0:
            continue
        yield SimpleGame.from_table(n, t)


def require_same_players(game: Game, n: int, what: str) -> None:
    if game.n != n:
        raise DimensionMismatch(f"{what}: game has {game.n} players, expected {n}")

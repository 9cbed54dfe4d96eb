"""Catalog of the 29 four-player simple games, up to isomorphism.

Each game is identified by a compact label listing its minimal winning
coalitions with 1-based player digits ("1;23" = {player 1} and
{players 2, 3}); the empty label is the empty game.  The catalog carries
reference 4-decimal values for two collective measures: the constant-weight
index (binomial size weights; ``coleman``) and the uniform-size-weight
decisiveness index (``qstar0``).

Four of the reference ``qstar0`` decimals are inconsistent with exact
enumeration (two are not even expressible with the structurally forced
denominator 60); rows carry an ``agrees`` flag per column instead of
hard-coding either side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FormatError
from .games import SimpleGame, coalition
from .io import decimal4
from .measures import decisiveness
from .rescaling import builtin_family

#: (label, reference coleman, reference qstar0), in catalog order.
CATALOG: tuple[tuple[str, str, str], ...] = (
    ("1;2;3;4", "0.9375", "0.8000"),
    ("1;2;3", "0.8750", "0.7500"),
    ("1;2;34", "0.8125", "0.7000"),
    ("1;2", "0.7500", "0.6667"),
    ("1;23;24;34", "0.7500", "0.6500"),
    ("1;23;24", "0.6875", "0.6067"),
    ("12;13;14;23;24;34", "0.6875", "0.6000"),
    ("12;13;14;23;24", "0.6250", "0.5833"),
    ("1;23", "0.6250", "0.5500"),
    ("1;234", "0.5625", "0.5500"),
    ("12;13;14;23", "0.5625", "0.5333"),
    ("12;13;24;34", "0.5625", "0.5333"),
    ("1", "0.5000", "0.5000"),
    ("12;13;23", "0.5000", "0.5000"),
    ("12;13;24", "0.5000", "0.5000"),
    ("12;13;14;234", "0.5000", "0.5000"),
    ("12;34", "0.4375", "0.4667"),
    ("12;13;234", "0.4375", "0.4667"),
    ("12;13;14", "0.4375", "0.4500"),
    ("12;13", "0.3750", "0.4167"),
    ("12;134;234", "0.3750", "0.4033"),
    ("123;124;134;234", "0.3125", "0.4000"),
    ("12;134", "0.3125", "0.3833"),
    ("123;124;134", "0.2500", "0.3500"),
    ("12", "0.2500", "0.3333"),
    ("123;124", "0.1875", "0.3000"),
    ("123", "0.1250", "0.2500"),
    ("1234", "0.0625", "0.2000"),
    ("", "0.0000", "0.0000"),
)


def game_from_label(label: str, n: int = 4) -> SimpleGame:
    """Game from a compact minimal-winning label with 1-based player digits."""
    label = label.strip()
    if not label:
        return SimpleGame.empty(n)
    masks = []
    for part in label.split(";"):
        part = part.strip()
        if not part or not part.isdigit():
            raise FormatError(f"invalid coalition {part!r} in label {label!r}")
        players = [int(ch) - 1 for ch in part]
        if any(not 0 <= p < n for p in players) or len(set(players)) != len(players):
            raise FormatError(f"invalid coalition {part!r} for {n} players")
        masks.append(coalition(players))
    return SimpleGame.from_minimal_winning(n, masks)


@dataclass(frozen=True)
class TableRow:
    label: str
    coleman: Fraction
    qstar0: Fraction
    reference_coleman: str
    reference_qstar0: str
    coleman_agrees: bool
    qstar0_agrees: bool


def four_player_table() -> list[TableRow]:
    """Exact values for both columns of the catalog, with agreement flags
    against the stored reference decimals."""
    coleman_row = builtin_family("coleman").row(4)
    uniform_row = builtin_family("uniform").row(4)
    rows = []
    for label, ref_c, ref_q in CATALOG:
        game = game_from_label(label)
        c = decisiveness(game, coleman_row)
        q = decisiveness(game, uniform_row)
        rows.append(TableRow(
            label=label,
            coleman=c,
            qstar0=q,
            reference_coleman=ref_c,
            reference_qstar0=ref_q,
            coleman_agrees=decimal4(c) == ref_c,
            qstar0_agrees=decimal4(q) == ref_q,
        ))
    return rows

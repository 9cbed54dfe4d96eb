"""File formats and report rendering.

Game and rescaling documents are JSON (UTF-8).  Every rational in a report
is carried both as an exact string ("p/q") and as a 4-decimal rendering
(round-half-even), so written reports can be parsed back without loss.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .errors import FormatError, GameError, RescalingError
from .games import SimpleGame, TUGame, coalition, members
from .rescaling import (BUILTIN_FAMILIES, RescalingFamily, RescalingRow,
                        builtin_family, make_row)

Rational = Union[int, str, Fraction]


def parse_rational(value: Rational) -> Fraction:
    """Accept ints, Fractions, and strings like ``"3"`` or ``"2/5"``."""
    if isinstance(value, bool):
        raise FormatError(f"expected a rational, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"invalid rational {value!r}") from exc
    raise FormatError(f"expected a rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decimal4(value: Fraction) -> str:
    """Fixed 4-decimal rendering, round-half-even, exact until the rounding."""
    value = Fraction(value)
    scaled = round(value * 10_000)  # Fraction.__round__ is round-half-even
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    return f"{sign}{scaled // 10_000}.{scaled % 10_000:04d}"


def rational_payload(value: Fraction) -> dict[str, str]:
    return {"exact": format_rational(value), "decimal": decimal4(value)}


def exact_of(payload: Any) -> Fraction:
    """Recover the exact rational from a report payload (or plain string)."""
    if isinstance(payload, dict) and "exact" in payload:
        return parse_rational(payload["exact"])
    return parse_rational(payload)


def allocation_payload(values: dict[int, Fraction]) -> dict[str, dict[str, str]]:
    return {str(i): rational_payload(v) for i, v in sorted(values.items())}


def file_digest(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- game documents ----------------------------------------------------

_REPRESENTATIONS = ("minimal_winning", "explicit_winning", "weighted",
                    "unanimity", "empty", "trivial", "tu_table")


def _coalition_list(raw: Any, what: str) -> list[int]:
    if not isinstance(raw, list):
        raise FormatError(f"{what} must be a list of coalitions")
    out = []
    for entry in raw:
        if not isinstance(entry, list) or not all(isinstance(i, int) for i in entry):
            raise FormatError(f"coalitions must be lists of 0-based player indices")
        out.append(coalition(entry))
    return out


def game_from_dict(doc: dict) -> Union[SimpleGame, TUGame]:
    """Build a game from its document form (see README for the schema)."""
    if not isinstance(doc, dict):
        raise FormatError("game document must be an object")
    try:
        n = doc["n"]
        rep = doc["representation"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"game document is missing field {exc}") from exc
    if not isinstance(n, int) or n < 1:
        raise FormatError(f"invalid player count {n!r}")
    model = doc.get("model", "standard")
    labels = doc.get("labels")
    if not isinstance(rep, dict) or "type" not in rep:
        raise FormatError("representation must be an object with a 'type'")
    kind = rep["type"]
    try:
        if kind == "minimal_winning":
            return SimpleGame.from_minimal_winning(
                n, _coalition_list(rep.get("coalitions"), "minimal_winning"),
                model=model, labels=labels)
        if kind == "explicit_winning":
            return SimpleGame.from_explicit(
                n, _coalition_list(rep.get("coalitions"), "explicit_winning"),
                model=model, labels=labels)
        if kind == "weighted":
            weights = [parse_rational(w) for w in rep.get("weights", [])]
            if len(weights) != n:
                raise FormatError(f"weighted game needs {n} weights")
            return SimpleGame.weighted(weights, parse_rational(rep.get("quota", 0)),
                                       model=model, labels=labels)
        if kind == "unanimity":
            base = rep.get("coalition")
            if not isinstance(base, list):
                raise FormatError("unanimity needs a 'coalition' list")
            return SimpleGame.unanimity(n, base, model=model, labels=labels)
        if kind == "empty":
            return SimpleGame.empty(n, model=model, labels=labels)
        if kind == "trivial":
            if model != "extended":
                raise FormatError("trivial games exist only in the extended model")
            return SimpleGame.trivial(n, labels=labels)
        if kind == "tu_table":
            return _tu_from_dict(n, rep, model, labels)
    except GameError as exc:
        raise FormatError(str(exc)) from exc
    raise FormatError(f"unknown representation type {kind!r}; "
                      f"expected one of {_REPRESENTATIONS}")


def _coalition_key(mask: int) -> str:
    return ",".join(str(i) for i in members(mask))


def _tu_from_dict(n: int, rep: dict, model: str, labels) -> TUGame:
    raw = rep.get("values")
    if not isinstance(raw, dict):
        raise FormatError("tu_table needs a 'values' object")
    values = [Fraction(0)] * (1 << n)
    for key, val in raw.items():
        key = key.strip()
        if key:
            try:
                indices = [int(p) for p in key.split(",")]
            except ValueError as exc:
                raise FormatError(f"invalid coalition key {key!r}") from exc
            if indices != sorted(set(indices)) or indices[-1] >= n:
                raise FormatError(f"coalition key {key!r} must be sorted unique "
                                  f"indices below {n}")
            mask = coalition(indices)
        else:
            mask = 0
        values[mask] = parse_rational(val)
    return TUGame(values, model=model, labels=labels)


def game_to_dict(game: Union[SimpleGame, TUGame]) -> dict:
    doc: dict[str, Any] = {"n": game.n, "model": game.model}
    if game.labels is not None:
        doc["labels"] = list(game.labels)
    if isinstance(game, TUGame):
        doc["representation"] = {
            "type": "tu_table",
            "values": {_coalition_key(m): format_rational(v)
                       for m, v in enumerate(game.values) if v},
        }
        return doc
    kind = game.kind
    rep: dict[str, Any] = {"type": kind}
    if kind == "minimal_winning":
        rep["coalitions"] = [list(members(m)) for m in game._minimal]
    elif kind == "explicit_winning":
        rep["coalitions"] = [list(members(m)) for m in sorted(game._winning)]
    elif kind == "weighted":
        rep["weights"] = [format_rational(w) for w in game._weights]
        rep["quota"] = format_rational(game._quota)
    elif kind == "unanimity":
        rep["coalition"] = list(members(game._base))
    doc["representation"] = rep
    return doc


def load_game(path: Union[str, Path]) -> Union[SimpleGame, TUGame]:
    return game_from_dict(_load_json(path))


# -- rescaling documents -----------------------------------------------

def rescaling_from_dict(doc: dict) -> Union[RescalingRow, RescalingFamily]:
    if not isinstance(doc, dict):
        raise FormatError("rescaling document must be an object")
    if "family" in doc:
        name = doc["family"]
        if name not in BUILTIN_FAMILIES:
            raise FormatError(f"unknown family {name!r}; expected one of {BUILTIN_FAMILIES}")
        return builtin_family(name)
    given = [key for key in ("mu", "f", "F") if key in doc]
    if len(given) != 1 or "n" not in doc:
        raise FormatError("rescaling document needs 'n' and exactly one of mu/f/F "
                          "(or just 'family')")
    key = given[0]
    try:
        values = [parse_rational(v) for v in doc[key]]
        return make_row(doc["n"], **{key: values})
    except (RescalingError, TypeError) as exc:
        raise FormatError(f"invalid rescaling document: {exc}") from exc


def resolve_rescaling(spec: str) -> Union[RescalingRow, RescalingFamily]:
    """A builtin family name, or a path to a rescaling document."""
    if spec in BUILTIN_FAMILIES:
        return builtin_family(spec)
    return rescaling_from_dict(_load_json(spec))


def _load_json(path: Union[str, Path]) -> dict:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {p}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p} is not valid JSON: {exc}") from exc


# -- report rendering --------------------------------------------------

def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def _flatten(prefix: str, value: Any, rows: list[tuple[str, str, str]]) -> None:
    if isinstance(value, dict):
        if set(value) == {"exact", "decimal"}:
            rows.append((prefix, value["exact"], value["decimal"]))
            return
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), sub, rows)
    elif isinstance(value, (list, tuple)):
        for idx, sub in enumerate(value):
            _flatten(f"{prefix}[{idx}]", sub, rows)
    else:
        rows.append((prefix, "" if value is None else str(value), ""))


def render_csv(doc: dict) -> str:
    """Flatten a report to ``key,exact,decimal`` rows (non-numeric values keep
    their string form in the exact column)."""
    rows: list[tuple[str, str, str]] = []
    _flatten("", doc, rows)
    buf = _io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["key", "exact", "decimal"])
    writer.writerows(rows)
    return buf.getvalue()

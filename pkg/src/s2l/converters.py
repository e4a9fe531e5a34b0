"""Deterministic symbol-to-language converters and their inverses.

Rule converters (sequences, brackets, tables) are pure functions; lookup
converters read an immutable :class:`NameTable` loaded from a two-column TSV.
Inverse mappings exist for the rule converters so that answers given in
language space can be scored in symbol space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import groupby
from pathlib import Path

from .core import Rendering, SymbolSpan
from .errors import (
    LookupMissError,
    MappingError,
    SequenceParseError,
    StructuralError,
    ToolUnavailableError,
)

# ---------------------------------------------------------------------------
# Number sequences

_COUNT_WORDS = (
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
    "seventeen", "eighteen", "nineteen", "twenty",
)
_COUNT_FOR_WORD = {w: i + 1 for i, w in enumerate(_COUNT_WORDS)}
_RUN_SEP = ", followed by "
_RUN_RE = re.compile(r"^(?P<count>[a-z]+|[1-9][0-9]*) (?P<value>[0-9])(?P<plural>s?)$")


def _count_word(n: int) -> str:
    """Counts 1 to 20 are spelled out, larger counts stay digits."""
    return _COUNT_WORDS[n - 1] if n <= 20 else str(n)


def describe_sequence(seq: list[int]) -> str:
    """Describe a digit sequence by its runs.

    >>> describe_sequence([1, 1, 1, 0, 0])
    'three 1s, followed by two 0s'
    >>> describe_sequence([0])
    'one 0'
    """
    if not seq:
        raise ValueError("sequence must be non-empty")
    for i, v in enumerate(seq):
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v <= 9:
            raise ValueError(f"element {i} is {v!r}, expected an integer in [0, 9]")
    parts = []
    for value, group in groupby(seq):
        count = len(list(group))
        suffix = "" if count == 1 else "s"
        parts.append(f"{_count_word(count)} {value}{suffix}")
    return _RUN_SEP.join(parts)


def parse_sequence_description(text: str) -> list[int]:
    """Inverse of :func:`describe_sequence`; rejects anything it cannot emit."""
    if not text:
        raise SequenceParseError("empty description", 0)
    seq: list[int] = []
    prev_value = None
    pos = 0
    for segment in text.split(_RUN_SEP):
        m = _RUN_RE.match(segment)
        if m is None:
            raise SequenceParseError(f"invalid run {segment!r}", pos)
        raw_count = m.group("count")
        if raw_count.isdigit():
            count = int(raw_count)
            if count <= 20:
                raise SequenceParseError(
                    f"count {count} must be spelled out, got {segment!r}", pos)
        else:
            if raw_count not in _COUNT_FOR_WORD:
                raise SequenceParseError(f"unknown count word {raw_count!r}", pos)
            count = _COUNT_FOR_WORD[raw_count]
        if (count == 1) != (m.group("plural") == ""):
            raise SequenceParseError(f"count/plural mismatch in {segment!r}", pos)
        value = int(m.group("value"))
        if value == prev_value:
            raise SequenceParseError(f"adjacent runs repeat value {value}", pos)
        seq.extend([value] * count)
        prev_value = value
        pos += len(segment) + len(_RUN_SEP)
    return seq


# ---------------------------------------------------------------------------
# Brackets

BRACKET_NAMES = {
    "(": "open parenthesis",
    ")": "close parenthesis",
    "[": "open square bracket",
    "]": "close square bracket",
    "{": "open curly brace",
    "}": "close curly brace",
    "<": "open angle bracket",
    ">": "close angle bracket",
}
# Some models read the angle brackets as comparison signs; accept both.
BRACKET_ALIASES = {
    "<": "less than sign",
    ">": "greater than sign",
}
_SYMBOL_FOR_NAME = {name: sym for sym, name in BRACKET_NAMES.items()}
_SYMBOL_FOR_NAME.update({name: sym for sym, name in BRACKET_ALIASES.items()})


def name_brackets(s: str, aliases: bool = False) -> list[str]:
    """Name each bracket character; ``aliases`` switches the angle-bracket names."""
    table = dict(BRACKET_NAMES)
    if aliases:
        table.update(BRACKET_ALIASES)
    names = []
    for i, ch in enumerate(s):
        if ch not in table:
            raise ValueError(f"character {ch!r} at index {i} is not a bracket")
        names.append(table[ch])
    return names


def brackets_from_names(names: list[str]) -> str:
    """Inverse of :func:`name_brackets` accepting canonical and alias names."""
    symbols = []
    for name in names:
        key = " ".join(name.split()).lower()
        if key not in _SYMBOL_FOR_NAME:
            raise MappingError(f"unknown bracket name {name!r}")
        symbols.append(_SYMBOL_FOR_NAME[key])
    return "".join(symbols)


# ---------------------------------------------------------------------------
# Tables

def linearize_table(raw: str, cell_delim: str = "|", row_delim: str = "\n") -> str:
    """Rewrite a delimiter-encoded table as one ``header: cell; ...`` line per row.

    Row indices in errors count from 0 at the header row. A single trailing
    empty row (from a trailing delimiter) is ignored.
    """
    if not raw.strip():
        raise ValueError("empty table")
    rows = raw.split(row_delim)
    if rows and rows[-1] == "":
        rows = rows[:-1]
    header = [c.strip() for c in rows[0].split(cell_delim)]
    lines = []
    for index, row in enumerate(rows[1:], start=1):
        cells = [c.strip() for c in row.split(cell_delim)]
        if len(cells) != len(header):
            raise StructuralError(
                f"row {index} has {len(cells)} cells, expected {len(header)}")
        lines.append("; ".join(f"{h}: {c}" for h, c in zip(header, cells)))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Name tables (lookup converters)

@dataclass(frozen=True)
class NameTable:
    """Immutable symbol-to-text association loaded from a TSV file."""

    entries: dict[str, str]
    source_path: str = ""
    case_sensitive: bool = True

    def __post_init__(self):
        if not self.case_sensitive:
            folded = {k.casefold(): v for k, v in self.entries.items()}
            if len(folded) != len(self.entries):
                raise ValueError("keys collide under case folding")
            object.__setattr__(self, "entries", folded)

    @property
    def name(self) -> str:
        return Path(self.source_path).name if self.source_path else "<in-memory>"

    def get(self, key: str) -> str:
        lookup = key if self.case_sensitive else key.casefold()
        try:
            return self.entries[lookup]
        except KeyError:
            raise LookupMissError(key, self.name) from None


def load_name_table(path: str | Path, case_sensitive: bool = True) -> NameTable:
    """Load a ``key<TAB>value`` TSV; ``#`` lines are comments, no header row."""
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected key<TAB>value")
            key, _, value = line.partition("\t")
            if not value:
                raise ValueError(f"{path}:{lineno}: empty value for key {key!r}")
            if key in entries:
                raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
            entries[key] = value
    return NameTable(entries=entries, source_path=str(path), case_sensitive=case_sensitive)


_CODEPOINT_RE = re.compile(r"^U\+([0-9A-Fa-f]{1,6})$")


def normalize_emoji_key(grapheme_or_codepoint: str) -> str:
    """Normalize to uppercase ``U+XXXX`` codepoints joined by single spaces."""
    text = grapheme_or_codepoint.strip()
    if not text:
        raise ValueError("empty emoji input")
    if text.upper().startswith("U+"):
        points = []
        for token in text.split():
            m = _CODEPOINT_RE.match(token.upper())
            if m is None:
                raise ValueError(f"malformed codepoint literal {token!r}")
            points.append(f"U+{int(m.group(1), 16):04X}")
        return " ".join(points)
    return " ".join(f"U+{ord(ch):04X}" for ch in text)


def emoji_name(grapheme_or_codepoint: str, table: NameTable) -> str:
    """Look up the language name of an emoji grapheme or ``U+XXXX`` literal."""
    return table.get(normalize_emoji_key(grapheme_or_codepoint))


def lookup_translate(symbol: str, table: NameTable) -> str:
    """Return the table's text for ``symbol`` under the table's case rule."""
    return table.get(symbol)


# ---------------------------------------------------------------------------
# Span-level dispatch

def convert_with_tool(
    span: SymbolSpan,
    emoji_table: NameTable | None = None,
    smiles_table: NameTable | None = None,
) -> Rendering:
    """Convert one span with the deterministic converter for its kind.

    Raises :class:`ToolUnavailableError` for kinds with no tool (tweets) and
    :class:`LookupMissError` for lookup kinds missing from their table, so
    callers can fall back to a model conversion.
    """
    kind = span.kind
    if kind == "sequence":
        seq = [int(tok) for tok in span.raw_text.split(",")]
        return Rendering(span.id, describe_sequence(seq), "rule", "sequence-runs")
    if kind == "brackets":
        return Rendering(span.id, " ".join(name_brackets(span.raw_text)), "rule", "bracket-names")
    if kind == "table":
        return Rendering(span.id, linearize_table(span.raw_text), "rule", "table-linearizer")
    if kind == "emoji":
        if emoji_table is None:
            raise ToolUnavailableError("no emoji name table loaded")
        return Rendering(span.id, emoji_name(span.raw_text, emoji_table), "lookup", emoji_table.name)
    if kind == "smiles":
        if smiles_table is None:
            raise ToolUnavailableError("no molecular name table loaded")
        return Rendering(span.id, lookup_translate(span.raw_text, smiles_table), "lookup", smiles_table.name)
    if kind == "generic":
        return Rendering(span.id, span.raw_text, "rule", "identity")
    raise ToolUnavailableError(f"no tool converter for spans of kind {kind!r}")

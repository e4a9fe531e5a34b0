"""Problem/rendering data model and the two integration strategies.

A problem is a text template with named placeholders like ``{s1}``, one per
symbol span. Building a query replaces every placeholder either with the
span's raw symbol text (zero-shot), with its language rendering
(substitution), or with both side by side (concatenation).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import StructuralError

MODES = ("zero_shot", "zero_shot_cot", "s2l_substitute", "s2l_concatenate")
S2L_MODES = ("s2l_substitute", "s2l_concatenate")
CONVERSIONS = ("with_model", "with_tool")
SPAN_KINDS = ("sequence", "brackets", "smiles", "emoji", "table", "tweet", "generic")
RENDER_METHODS = ("llm", "rule", "lookup")

DEFAULT_COT_SUFFIX = "Let's think step by step."

# A placeholder is an identifier in braces; bare braces such as "{}" in
# symbol text are never placeholders.
_PLACEHOLDER_RE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


@dataclass(frozen=True)
class SymbolSpan:
    """One symbol occurrence inside a problem template."""

    id: str
    raw_text: str
    kind: str
    location: str

    def __post_init__(self):
        if not self.raw_text:
            raise ValueError(f"span {self.id!r}: raw_text must be non-empty")
        if self.kind not in SPAN_KINDS:
            raise ValueError(f"span {self.id!r}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class Rendering:
    """Language-based text produced for one span by some converter."""

    span_id: str
    text: str
    method: str
    source_label: str = ""

    def __post_init__(self):
        if not self.text:
            raise ValueError(f"rendering for span {self.span_id!r}: text must be non-empty")
        if self.method not in RENDER_METHODS:
            raise ValueError(f"rendering for span {self.span_id!r}: unknown method {self.method!r}")


@dataclass(frozen=True)
class Problem:
    """A templated question with identified symbol spans and a gold answer."""

    task_id: str
    template: str
    spans: tuple[SymbolSpan, ...]
    gold: object
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "spans", tuple(self.spans))
        ids = [s.id for s in self.spans]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate span ids: {dupes}")
        locations = [s.location for s in self.spans]
        if len(set(locations)) != len(locations):
            dupes = sorted({l for l in locations if locations.count(l) > 1})
            raise ValueError(f"duplicate span locations: {dupes}")


@dataclass(frozen=True)
class MethodConfig:
    """Which prompting method to run, and how symbols get converted."""

    mode: str
    conversion: str | None = None
    cot_suffix: str = DEFAULT_COT_SUFFIX

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode in S2L_MODES:
            if self.conversion not in CONVERSIONS:
                raise ValueError(f"mode {self.mode!r} requires conversion to be one of {CONVERSIONS}")

    @property
    def is_s2l(self) -> bool:
        return self.mode in S2L_MODES

    def label(self) -> str:
        if self.is_s2l:
            return f"{self.mode}({self.conversion.removeprefix('with_')})"
        return self.mode


@dataclass(frozen=True)
class Provenance:
    """How a query was produced: the method and the renderings used."""

    method: MethodConfig
    rendering_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class Query:
    """An ordered chat message list ready to send to a backend."""

    messages: tuple[tuple[str, str], ...]
    provenance: Provenance

    def __post_init__(self):
        if not any(role == "user" for role, _ in self.messages):
            raise ValueError("query must contain at least one user message")
        if any(not content for _, content in self.messages):
            raise ValueError("query messages must have non-empty content")

    @property
    def user_text(self) -> str:
        """Content of the last user message."""
        return [c for r, c in self.messages if r == "user"][-1]


def _substitute(problem: Problem, replacement_for: dict[str, str]) -> str:
    """Replace every placeholder in one pass; substituted text is never rescanned."""
    span_by_location = {s.location: s for s in problem.spans}
    seen: set[str] = set()

    def replace(match: re.Match) -> str:
        key = match.group(1)
        if key not in span_by_location:
            raise StructuralError(f"placeholder {{{key}}} has no matching span")
        if key in seen:
            raise StructuralError(f"placeholder {{{key}}} occurs more than once")
        seen.add(key)
        return replacement_for[key]

    text = _PLACEHOLDER_RE.sub(replace, problem.template)
    unused = set(span_by_location) - seen
    if unused:
        raise StructuralError(f"spans without a template placeholder: {sorted(unused)}")
    return text


def _paired_renderings(problem: Problem, renderings: list[Rendering]) -> dict[str, Rendering]:
    """Map span id to its single rendering, or fail listing the offenders."""
    by_span: dict[str, Rendering] = {}
    duplicates = []
    for r in renderings:
        if r.span_id in by_span:
            duplicates.append(r.span_id)
        by_span[r.span_id] = r
    span_ids = {s.id for s in problem.spans}
    missing = sorted(span_ids - set(by_span))
    unknown = sorted(set(by_span) - span_ids)
    if missing or duplicates or unknown:
        parts = []
        if missing:
            parts.append(f"missing renderings for spans {missing}")
        if sorted(set(duplicates)):
            parts.append(f"duplicate renderings for spans {sorted(set(duplicates))}")
        if unknown:
            parts.append(f"renderings for unknown spans {unknown}")
        raise StructuralError("; ".join(parts))
    return by_span


def _as_query(text: str, method: MethodConfig, rendering_ids: tuple[str, ...] = ()) -> Query:
    if method.mode == "zero_shot_cot":
        text = f"{text}\n\n{method.cot_suffix}"
    return Query(messages=(("user", text),), provenance=Provenance(method, rendering_ids))


def build_zero_shot(problem: Problem, config: MethodConfig) -> Query:
    """Build the plain query: placeholders carry the raw symbol text."""
    if config.mode not in ("zero_shot", "zero_shot_cot"):
        raise ValueError(f"build_zero_shot expects a zero-shot mode, got {config.mode!r}")
    text = _substitute(problem, {s.location: s.raw_text for s in problem.spans})
    return _as_query(text, config)


def _conversion_of(renderings: list[Rendering]) -> str:
    return "with_model" if any(r.method == "llm" for r in renderings) else "with_tool"


def integrate_substitute(problem: Problem, renderings: list[Rendering]) -> Query:
    """Replace each symbol with its language rendering."""
    by_span = _paired_renderings(problem, renderings)
    replacement = {s.location: by_span[s.id].text for s in problem.spans}
    method = MethodConfig("s2l_substitute", _conversion_of(renderings))
    text = _substitute(problem, replacement)
    return _as_query(text, method, tuple(s.id for s in problem.spans))


def integrate_concatenate(problem: Problem, renderings: list[Rendering]) -> Query:
    """Keep each symbol and attach its rendering as ``raw (that is, rendering)``."""
    by_span = _paired_renderings(problem, renderings)
    replacement = {
        s.location: f"{s.raw_text} (that is, {by_span[s.id].text})" for s in problem.spans
    }
    method = MethodConfig("s2l_concatenate", _conversion_of(renderings))
    text = _substitute(problem, replacement)
    return _as_query(text, method, tuple(s.id for s in problem.spans))


def build_query(problem: Problem, config: MethodConfig, renderings: list[Rendering] | None = None) -> Query:
    """Dispatch on the configured mode; s2l modes require renderings."""
    if config.is_s2l:
        if renderings is None:
            raise StructuralError(f"mode {config.mode!r} requires renderings")
        if config.mode == "s2l_substitute":
            query = integrate_substitute(problem, renderings)
        else:
            query = integrate_concatenate(problem, renderings)
        return Query(query.messages, Provenance(config, query.provenance.rendering_ids))
    return build_zero_shot(problem, config)

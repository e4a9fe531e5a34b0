"""Adapters for the eight task families.

Each family gets an instance type with enforced invariants, a problem builder
producing the prompt template and symbol spans, a gold oracle where the task
is synthetic (sequence shifts, bracket closings), a canonical gold response
used by echo tests, and an answer extractor that maps free-form model text
back to a task-native answer.
"""

from __future__ import annotations

import csv
import json
import random
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import converters
from .core import MethodConfig, Problem, Query, Rendering, SymbolSpan, build_query
from .errors import DatasetError, ExtractionMissError

TASK_IDS = (
    "arc", "dyck", "property", "emoji",
    "table_qa", "table_fact", "tweet_stance", "tweet_sentiment",
)

EMOTIONS = ("anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust")

LABEL_WORDS = {
    "property": ("yes", "no"),
    "table_fact": ("true", "false"),
    "tweet_stance": ("favor", "against"),
    "tweet_sentiment": ("positive", "negative"),
}

PROPERTY_DATASETS = ("BACE", "BBBP", "Tox21")
PROPERTY_QUESTIONS = {
    "BACE": "BACE-1 inhibition: Yes or No?",
    "BBBP": "Blood-brain barrier penetration: Yes or No?",
    "Tox21": "Toxicity: Yes or No?",
}

DEFAULT_STANCE_TARGET = "Donald Trump"

_OPENERS = "([{<"
_CLOSER_FOR = {"(": ")", "[": "]", "{": "}", "<": ">"}
_OPENER_FOR = {v: k for k, v in _CLOSER_FOR.items()}


def sequence_text(seq) -> str:
    """Render a digit sequence the way prompts show it: comma-joined, no spaces."""
    return ",".join(str(v) for v in seq)


# ---------------------------------------------------------------------------
# Gold oracles

def shift_oracle(seq, k: int):
    """Shift every cell forward by k, zero-filling vacated cells."""
    seq = list(seq)
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return seq
    if len(seq) < k:
        raise ValueError(f"sequence of length {len(seq)} cannot shift by {k}")
    if any(v != 0 for v in seq[len(seq) - k:]):
        raise ValueError(f"object would shift out of bounds (trailing {k} cells not all 0)")
    return [0] * k + seq[:len(seq) - k]


def dyck_oracle(prefix: str) -> str:
    """Closers of the unmatched openers, innermost first."""
    stack = []
    for i, ch in enumerate(prefix):
        if ch in _CLOSER_FOR:
            stack.append(ch)
        elif ch in _OPENER_FOR:
            if not stack or stack[-1] != _OPENER_FOR[ch]:
                raise ValueError(f"unmatched closer {ch!r} at index {i}")
            stack.pop()
        else:
            raise ValueError(f"character {ch!r} at index {i} is not a bracket")
    return "".join(_CLOSER_FOR[ch] for ch in reversed(stack))


# ---------------------------------------------------------------------------
# Instance types

@dataclass(frozen=True)
class ArcInstance:
    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    target_input: tuple[int, ...]
    gold_output: tuple[int, ...]
    k: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(
            (tuple(i), tuple(o)) for i, o in self.pairs))
        object.__setattr__(self, "target_input", tuple(self.target_input))
        object.__setattr__(self, "gold_output", tuple(self.gold_output))
        if self.n != len(self.pairs) or self.n not in (3, 4):
            raise ValueError(f"n must be the pair count and in {{3, 4}}, got {self.n}")
        if not 1 <= self.k <= 3:
            raise ValueError(f"k must be in [1, 3], got {self.k}")
        length = len(self.target_input)
        sequences = [s for p in self.pairs for s in p] + [self.target_input, self.gold_output]
        for s in sequences:
            if len(s) != length:
                raise ValueError("all sequences must have the same length")
            if any(not 0 <= v <= 9 for v in s):
                raise ValueError("sequence values must be in [0, 9]")
        for inp, out in list(self.pairs) + [(self.target_input, self.gold_output)]:
            if tuple(shift_oracle(inp, self.k)) != out:
                raise ValueError(f"pair {sequence_text(inp)} -> {sequence_text(out)} "
                                 f"does not match a shift by {self.k}")


@dataclass(frozen=True)
class DyckInstance:
    pairs: tuple[tuple[str, str], ...]
    target_prefix: str
    gold_closing: str
    n: int

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        if self.n != len(self.pairs) or not 1 <= self.n <= 5:
            raise ValueError(f"n must be the pair count and in [1, 5], got {self.n}")
        for prefix, closing in list(self.pairs) + [(self.target_prefix, self.gold_closing)]:
            if dyck_oracle(prefix) != closing:
                raise ValueError(f"closing {closing!r} does not complete prefix {prefix!r}")
            if not closing:
                raise ValueError(f"prefix {prefix!r} is already balanced (empty closing)")


@dataclass(frozen=True)
class PropertyInstance:
    smiles: str
    label: str
    dataset: str

    def __post_init__(self):
        if not self.smiles:
            raise ValueError("empty SMILES string")
        if self.label not in ("yes", "no"):
            raise ValueError(f"label must be yes or no, got {self.label!r}")
        if self.dataset not in PROPERTY_DATASETS:
            raise ValueError(f"unknown dataset {self.dataset!r}")


@dataclass(frozen=True)
class EmojiInstance:
    emoji: str
    human_ratings: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "emoji", converters.normalize_emoji_key(self.emoji))
        object.__setattr__(self, "human_ratings", tuple(float(x) for x in self.human_ratings))
        if len(self.human_ratings) != len(EMOTIONS):
            raise ValueError(f"expected {len(EMOTIONS)} ratings, got {len(self.human_ratings)}")
        if any(not 0.0 <= x <= 1.0 for x in self.human_ratings):
            raise ValueError("ratings must lie in [0, 1]")

    @property
    def grapheme(self) -> str:
        return "".join(chr(int(cp[2:], 16)) for cp in self.emoji.split())


@dataclass(frozen=True)
class TableInstance:
    table_raw: str
    question_or_claim: str
    gold: object
    subtask: str

    def __post_init__(self):
        if self.subtask not in ("qa", "fact"):
            raise ValueError(f"subtask must be qa or fact, got {self.subtask!r}")
        converters.linearize_table(self.table_raw)  # rejects ragged or empty tables
        if self.subtask == "qa":
            answers = tuple(str(a) for a in self.gold)
            if not answers or any(not a for a in answers):
                raise ValueError("QA gold must be a non-empty set of non-empty answers")
            object.__setattr__(self, "gold", answers)
        else:
            if self.gold not in ("true", "false"):
                raise ValueError(f"fact label must be true or false, got {self.gold!r}")


@dataclass(frozen=True)
class TweetInstance:
    text: str
    label: str
    subtask: str

    def __post_init__(self):
        if self.subtask not in ("sentiment", "stance"):
            raise ValueError(f"subtask must be sentiment or stance, got {self.subtask!r}")
        if not self.text:
            raise ValueError("empty tweet text")
        allowed = LABEL_WORDS["tweet_sentiment" if self.subtask == "sentiment" else "tweet_stance"]
        if self.label not in allowed:
            raise ValueError(f"label must be one of {allowed}, got {self.label!r}")


Instance = ArcInstance | DyckInstance | PropertyInstance | EmojiInstance | TableInstance | TweetInstance


def task_id_of(instance: Instance) -> str:
    if isinstance(instance, ArcInstance):
        return "arc"
    if isinstance(instance, DyckInstance):
        return "dyck"
    if isinstance(instance, PropertyInstance):
        return "property"
    if isinstance(instance, EmojiInstance):
        return "emoji"
    if isinstance(instance, TableInstance):
        return "table_qa" if instance.subtask == "qa" else "table_fact"
    if isinstance(instance, TweetInstance):
        return "tweet_stance" if instance.subtask == "stance" else "tweet_sentiment"
    raise TypeError(f"not a task instance: {type(instance).__name__}")


# ---------------------------------------------------------------------------
# Synthetic generators

def gen_arc(seed: int, k: int, n: int, length: int) -> ArcInstance:
    """Seeded instance with one contiguous nonzero object per sequence."""
    if not 1 <= k <= 3:
        raise ValueError(f"k must be in [1, 3], got {k}")
    if n not in (3, 4):
        raise ValueError(f"n must be 3 or 4, got {n}")
    placements = [
        (value, size, pos)
        for value in range(1, 10)
        for size in range(1, length - k + 1)
        for pos in range(0, length - size - k + 1)
    ]
    if len(placements) < n + 1:
        raise ValueError(f"length {length} cannot host {n + 1} distinct objects with k={k}")
    rng = random.Random(seed)
    chosen = rng.sample(placements, n + 1)

    def build(value: int, size: int, pos: int) -> list[int]:
        seq = [0] * length
        seq[pos:pos + size] = [value] * size
        return seq

    sequences = [build(*c) for c in chosen]
    pairs = tuple((tuple(s), tuple(shift_oracle(s, k))) for s in sequences[:n])
    target = tuple(sequences[n])
    return ArcInstance(pairs=pairs, target_input=target,
                       gold_output=tuple(shift_oracle(target, k)), k=k, n=n)


def _dyck_suffix_counts(max_len: int) -> list[list[int]]:
    """counts[l][d] = valid continuations of length l from depth d ending at depth >= 1."""
    counts = [[0] * (max_len + 2) for _ in range(max_len + 1)]
    for d in range(1, max_len + 2):
        counts[0][d] = 1
    for l in range(1, max_len + 1):
        for d in range(0, max_len + 1):
            total = 4 * counts[l - 1][d + 1] if d + 1 <= max_len + 1 else 0
            if d > 0:
                total += counts[l - 1][d - 1]
            counts[l][d] = total
    return counts


def _sample_dyck_prefix(rng: random.Random, max_len: int, counts: list[list[int]]) -> str:
    """Uniform draw over all unbalanced valid prefixes of length 1..max_len."""
    weights = [counts[length][0] for length in range(1, max_len + 1)]
    total = sum(weights)
    pick = rng.randrange(total)
    length = 1
    for w in weights:
        if pick < w:
            break
        pick -= w
        length += 1
    out: list[str] = []
    stack: list[str] = []
    depth = 0
    for remaining in range(length, 0, -1):
        open_ways = 4 * counts[remaining - 1][depth + 1]
        close_ways = counts[remaining - 1][depth - 1] if depth > 0 else 0
        pick = rng.randrange(open_ways + close_ways)
        if pick < open_ways:
            opener = _OPENERS[pick // counts[remaining - 1][depth + 1]]
            out.append(opener)
            stack.append(opener)
            depth += 1
        else:
            out.append(_CLOSER_FOR[stack.pop()])
            depth -= 1
    return "".join(out)


def gen_dyck(seed: int, n: int, max_len: int) -> DyckInstance:
    """Seeded instance of n demonstration pairs plus one target, all distinct."""
    if not 1 <= n <= 5:
        raise ValueError(f"n must be in [1, 5], got {n}")
    if max_len < 2:
        raise ValueError(f"max_len must be >= 2, got {max_len}")
    rng = random.Random(seed)
    counts = _dyck_suffix_counts(max_len)
    prefixes: list[str] = []
    attempts = 0
    while len(prefixes) < n + 1:
        attempts += 1
        if attempts > 1000 * (n + 1):
            raise ValueError(f"cannot draw {n + 1} distinct prefixes with max_len={max_len}")
        candidate = _sample_dyck_prefix(rng, max_len, counts)
        if candidate not in prefixes:
            prefixes.append(candidate)
    pairs = tuple((p, dyck_oracle(p)) for p in prefixes[:n])
    target = prefixes[n]
    return DyckInstance(pairs=pairs, target_prefix=target,
                        gold_closing=dyck_oracle(target), n=n)


# ---------------------------------------------------------------------------
# Problem construction

def to_problem(instance: Instance, stance_target: str = DEFAULT_STANCE_TARGET) -> Problem:
    """Build the templated problem (spans plus gold) for one instance."""
    task_id = task_id_of(instance)
    if isinstance(instance, (ArcInstance, DyckInstance)):
        if isinstance(instance, ArcInstance):
            kind = "sequence"
            pair_texts = [(sequence_text(i), sequence_text(o)) for i, o in instance.pairs]
            target_text = sequence_text(instance.target_input)
            gold = instance.gold_output
        else:
            kind = "brackets"
            pair_texts = list(instance.pairs)
            target_text = instance.target_prefix
            gold = instance.gold_closing
        lines = []
        spans = []
        for i, (inp, out) in enumerate(pair_texts, start=1):
            lines.append(f"Input: {{in{i}}} Output: {{out{i}}}")
            spans.append(SymbolSpan(f"in{i}", inp, kind, f"in{i}"))
            spans.append(SymbolSpan(f"out{i}", out, kind, f"out{i}"))
        lines.append("Input: {target} Output:")
        spans.append(SymbolSpan("target", target_text, kind, "target"))
        return Problem(task_id, "\n".join(lines), tuple(spans), gold,
                       meta={"n": instance.n, **({"k": instance.k} if kind == "sequence" else {})})

    if isinstance(instance, PropertyInstance):
        template = "{mol}\n" + PROPERTY_QUESTIONS[instance.dataset]
        spans = (SymbolSpan("mol", instance.smiles, "smiles", "mol"),)
        return Problem(task_id, template, spans, instance.label,
                       meta={"dataset": instance.dataset})

    if isinstance(instance, EmojiInstance):
        template = (
            "Emoji: {e}\n"
            "Score this emoji for each of the following emotions on a scale from 0 to 1: "
            + ", ".join(EMOTIONS) + ". Give eight numbers separated by commas."
        )
        spans = (SymbolSpan("e", instance.grapheme, "emoji", "e"),)
        return Problem(task_id, template, spans, instance.human_ratings,
                       meta={"codepoints": instance.emoji})

    if isinstance(instance, TableInstance):
        if instance.subtask == "qa":
            template = "{table}\nQuestion: {q}\nAnswer:"
        else:
            template = "{table}\nStatement: {q}\nTrue or False?"
        spans = (
            SymbolSpan("table", instance.table_raw, "table", "table"),
            SymbolSpan("q", instance.question_or_claim, "generic", "q"),
        )
        return Problem(task_id, template, spans, instance.gold, meta={})

    if isinstance(instance, TweetInstance):
        if instance.subtask == "stance":
            template = ("Tweet: {t}\nWhat is the stance of this tweet towards "
                        + stance_target + "? Favor or Against?")
        else:
            template = "Tweet: {t}\nIs the sentiment of this tweet Positive or Negative?"
        spans = (SymbolSpan("t", instance.text, "tweet", "t"),)
        return Problem(task_id, template, spans, instance.label, meta={})

    raise TypeError(f"not a task instance: {type(instance).__name__}")


def build_task_prompt(instance: Instance, method: MethodConfig,
                      renderings: list[Rendering] | None = None,
                      stance_target: str = DEFAULT_STANCE_TARGET) -> Query:
    """Format the instance and delegate integration to the core build ops."""
    return build_query(to_problem(instance, stance_target), method, renderings)


def gold_response(instance: Instance) -> str:
    """The gold answer rendered the way an ideal (echo) responder would say it."""
    if isinstance(instance, ArcInstance):
        return sequence_text(instance.gold_output)
    if isinstance(instance, DyckInstance):
        return instance.gold_closing
    if isinstance(instance, PropertyInstance):
        return instance.label
    if isinstance(instance, EmojiInstance):
        return ", ".join(repr(x) for x in instance.human_ratings)
    if isinstance(instance, TableInstance):
        return f"Answer: {instance.gold[0]}" if instance.subtask == "qa" else instance.gold
    if isinstance(instance, TweetInstance):
        return instance.label
    raise TypeError(f"not a task instance: {type(instance).__name__}")


# ---------------------------------------------------------------------------
# Answer extraction

_SEQUENCE_RUN_RE = re.compile(r"\d(?:,\d)+")
_COUNT_TOKEN_RE = re.compile(
    r"\b(?:one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve|thirteen|"
    r"fourteen|fifteen|sixteen|seventeen|eighteen|nineteen|twenty|[1-9]\d*) \d", re.IGNORECASE)
_BRACKET_RUN_RE = re.compile(r"[()\[\]{}<>]+")
_BRACKET_NAME_RE = re.compile(
    r"(?:open|close)\s+(?:parenthesis|square\s+bracket|curly\s+brace|angle\s+bracket)"
    r"|less\s+than\s+sign|greater\s+than\s+sign", re.IGNORECASE)
_NAME_GAP_RE = re.compile(r"(?:[\s,]|\band\b|\bthen\b)*", re.IGNORECASE)
_NUMBER_RE = re.compile(r"-?(?:\d+\.\d+|\.\d+|\d+)")


def _extract_sequence(response: str) -> tuple[int, ...]:
    runs = _SEQUENCE_RUN_RE.findall(response)
    if runs:
        return tuple(int(d) for d in runs[-1].split(","))
    # Fall back to answers given as run descriptions.
    for segment in reversed(re.split(r"[.\n;:!?]", response)):
        segment = segment.strip()
        for m in _COUNT_TOKEN_RE.finditer(segment):
            candidate = segment[m.start():].strip().lower()
            try:
                return tuple(converters.parse_sequence_description(candidate))
            except Exception:
                continue
    raise ExtractionMissError("no digit sequence found in response")


def _extract_brackets(response: str) -> str:
    runs = _BRACKET_RUN_RE.findall(response)
    if runs:
        return runs[-1]
    matches = list(_BRACKET_NAME_RE.finditer(response))
    if not matches:
        raise ExtractionMissError("no bracket symbols or names found in response")
    # Keep the trailing cluster of adjacent name phrases.
    cluster = [matches[-1]]
    for m in reversed(matches[:-1]):
        gap = response[m.end():cluster[0].start()]
        if _NAME_GAP_RE.fullmatch(gap):
            cluster.insert(0, m)
        else:
            break
    return converters.brackets_from_names([m.group(0) for m in cluster])


def _extract_label(response: str, words: tuple[str, str]) -> str:
    best = None
    best_pos = -1
    for word in words:
        for m in re.finditer(rf"\b{re.escape(word)}\b", response, re.IGNORECASE):
            if m.start() > best_pos:
                best_pos = m.start()
                best = word
    if best is None:
        raise ExtractionMissError(f"none of {words} found in response")
    return best


def _extract_scores(response: str) -> tuple[float | None, ...]:
    values = [float(tok) for tok in _NUMBER_RE.findall(response)]
    if not values:
        raise ExtractionMissError("no numeric scores found in response")
    if len(values) >= len(EMOTIONS):
        values = values[-len(EMOTIONS):]
    clamped = [min(1.0, max(0.0, v)) for v in values]
    missing = len(EMOTIONS) - len(clamped)
    return tuple(clamped) + (None,) * missing


def _extract_qa_text(response: str) -> str:
    marker = None
    for m in re.finditer(r"\banswer\s*:", response, re.IGNORECASE):
        marker = m
    if marker is not None:
        tail = response[marker.end():].strip()
        if tail:
            return tail
    lines = [line.strip() for line in response.splitlines() if line.strip()]
    if not lines:
        raise ExtractionMissError("empty response")
    return lines[-1]


def extract_answer(task_id: str, raw_response: str):
    """Parse a model response into the task's native answer form."""
    if task_id == "arc":
        return _extract_sequence(raw_response)
    if task_id == "dyck":
        return _extract_brackets(raw_response)
    if task_id in LABEL_WORDS:
        return _extract_label(raw_response, LABEL_WORDS[task_id])
    if task_id == "emoji":
        return _extract_scores(raw_response)
    if task_id == "table_qa":
        return _extract_qa_text(raw_response)
    raise ValueError(f"unknown task id {task_id!r}")


def is_correct(instance: Instance, extracted) -> bool:
    """Accuracy-task comparison in symbol space; QA and emoji score elsewhere."""
    if isinstance(instance, ArcInstance):
        return tuple(extracted) == instance.gold_output
    if isinstance(instance, DyckInstance):
        return extracted == instance.gold_closing
    if isinstance(instance, (PropertyInstance, TweetInstance)):
        return extracted == instance.label
    if isinstance(instance, TableInstance) and instance.subtask == "fact":
        return extracted == instance.gold
    raise TypeError(f"no single-label correctness for {type(instance).__name__}")


# ---------------------------------------------------------------------------
# Dataset loading

def _read_jsonl(path: Path):
    with open(path, encoding="utf-8") as fh:
        index = 0
        for line in fh:
            if not line.strip():
                continue
            try:
                yield index, ("ok", json.loads(line))
            except json.JSONDecodeError as exc:
                yield index, ("err", f"invalid JSON: {exc}")
            index += 1


def _read_csv(path: Path, fields: tuple[str, ...], delimiter: str = ","):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            return
        if tuple(h.strip() for h in header) != fields:
            raise DatasetError(f"expected header {','.join(fields)!r}, got {header!r}")
        for index, row in enumerate(reader):
            if len(row) != len(fields):
                yield index, ("err", f"expected {len(fields)} fields, got {len(row)}")
            else:
                yield index, ("ok", dict(zip(fields, row)))


def _infer_shift(pairs) -> int:
    first_in, first_out = pairs[0]
    for k in (1, 2, 3):
        try:
            if list(shift_oracle(first_in, k)) == list(first_out):
                return k
        except ValueError:
            continue
    raise ValueError("no shift in [1, 3] explains the first pair")


def _build_instance(task_id: str, record, property_dataset: str) -> Instance:
    if task_id == "arc":
        pairs = [(p[0], p[1]) for p in record["pairs"]]
        k = record.get("k") or _infer_shift(pairs)
        return ArcInstance(pairs=tuple((tuple(i), tuple(o)) for i, o in pairs),
                           target_input=tuple(record["target"]),
                           gold_output=tuple(record["gold"]),
                           k=int(k), n=len(pairs))
    if task_id == "dyck":
        pairs = tuple((str(p[0]), str(p[1])) for p in record["pairs"])
        return DyckInstance(pairs=pairs, target_prefix=str(record["target"]),
                            gold_closing=str(record["gold"]), n=len(pairs))
    if task_id == "property":
        return PropertyInstance(smiles=record["smiles"].strip(),
                                label=record["label"].strip().lower(),
                                dataset=property_dataset)
    if task_id == "emoji":
        return EmojiInstance(emoji=record["codepoints"],
                             human_ratings=tuple(float(record[e]) for e in EMOTIONS))
    if task_id == "table_qa":
        return TableInstance(table_raw=record["table"],
                             question_or_claim=record["question"],
                             gold=tuple(record["answers"]), subtask="qa")
    if task_id == "table_fact":
        label = record["label"]
        if isinstance(label, bool):
            label = "true" if label else "false"
        return TableInstance(table_raw=record["table"],
                             question_or_claim=record["claim"],
                             gold=str(label).strip().lower(), subtask="fact")
    if task_id in ("tweet_stance", "tweet_sentiment"):
        subtask = "stance" if task_id == "tweet_stance" else "sentiment"
        return TweetInstance(text=record["text"], label=record["label"].strip().lower(),
                             subtask=subtask)
    raise ValueError(f"unknown task id {task_id!r}")


def _iter_raw_records(path: Path, task_id: str):
    if task_id in ("arc", "dyck", "table_qa", "table_fact"):
        yield from _read_jsonl(path)
    elif task_id == "property":
        yield from _read_csv(path, ("smiles", "label"))
    elif task_id == "emoji":
        yield from _read_csv(path, ("codepoints",) + EMOTIONS, delimiter="\t")
    elif task_id in ("tweet_stance", "tweet_sentiment"):
        yield from _read_csv(path, ("text", "label"))
    else:
        raise ValueError(f"unknown task id {task_id!r}")


def verify_records(path: str | Path, task_id: str,
                   property_dataset: str = "Tox21") -> list[tuple[int, str | None]]:
    """Per-record validation report: (index, None) for valid, (index, reason) otherwise."""
    results = []
    for index, (status, payload) in _iter_raw_records(Path(path), task_id):
        if status == "err":
            results.append((index, payload))
            continue
        try:
            _build_instance(task_id, payload, property_dataset)
            results.append((index, None))
        except (KeyError, TypeError, ValueError, Exception) as exc:  # noqa: B014
            results.append((index, f"{type(exc).__name__}: {exc}"))
    return results


def load_dataset(path: str | Path, task_id: str,
                 property_dataset: str = "Tox21") -> list[Instance]:
    """Load and validate every record; any bad record raises with its index."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"no such file: {path}")
    instances = []
    for index, (status, payload) in _iter_raw_records(path, task_id):
        if status == "err":
            raise DatasetError(payload, record_index=index)
        try:
            instances.append(_build_instance(task_id, payload, property_dataset))
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetError(str(exc), record_index=index) from exc
    return instances

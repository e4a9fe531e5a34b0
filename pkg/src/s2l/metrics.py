"""Scoring functions: accuracy, exact match, token F1, Pearson correlation."""

from __future__ import annotations

import math
import re
import string
from collections import Counter

from .errors import DegenerateInputError

_ARTICLES = ("a", "an", "the")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)
_WS_RE = re.compile(r"\s+")


def normalize_answer(text: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace, drop leading articles."""
    text = _WS_RE.sub(" ", text.lower().translate(_PUNCT_TABLE)).strip()
    tokens = text.split()
    while tokens and tokens[0] in _ARTICLES:
        tokens = tokens[1:]
    return " ".join(tokens)


def accuracy(preds: list, golds: list) -> float:
    """Fraction of positions where pred equals gold; inputs are pre-normalized."""
    if len(preds) != len(golds):
        raise ValueError(f"length mismatch: {len(preds)} preds vs {len(golds)} golds")
    if not preds:
        raise ValueError("empty inputs")
    return sum(p == g for p, g in zip(preds, golds)) / len(preds)


def exact_match(pred: str, gold_set: set[str]) -> int:
    """1 iff the normalized prediction equals any normalized gold."""
    if not gold_set:
        raise ValueError("gold set must be non-empty")
    pred_norm = normalize_answer(pred)
    return int(any(pred_norm == normalize_answer(g) for g in gold_set))


def token_f1(pred: str, gold: str) -> float:
    """Harmonic mean of token precision and recall over normalized tokens.

    Both sides empty scores 1, exactly one side empty scores 0.
    """
    pred_tokens = normalize_answer(pred).split()
    gold_tokens = normalize_answer(gold).split()
    if not pred_tokens and not gold_tokens:
        return 1.0
    if not pred_tokens or not gold_tokens:
        return 0.0
    common = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if common == 0:
        return 0.0
    precision = common / len(pred_tokens)
    recall = common / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def pearson(xs: list[float], ys: list[float]) -> float:
    """Product-moment correlation; errors on constant input instead of returning 0."""
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("need at least two points")
    n = len(xs)
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise DegenerateInputError("correlation undefined: zero variance")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)
    return max(-1.0, min(1.0, r))

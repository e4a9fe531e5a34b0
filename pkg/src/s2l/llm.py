"""Chat-completion backends (live HTTP, mock, replay) with a write-through cache.

The live wire protocol is a JSON POST of ``{model, messages, temperature,
max_tokens}`` to a chat-completions endpoint with bearer-token auth; the
assistant text of the first choice is the result. Every live response is
cached under a content digest so runs are resumable and replayable.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from .core import Rendering, SymbolSpan
from .errors import (
    BackendError,
    CacheMissError,
    EmptyResponseError,
)

ROLES = ("system", "user", "assistant")

MAX_ATTEMPTS = 3
BACKOFF_START_S = 1.0


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if not self.content:
            raise ValueError("message content must be non-empty")


@dataclass(frozen=True)
class CompletionRequest:
    model: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_tokens: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "messages", tuple(self.messages))
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if not any(m.role == "user" for m in self.messages):
            raise ValueError("request must contain at least one user message")
        if self.max_tokens is not None and self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")

    @property
    def last_user_content(self) -> str:
        return [m.content for m in self.messages if m.role == "user"][-1]


def user_request(model: str, text: str, max_tokens: int | None = None) -> CompletionRequest:
    """Single-turn request with one user message at temperature 0."""
    return CompletionRequest(model=model, messages=(ChatMessage("user", text),),
                             max_tokens=max_tokens)


def cache_key(request: CompletionRequest) -> str:
    """Stable content digest over the request fields."""
    payload = {
        "model": request.model,
        "messages": [{"role": m.role, "content": m.content} for m in request.messages],
        "temperature": request.temperature,
        "max_tokens": request.max_tokens,
    }
    blob = json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class ResponseCache:
    """One file per digest; the first stored response wins, duplicates are dropped."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._lock = threading.Lock()

    def _body_path(self, key: str) -> Path:
        return self.directory / f"{key}.txt"

    def get(self, key: str) -> str | None:
        path = self._body_path(key)
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    def put(self, key: str, text: str, meta: dict | None = None) -> None:
        with self._lock:
            body = self._body_path(key)
            if body.exists():
                return
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = body.with_suffix(".tmp")
            tmp.write_text(text, encoding="utf-8")
            os.replace(tmp, body)
            sidecar = body.with_suffix(".json")
            sidecar.write_text(
                json.dumps(meta or {}, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
                encoding="utf-8")


class MockBackend:
    """Fixture-backed backend mapping the last user message to a canned reply."""

    def __init__(self, fixtures: dict[str, str] | None = None,
                 reply_fn: Callable[[CompletionRequest], str] | None = None):
        self.fixtures = dict(fixtures or {})
        self.reply_fn = reply_fn

    def prime(self, content: str, reply: str) -> None:
        self.fixtures[content] = reply

    def reply(self, request: CompletionRequest) -> str:
        content = request.last_user_content
        if content in self.fixtures:
            return self.fixtures[content]
        if self.reply_fn is not None:
            return self.reply_fn(request)
        raise BackendError(f"mock backend has no fixture for {content[:80]!r}")


class LiveBackend:
    """HTTP chat-completions backend with retries and cache write-through."""

    def __init__(self, endpoint: str, token_env: str = "", cache: ResponseCache | None = None,
                 transport: Callable[[str, dict, dict], tuple[int, str]] | None = None,
                 sleep: Callable[[float], None] = time.sleep):
        if not endpoint:
            raise ValueError("live backend requires an endpoint URL")
        self.endpoint = endpoint
        self.token_env = token_env
        self.cache = cache
        self.transport = transport or _http_post
        self.sleep = sleep

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.token_env, "") if self.token_env else ""
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def reply(self, request: CompletionRequest) -> str:
        payload = {
            "model": request.model,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "temperature": request.temperature,
        }
        if request.max_tokens is not None:
            payload["max_tokens"] = request.max_tokens
        delay = BACKOFF_START_S
        last_error: BackendError | None = None
        for attempt in range(MAX_ATTEMPTS):
            try:
                status, body = self.transport(self.endpoint, payload, self._headers())
            except OSError as exc:
                last_error = BackendError(f"transport failure: {exc}")
            else:
                if status == 200:
                    return _parse_choice(body)
                last_error = BackendError(f"HTTP {status}: {body[:200]}", status=status)
                if not (status == 429 or status >= 500):
                    raise last_error
            if attempt + 1 < MAX_ATTEMPTS:
                self.sleep(delay)
                delay *= 2
        raise last_error


class ReplayBackend:
    """Serves responses from a cache; optional live fallback when not strict."""

    def __init__(self, cache: ResponseCache, strict: bool = True,
                 fallback: LiveBackend | None = None):
        self.cache = cache
        self.strict = strict
        self.fallback = fallback

    def reply(self, request: CompletionRequest) -> str:
        cached = self.cache.get(cache_key(request))
        if cached is not None:
            return cached
        if not self.strict and self.fallback is not None:
            text = self.fallback.reply(request)
            self.cache.put(cache_key(request), text, {"model": request.model})
            return text
        raise CacheMissError(f"no cached response for digest {cache_key(request)}")


Backend = MockBackend | LiveBackend | ReplayBackend


def _http_post(url: str, payload: dict, headers: dict) -> tuple[int, str]:
    import requests

    response = requests.post(url, json=payload, headers=headers, timeout=60)
    return response.status_code, response.text


def _parse_choice(body: str) -> str:
    try:
        data = json.loads(body)
        return data["choices"][0]["message"]["content"]
    except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
        raise BackendError(f"unparsable completion body: {exc}") from exc


def complete(request: CompletionRequest, backend: Backend) -> str:
    """Return the assistant text; live calls read and write the cache."""
    if isinstance(backend, LiveBackend) and backend.cache is not None:
        key = cache_key(request)
        cached = backend.cache.get(key)
        if cached is not None:
            return cached
        text = backend.reply(request)
        if not text.strip():
            raise EmptyResponseError("backend returned empty assistant text")
        backend.cache.put(key, text, {"model": request.model, "endpoint": backend.endpoint})
        return text
    text = backend.reply(request)
    if not text.strip():
        raise EmptyResponseError("backend returned empty assistant text")
    return text


# ---------------------------------------------------------------------------
# Symbol conversion with a model

# Which span kind each task's conversion prompt is written for.
KIND_FOR_TASK = {
    "arc": "sequence",
    "dyck": "brackets",
    "property": "smiles",
    "emoji": "emoji",
    "table_qa": "table",
    "table_fact": "table",
    "tweet_stance": "tweet",
    "tweet_sentiment": "tweet",
}


@dataclass(frozen=True)
class ConversionPrompt:
    """Task-specific template with a single ``{symbol}`` placeholder."""

    task_id: str
    template: str

    def __post_init__(self):
        if self.template.count("{symbol}") != 1:
            raise ValueError("conversion template must contain exactly one {symbol}")

    def fill(self, raw_text: str) -> str:
        return self.template.replace("{symbol}", raw_text)


def load_conversion_prompt(task_id: str, prompts_dir: str | Path | None = None) -> ConversionPrompt:
    """Read the editable prompt file for a task; bundled defaults ship with the package."""
    if prompts_dir is not None:
        text = (Path(prompts_dir) / f"{task_id}.txt").read_text(encoding="utf-8")
    else:
        text = (resources.files("s2l") / "data" / "prompts" / f"{task_id}.txt").read_text(
            encoding="utf-8")
    return ConversionPrompt(task_id=task_id, template=text.strip())


def conversion_request(span: SymbolSpan, prompt: ConversionPrompt, model: str) -> CompletionRequest:
    expected = KIND_FOR_TASK.get(prompt.task_id)
    if expected is not None and span.kind != expected:
        raise ValueError(
            f"prompt for task {prompt.task_id!r} is not written for {span.kind!r} spans")
    return user_request(model, prompt.fill(span.raw_text))


def convert_with_model(span: SymbolSpan, prompt: ConversionPrompt,
                       backend: Backend, model: str) -> Rendering:
    """Ask the backend for a language rendering of one span."""
    request = conversion_request(span, prompt, model)
    text = complete(request, backend).strip()
    if not text:
        raise EmptyResponseError(f"empty conversion for span {span.id!r}")
    return Rendering(span.id, text, "llm", f"prompt:{prompt.task_id}")

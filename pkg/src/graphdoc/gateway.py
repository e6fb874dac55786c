"""Uniform chat-completion access with record/replay and output parsing.

The gateway hides which backend answers a request: a live HTTP endpoint, a
deterministic scripted stand-in, or a transcript replayed from disk. Every
request is keyed by a digest of (model, system text, user text, temperature)
so a recorded transcript can answer the exact same request later.
"""
from __future__ import annotations

import hashlib
import json
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx

DEFAULT_TEMPERATURE = 0.1
DEFAULT_MAX_TOKENS = 4096

PURPOSE_TAGS = ("relevance", "global_filter", "testgen", "codegen", "refine")


class GatewayError(Exception):
    """Base class for gateway failures."""


class TransportError(GatewayError):
    """Backend unreachable or kept failing after retries."""


class AuthError(GatewayError):
    """Backend rejected the credentials."""


class ReplayMiss(GatewayError):
    """Replay transcript has no entry for the request digest."""


class ParseError(GatewayError):
    """Model output did not contain the constrained structure."""


class EmptyCode(GatewayError):
    """Model output contained no code at all."""


@dataclass(frozen=True)
class ChatRequest:
    system_text: str
    user_text: str
    model_id: str = "default"
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: int = DEFAULT_MAX_TOKENS
    purpose_tag: str = "codegen"

    def __post_init__(self):
        if not self.user_text:
            raise ValueError("user_text must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature out of range: {self.temperature}")
        if self.max_tokens <= 0:
            raise ValueError(f"max_tokens must be positive: {self.max_tokens}")
        if self.purpose_tag not in PURPOSE_TAGS:
            raise ValueError(f"unknown purpose tag: {self.purpose_tag!r}")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    latency: float = 0.0


@dataclass
class UsageRecord:
    purpose_tag: str
    model_id: str
    prompt_tokens: int
    completion_tokens: int
    latency: float


def request_digest(req: ChatRequest) -> str:
    payload = json.dumps(
        [req.model_id, req.system_text, req.user_text, req.temperature],
        sort_keys=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class Transcript:
    """Ordered digest -> response log with JSONL persistence.

    mode 'record' appends every served response, 'replay' answers from the
    log and refuses unseen digests, 'passthrough' stays out of the way.
    """

    def __init__(self, mode: str = "passthrough", entries=None):
        if mode not in ("record", "replay", "passthrough"):
            raise ValueError(f"unknown transcript mode: {mode!r}")
        self.mode = mode
        self.entries = list(entries or [])
        self._by_digest = {}
        for digest, resp in self.entries:
            self._by_digest.setdefault(digest, resp)

    def append(self, digest: str, resp: ChatResponse) -> None:
        self.entries.append((digest, resp))
        self._by_digest.setdefault(digest, resp)

    def lookup(self, digest: str) -> ChatResponse:
        try:
            return self._by_digest[digest]
        except KeyError:
            raise ReplayMiss(f"no transcript entry for digest {digest[:12]}…") from None

    def dumps(self) -> str:
        lines = []
        for digest, resp in self.entries:
            lines.append(
                json.dumps(
                    {
                        "digest": digest,
                        "text": resp.text,
                        "prompt_tokens": resp.prompt_tokens,
                        "completion_tokens": resp.completion_tokens,
                        "latency": resp.latency,
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(lines) + ("\n" if lines else "")

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path, mode: str = "replay") -> "Transcript":
        entries = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            raw = json.loads(line)
            entries.append(
                (
                    raw["digest"],
                    ChatResponse(
                        text=raw["text"],
                        prompt_tokens=int(raw.get("prompt_tokens", 0)),
                        completion_tokens=int(raw.get("completion_tokens", 0)),
                        latency=float(raw.get("latency", 0.0)),
                    ),
                )
            )
        return cls(mode=mode, entries=entries)


class HttpBackend:
    """OpenAI-style chat-completions endpoint over HTTP."""

    def __init__(self, base_url: str, api_key: str = "", timeout: float = 120.0, retries: int = 3):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.timeout = timeout
        self.retries = retries
        self._client = httpx.Client(timeout=timeout)

    def _sleep(self, seconds: float) -> None:
        time.sleep(seconds)

    def __call__(self, req: ChatRequest) -> ChatResponse:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": req.model_id,
            "messages": [
                {"role": "system", "content": req.system_text},
                {"role": "user", "content": req.user_text},
            ],
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
        }
        last_err = None
        for attempt in range(self.retries):
            start = time.monotonic()
            try:
                resp = self._client.post(
                    f"{self.base_url}/chat/completions",
                    json=payload,
                    headers=headers,
                )
            except httpx.HTTPError as exc:
                last_err = exc
                self._sleep(0.5 * 2**attempt)
                continue
            if resp.status_code in (401, 403):
                raise AuthError(f"backend rejected credentials ({resp.status_code})")
            if resp.status_code >= 400:
                last_err = RuntimeError(f"HTTP {resp.status_code}: {resp.text[:200]}")
                self._sleep(0.5 * 2**attempt)
                continue
            data = resp.json()
            usage = data.get("usage", {})
            return ChatResponse(
                text=data["choices"][0]["message"]["content"],
                prompt_tokens=int(usage.get("prompt_tokens", 0)),
                completion_tokens=int(usage.get("completion_tokens", 0)),
                latency=time.monotonic() - start,
            )
        raise TransportError(f"backend kept failing: {last_err}")


class ScriptedBackend:
    """Deterministic backend fed from per-purpose response queues.

    Accepts either a flat list (served in order to any request) or a dict
    mapping purpose tags to lists. Token counts are crude length estimates
    so cost accounting has something to chew on.
    """

    def __init__(self, script):
        if isinstance(script, dict):
            self._queues = {k: list(v) for k, v in script.items()}
            self._flat = None
        else:
            self._queues = {}
            self._flat = list(script)
        self.calls = []

    def __call__(self, req: ChatRequest) -> ChatResponse:
        self.calls.append(req)
        if self._flat is not None:
            if not self._flat:
                raise TransportError("scripted backend ran out of responses")
            text = self._flat.pop(0)
        else:
            queue = self._queues.get(req.purpose_tag)
            if not queue:
                raise TransportError(
                    f"scripted backend has no response for {req.purpose_tag!r}"
                )
            text = queue.pop(0)
        if callable(text):
            text = text(req)
        return ChatResponse(
            text=text,
            prompt_tokens=max(1, len(req.system_text + req.user_text) // 4),
            completion_tokens=max(1, len(text) // 4),
            latency=0.0,
        )


class Gateway:
    """Front door for completions; owns the transcript and usage ledger."""

    def __init__(self, backend=None, transcript: Transcript | None = None):
        self.backend = backend
        self.transcript = transcript or Transcript("passthrough")
        self.usage_records = []
        self._lock = threading.Lock()

    def complete(self, req: ChatRequest) -> ChatResponse:
        digest = request_digest(req)
        if self.transcript.mode == "replay":
            resp = self.transcript.lookup(digest)
        else:
            if self.backend is None:
                raise TransportError("gateway has no backend configured")
            resp = self.backend(req)
            if self.transcript.mode == "record":
                with self._lock:
                    self.transcript.append(digest, resp)
        with self._lock:
            self.usage_records.append(
                UsageRecord(
                    purpose_tag=req.purpose_tag,
                    model_id=req.model_id,
                    prompt_tokens=resp.prompt_tokens,
                    completion_tokens=resp.completion_tokens,
                    latency=resp.latency,
                )
            )
        return resp


# ---------------------------------------------------------------------------
# Constrained-output parsers


_STRING_TOKEN = re.compile(r'"((?:[^"\\]|\\.)*)"')


def parse_string_list(text: str) -> list:
    """Extract the first well-formed bracketed list of double-quoted strings.

    Duplicates are dropped, first occurrence wins. '[]' parses to an empty
    list. Raises ParseError when no well-formed list exists anywhere.
    """
    for start in range(len(text)):
        if text[start] != "[":
            continue
        items = _try_parse_list(text, start)
        if items is not None:
            seen = []
            for item in items:
                if item not in seen:
                    seen.append(item)
            return seen
    raise ParseError("no bracketed double-quoted list in output")


def _try_parse_list(text: str, start: int):
    i = start + 1
    n = len(text)

    def skip_ws(j):
        while j < n and text[j].isspace():
            j += 1
        return j

    i = skip_ws(i)
    if i < n and text[i] == "]":
        return []
    items = []
    while True:
        m = _STRING_TOKEN.match(text, i)
        if not m:
            return None
        try:
            items.append(json.loads(m.group(0)))
        except json.JSONDecodeError:
            return None
        i = skip_ws(m.end())
        if i >= n:
            return None
        if text[i] == "]":
            return items
        if text[i] != ",":
            return None
        i = skip_ws(i + 1)


_FIRST_WORD = re.compile(r"[A-Za-z]+")


def parse_yes_no(text: str) -> bool:
    """True iff the first word of the output is 'yes', case-insensitively.

    Anything else, including empty output, is False. Never raises.
    """
    m = _FIRST_WORD.search(text or "")
    return bool(m) and m.group(0).lower() == "yes"


_FENCE = re.compile(r"```[a-zA-Z0-9_+-]*[ \t]*\r?\n(.*?)```", re.DOTALL)


def extract_code_block(text: str) -> str:
    """Return the last fenced code block; without fences, the whole text.

    Raises EmptyCode when the result is blank either way.
    """
    blocks = _FENCE.findall(text or "")
    candidate = blocks[-1] if blocks else (text or "")
    candidate = candidate.strip()
    if not candidate:
        raise EmptyCode("output contained no code")
    return candidate

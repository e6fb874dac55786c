"""Model gateway: digests, transcripts, backends, output parsers."""
import json
import threading

import pytest

from graphdoc.gateway import (
    AuthError,
    ChatRequest,
    ChatResponse,
    EmptyCode,
    Gateway,
    HttpBackend,
    ParseError,
    ReplayMiss,
    ScriptedBackend,
    Transcript,
    TransportError,
    extract_code_block,
    parse_string_list,
    parse_yes_no,
    request_digest,
)


def req(text="hello", **kw):
    return ChatRequest(system_text="sys", user_text=text, **kw)


def test_digest_depends_on_payload_only():
    a = request_digest(req("one"))
    assert a == request_digest(req("one"))
    assert a != request_digest(req("two"))
    assert a != request_digest(req("one", temperature=0.7))
    assert a != request_digest(req("one", model_id="other"))
    # purpose tag is bookkeeping, not identity
    assert a == request_digest(req("one", purpose_tag="refine"))


def test_chat_request_validation():
    with pytest.raises(ValueError):
        ChatRequest(system_text="s", user_text="u", temperature=-1)
    with pytest.raises(ValueError):
        ChatRequest(system_text="s", user_text="u", purpose_tag="bogus")


def test_scripted_backend_queues_by_purpose():
    backend = ScriptedBackend({"codegen": ["first", "second"]})
    gw = Gateway(backend=backend)
    assert gw.complete(req(purpose_tag="codegen")).text == "first"
    assert gw.complete(req(purpose_tag="codegen")).text == "second"
    with pytest.raises(TransportError):
        gw.complete(req(purpose_tag="codegen"))
    with pytest.raises(TransportError):
        gw.complete(req(purpose_tag="testgen"))
    assert len(backend.calls) == 4


def test_record_then_replay_round_trip(tmp_path):
    backend = ScriptedBackend(["alpha", "beta"])
    recording = Gateway(backend=backend, transcript=Transcript("record"))
    r1 = recording.complete(req("q1"))
    r2 = recording.complete(req("q2"))
    path = tmp_path / "t.jsonl"
    recording.transcript.save(path)

    replaying = Gateway(backend=None, transcript=Transcript.load(path, "replay"))
    assert replaying.complete(req("q2")).text == r2.text
    assert replaying.complete(req("q1")).text == r1.text
    # replay serves latencies from the transcript, not the wall clock
    assert replaying.complete(req("q1")).latency == r1.latency
    with pytest.raises(ReplayMiss):
        replaying.complete(req("never asked"))


def test_replay_first_entry_wins(tmp_path):
    t = Transcript("record")
    digest = request_digest(req("same"))
    t.append(digest, ChatResponse("one", 1, 1, 0.0))
    t.append(digest, ChatResponse("two", 1, 1, 0.0))
    path = tmp_path / "t.jsonl"
    t.save(path)
    replay = Transcript.load(path, "replay")
    assert replay.lookup(digest).text == "one"


def test_usage_records_accumulate():
    gw = Gateway(backend=ScriptedBackend(["a", "b"]))
    gw.complete(req("1", purpose_tag="relevance"))
    gw.complete(req("2", purpose_tag="codegen"))
    tags = [u.purpose_tag for u in gw.usage_records]
    assert tags == ["relevance", "codegen"]
    assert all(u.prompt_tokens > 0 for u in gw.usage_records)


def test_gateway_thread_safety_smoke():
    gw = Gateway(backend=ScriptedBackend(["x"] * 64))
    threads = [
        threading.Thread(target=lambda: gw.complete(req("t")))
        for _ in range(64)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(gw.usage_records) == 64


class _Resp:
    def __init__(self, status_code, payload):
        self.status_code = status_code
        self._payload = payload
        self.text = json.dumps(payload)

    def json(self):
        return self._payload


def test_http_backend_auth_error_is_immediate(monkeypatch):
    backend = HttpBackend(base_url="http://example.invalid", api_key="k")
    calls = []

    def fake_post(url, **kwargs):
        calls.append(url)
        return _Resp(401, {"error": "no"})

    monkeypatch.setattr(backend._client, "post", fake_post)
    with pytest.raises(AuthError):
        backend(req("x"))
    assert len(calls) == 1  # no retries on auth failures


def test_http_backend_retries_then_fails(monkeypatch):
    backend = HttpBackend(base_url="http://example.invalid", api_key="k", retries=3)
    monkeypatch.setattr(backend, "_sleep", lambda s: None)
    calls = []

    def fake_post(url, **kwargs):
        calls.append(url)
        return _Resp(500, {"error": "boom"})

    monkeypatch.setattr(backend._client, "post", fake_post)
    with pytest.raises(TransportError):
        backend(req("x"))
    assert len(calls) == 3


def test_http_backend_parses_completion(monkeypatch):
    backend = HttpBackend(base_url="http://example.invalid", api_key="k")
    payload = {
        "choices": [{"message": {"content": "the answer"}}],
        "usage": {"prompt_tokens": 12, "completion_tokens": 5},
    }
    monkeypatch.setattr(
        backend._client, "post", lambda url, **kw: _Resp(200, payload)
    )
    resp = backend(req("x"))
    assert resp.text == "the answer"
    assert resp.prompt_tokens == 12
    assert resp.completion_tokens == 5


# ---------------------------------------------------------------------------
# Parsers


def test_parse_string_list():
    assert parse_string_list('noise ["a", "b", "a"] trailing') == ["a", "b"]
    assert parse_string_list("[]") == []
    assert parse_string_list('[1, 2] then ["x"]') == ["x"]
    assert parse_string_list('["with \\"quote\\""]') == ['with "quote"']
    with pytest.raises(ParseError):
        parse_string_list("no list here")
    with pytest.raises(ParseError):
        parse_string_list("[unterminated")


def test_parse_yes_no():
    assert parse_yes_no("Yes")
    assert parse_yes_no("  yes, because")
    assert not parse_yes_no("No")
    assert not parse_yes_no("Maybe yes")
    assert not parse_yes_no("")


def test_extract_code_block():
    text = "prose\n```python\nx = 1\n```\nmore\n```\ny = 2\n```\n"
    assert extract_code_block(text) == "y = 2"  # last block wins
    assert extract_code_block("plain code, no fences") == "plain code, no fences"
    with pytest.raises(EmptyCode):
        extract_code_block("```python\n\n```")
    with pytest.raises(EmptyCode):
        extract_code_block("   ")

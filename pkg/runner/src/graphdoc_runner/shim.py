# Runner shim. The executor appends this file to a candidate program and
# runs the combination in a fresh interpreter: one JSON request on stdin,
# one sentinel-prefixed JSON response line on stdout, exit code 0.
#
# Nothing above this comment belongs to the shim, so the first thing it
# does is snapshot the functions the candidate defined.
import inspect as _inspect

_CANDIDATE_FUNCS = [
    _obj
    for _obj in list(globals().values())
    if _inspect.isfunction(_obj) and getattr(_obj, "__module__", None) == "__main__"
]

import io as _io
import json as _json
import sys as _sys
import traceback as _traceback

_SENTINEL = "##RESULT## "


def _pick_entry(funcs):
    """The last top-level function that can take the edge list positionally."""
    picked = None
    for fn in funcs:
        try:
            params = list(_inspect.signature(fn).parameters.values())
        except (TypeError, ValueError):
            continue
        for p in params:
            if p.kind in (p.POSITIONAL_ONLY, p.POSITIONAL_OR_KEYWORD, p.VAR_POSITIONAL):
                picked = fn
                break
    return picked


def _serialize_answer(value):
    """Fold answers into plain JSON values; deterministic and idempotent."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, (set, frozenset)):
        items = [_serialize_answer(v) for v in value]
        try:
            return sorted(items)
        except TypeError:
            # mixed types: order by their JSON spelling instead
            return sorted(items, key=lambda x: _json.dumps(x, sort_keys=True))
    if isinstance(value, (list, tuple)):
        return [_serialize_answer(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _serialize_answer(v) for k, v in value.items()}
    item = getattr(value, "item", None)
    if callable(item):
        # numpy scalars and 0-d arrays, without importing numpy
        try:
            unboxed = item()
        except Exception:
            unboxed = value
        if unboxed is not value:
            return _serialize_answer(unboxed)
    return value


def _describe(exc):
    """Exception text with the failing line, but never a throwaway path."""
    text = f"{type(exc).__name__}: {exc}"
    line = None
    for frame in _traceback.extract_tb(exc.__traceback__):
        if frame.filename == __file__:
            line = frame.lineno
    if line is not None:
        text += f" (line {line})"
    return text


def _emit(response):
    try:
        body = _json.dumps(response, separators=(",", ":"))
    except Exception as exc:
        body = _json.dumps(
            {"status": "error", "error": f"unserializable answer: {exc}"},
            separators=(",", ":"),
        )
    _sys.stdout.write(_SENTINEL + body + "\n")
    _sys.stdout.flush()


def _main():
    try:
        request = _json.loads(_sys.stdin.read())
        edges = request["edges"]
        args = dict(request.get("args") or {})
    except Exception as exc:
        _emit({"status": "error", "error": f"bad request: {exc}"})
        return
    entry = _pick_entry(_CANDIDATE_FUNCS)
    if entry is None:
        _emit({"status": "error", "error": "no entry function defined"})
        return
    # whatever the candidate prints must stay off the protocol channel
    real_stdout = _sys.stdout
    _sys.stdout = _io.StringIO()
    try:
        answer = entry(edges, **args)
    except Exception as exc:
        _sys.stdout = real_stdout
        _emit({"status": "error", "error": _describe(exc)})
        return
    finally:
        _sys.stdout = real_stdout
    _emit({"status": "ok", "answer": _serialize_answer(answer)})


if __name__ == "__main__":
    _main()

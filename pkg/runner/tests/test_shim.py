"""Protocol goldens: one request in, exactly one sentinel line out."""
import json
import random
import subprocess
import sys

from graphdoc_runner import shim_source
from graphdoc_runner.shim import _serialize_answer

SENTINEL = "##RESULT## "

SP_PAYLOAD = {
    "edges": [[0, 1, 2.5], [1, 2, 4.8], [0, 2, 8.0]],
    "directed": True,
    "weighted": True,
    "args": {"source": 0, "target": 2, "num_nodes": 3},
}

SP_SOLVER = """
import heapq

def solve(edges, source, target, num_nodes):
    adj = {i: [] for i in range(num_nodes)}
    for u, v, w in edges:
        adj[u].append((v, float(w)))
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u == target:
            return d
        if d > dist.get(u, float("inf")):
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist.get(v, float("inf")):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return None
"""


def run_shim(tmp_path, code, payload):
    script = tmp_path / "candidate_job.py"
    script.write_text(code.rstrip() + "\n\n\n" + shim_source(), encoding="utf-8")
    stdin = payload if isinstance(payload, str) else json.dumps(payload)
    return subprocess.run(
        [sys.executable, str(script)],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=30,
    )


def response_of(proc):
    lines = [l for l in proc.stdout.splitlines() if l.startswith(SENTINEL)]
    assert len(lines) == 1, proc.stdout
    return json.loads(lines[0][len(SENTINEL):])


def test_shortest_path_golden(tmp_path):
    proc = run_shim(tmp_path, SP_SOLVER, SP_PAYLOAD)
    assert proc.returncode == 0
    assert proc.stdout == '##RESULT## {"status":"ok","answer":7.3}\n'


def test_exception_becomes_error_with_line(tmp_path):
    code = "def solve(edges, **kwargs):\n    return 1 / 0\n"
    proc = run_shim(tmp_path, code, SP_PAYLOAD)
    assert proc.returncode == 0
    resp = response_of(proc)
    assert resp["status"] == "error"
    assert "ZeroDivisionError" in resp["error"]
    assert "(line 2)" in resp["error"]
    # error text must be stable across runs: no interpreter paths
    assert "/tmp" not in resp["error"]
    assert "candidate_job" not in resp["error"]


def test_error_text_identical_across_runs(tmp_path):
    code = "def solve(edges, **kwargs):\n    return [] [3]\n"
    first = response_of(run_shim(tmp_path, code, SP_PAYLOAD))
    second = response_of(run_shim(tmp_path, code, SP_PAYLOAD))
    assert first == second
    assert first["status"] == "error"


def test_malformed_stdin(tmp_path):
    proc = run_shim(tmp_path, SP_SOLVER, "this is not json")
    assert proc.returncode == 0
    resp = response_of(proc)
    assert resp["status"] == "error"
    assert resp["error"].startswith("bad request:")


def test_request_missing_edges(tmp_path):
    proc = run_shim(tmp_path, SP_SOLVER, {"args": {}})
    resp = response_of(proc)
    assert resp["status"] == "error"
    assert resp["error"].startswith("bad request:")


def test_noisy_candidate_still_one_sentinel_line(tmp_path):
    code = (
        "print('warming up')\n"
        "def solve(edges, **kwargs):\n"
        "    print('thinking hard')\n"
        "    print('about edges:', edges)\n"
        "    return len(edges)\n"
    )
    proc = run_shim(tmp_path, code, SP_PAYLOAD)
    resp = response_of(proc)  # asserts exactly one sentinel line
    assert resp == {"status": "ok", "answer": 3}
    # prints made while the entry ran were swallowed entirely
    assert "thinking hard" not in proc.stdout
    assert "about edges" not in proc.stdout


def test_no_entry_function(tmp_path):
    proc = run_shim(tmp_path, "ANSWER = 42\n", SP_PAYLOAD)
    resp = response_of(proc)
    assert resp["status"] == "error"
    assert "no entry function" in resp["error"]


def test_entry_is_last_function_with_positional_arg(tmp_path):
    code = (
        "def helper(x):\n"
        "    return x * 2\n"
        "def solve(edges, **kwargs):\n"
        "    return helper(len(edges))\n"
        "def cleanup():\n"
        "    pass\n"
    )
    # cleanup takes nothing positional, so solve stays the entry
    resp = response_of(run_shim(tmp_path, code, SP_PAYLOAD))
    assert resp == {"status": "ok", "answer": 6}

    shadowed = (
        "def solve(edges, **kwargs):\n"
        "    return 'unused'\n"
        "def solve_better(edges, **kwargs):\n"
        "    return 'picked'\n"
    )
    resp = response_of(run_shim(tmp_path, shadowed, SP_PAYLOAD))
    assert resp == {"status": "ok", "answer": "picked"}


def test_kwargs_mismatch_is_an_error(tmp_path):
    code = "def solve(edges):\n    return len(edges)\n"
    resp = response_of(run_shim(tmp_path, code, SP_PAYLOAD))
    assert resp["status"] == "error"
    assert "TypeError" in resp["error"]


def test_set_and_tuple_answers_canonicalize(tmp_path):
    code = (
        "def solve(edges, **kwargs):\n"
        "    return {'nodes': {3, 1, 2}, 'pair': (1, 2), 5: 'five'}\n"
    )
    resp = response_of(run_shim(tmp_path, code, SP_PAYLOAD))
    assert resp == {
        "status": "ok",
        "answer": {"nodes": [1, 2, 3], "pair": [1, 2], "5": "five"},
    }


def test_unserializable_answer_reported(tmp_path):
    code = "def solve(edges, **kwargs):\n    return object()\n"
    resp = response_of(run_shim(tmp_path, code, SP_PAYLOAD))
    assert resp["status"] == "error"
    assert "unserializable answer" in resp["error"]


class _Boxed:
    def __init__(self, value):
        self._value = value

    def item(self):
        return self._value


def random_answer(rng, depth=0):
    kinds = ["int", "float", "bool", "str", "none"]
    if depth < 3:
        kinds += ["list", "tuple", "set", "dict"]
    kind = rng.choice(kinds)
    if kind == "int":
        return rng.randint(-50, 50)
    if kind == "float":
        return round(rng.uniform(-5, 5), 3)
    if kind == "bool":
        return rng.random() < 0.5
    if kind == "str":
        return rng.choice(["a", "bb", "ccc"])
    if kind == "none":
        return None
    if kind in ("list", "tuple"):
        items = [random_answer(rng, depth + 1) for _ in range(rng.randint(0, 4))]
        return tuple(items) if kind == "tuple" else items
    if kind == "set":
        return {rng.randint(0, 30) for _ in range(rng.randint(0, 5))}
    return {f"k{i}": random_answer(rng, depth + 1) for i in range(rng.randint(0, 3))}


def test_serialize_answer_deterministic_and_idempotent():
    rng = random.Random(404)
    for _ in range(300):
        value = random_answer(rng)
        once = _serialize_answer(value)
        assert _serialize_answer(once) == once
        assert json.dumps(once) == json.dumps(_serialize_answer(value))
    # mixed-type sets order by their JSON spelling
    assert _serialize_answer({True, "x"}) == sorted(
        [True, "x"], key=lambda v: json.dumps(v)
    )
    # scalar boxes unbox through .item()
    assert _serialize_answer(_Boxed(7)) == 7
    assert _serialize_answer([_Boxed(1.5)]) == [1.5]

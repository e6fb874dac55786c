"""Driving the CLI through main(argv)."""
import json

import pytest

from graphdoc.cli import main, read_config_file
from graphdoc.datasetgen import read_jsonl


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_read_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# a comment\n"
        "seed = 42\n"
        "gateway=mock  # trailing comment\n"
        "\n"
        "top_k=3\n"
    )
    assert read_config_file(path) == {
        "seed": "42", "gateway": "mock", "top_k": "3",
    }


def test_read_config_file_bad_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("this is not a key value pair\n")
    from graphdoc.cli import CliError

    with pytest.raises(CliError) as err:
        read_config_file(path)
    assert ":1:" in str(err.value)


def test_build_doctree_example(tmp_path, capsys):
    out = tmp_path / "tree.json"
    code, _, err = run(["build-doctree", "--example", "-o", str(out)], capsys)
    assert code == 0
    assert out.exists()
    assert "leaves" in err


def test_build_doctree_from_directory(tmp_path, capsys):
    docs = tmp_path / "docs"
    sub = docs / "alpha"
    sub.mkdir(parents=True)
    (docs / "_index.md").write_text("# Root\nThe root summary.\n")
    (sub / "_index.md").write_text("# Alpha\nChapter summary.\n")
    (sub / "one.md").write_text("# One\nLeaf summary.\n\nLeaf body text.\n")
    out = tmp_path / "tree.json"
    code, _, err = run(["build-doctree", str(docs), "-o", str(out)], capsys)
    assert code == 0
    tree = json.loads(out.read_text())
    assert any(k.endswith("one") for k in tree["nodes"])


def test_build_doctree_requires_source(tmp_path, capsys):
    code, _, err = run(["build-doctree", "-o", str(tmp_path / "t.json")],
                       capsys)
    assert code == 1
    assert "error" in json.loads(err.strip().splitlines()[-1])


def test_gen_dataset_and_error_paths(tmp_path, capsys):
    out = tmp_path / "ds.jsonl"
    code, _, err = run(
        ["gen-dataset", "--tasks", "connectivity,component_count",
         "--instances", "2", "--seed", "5", "-o", str(out)],
        capsys,
    )
    assert code == 0
    records = read_jsonl(out)
    assert len(records) == 4
    assert "4 records over 2 tasks" in err

    code, _, err = run(
        ["gen-dataset", "--tasks", "no_such_task", "-o", str(out)], capsys
    )
    assert code == 1
    assert "no_such_task" in err


def test_retrieve_to_stdout(tmp_path, capsys):
    code, out, _ = run(
        ["retrieve", "--task", "max_flow", "--method", "agentic",
         "--gateway", "mock"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "agentic"
    assert "flow.maximum_flow_value" in payload["selected_leaf_ids"]
    assert payload["judged_node_count"] > 0


def test_retrieve_tfidf_and_keyword(tmp_path, capsys):
    code, out, _ = run(
        ["retrieve", "--query", "maximum flow value", "--method", "tfidf",
         "--top-k", "3"],
        capsys,
    )
    assert code == 0
    assert len(json.loads(out)["leaf_ids"]) == 3

    code, out, _ = run(
        ["retrieve", "--task", "connectivity", "--method", "keyword",
         "-o", str(tmp_path / "r.json")],
        capsys,
    )
    assert code == 0
    saved = json.loads((tmp_path / "r.json").read_text())
    assert saved["method"] == "keyword"


def test_retrieve_needs_task_or_query(capsys):
    code, _, err = run(["retrieve", "--method", "tfidf"], capsys)
    assert code == 1
    assert "task or --query" in json.loads(err.strip().splitlines()[-1])["error"]


def make_dataset(tmp_path, capsys, tasks="connectivity,shortest_path"):
    ds = tmp_path / "ds.jsonl"
    code, _, _ = run(
        ["gen-dataset", "--tasks", tasks, "--instances", "2", "--seed", "3",
         "-o", str(ds)],
        capsys,
    )
    assert code == 0
    return ds


def test_solve_and_evaluate_mock(tmp_path, capsys):
    ds = make_dataset(tmp_path, capsys)
    outdir = tmp_path / "solve"
    code, _, err = run(
        ["solve", "--dataset", str(ds), "--gateway", "mock",
         "--executor", "stub", "-o", str(outdir)],
        capsys,
    )
    assert code == 0
    assert "solved 2/2 task suites" in err
    for name in ("predictions.jsonl", "sessions.json", "retrieval.json",
                 "usage.jsonl", "manifest.json"):
        assert (outdir / name).exists(), name
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["command"] == "solve"
    assert manifest["config"]["records"] == 4

    evaldir = tmp_path / "eval"
    code, _, err = run(
        ["evaluate", "--dataset", str(ds),
         "--predictions", str(outdir / "predictions.jsonl"),
         "--retrieval", str(outdir / "retrieval.json"),
         "--usage", str(outdir / "usage.jsonl"),
         "--no-figures", "-o", str(evaldir)],
        capsys,
    )
    assert code == 0
    assert "macro accuracy 1.0000" in err
    report = json.loads((evaldir / "report.json").read_text())
    assert report["macro_accuracy"] == 1.0
    assert report["retrieval"]  # retrieval metrics present
    assert report["cost"]["total"]["calls"] > 0


def test_solve_record_then_replay_identical(tmp_path, capsys):
    ds = make_dataset(tmp_path, capsys, tasks="connectivity")
    transcript = tmp_path / "transcript.jsonl"
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"

    code, _, _ = run(
        ["solve", "--dataset", str(ds), "--gateway", "record",
         "--transcript", str(transcript), "-o", str(dir_a)],
        capsys,
    )
    assert code == 0
    assert transcript.exists()

    code, _, _ = run(
        ["solve", "--dataset", str(ds), "--gateway", "replay",
         "--transcript", str(transcript), "-o", str(dir_b)],
        capsys,
    )
    assert code == 0
    for name in ("predictions.jsonl", "sessions.json", "retrieval.json",
                 "usage.jsonl"):
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes(), name


def test_solve_record_requires_transcript(tmp_path, capsys):
    ds = make_dataset(tmp_path, capsys, tasks="connectivity")
    code, _, err = run(
        ["solve", "--dataset", str(ds), "--gateway", "record",
         "-o", str(tmp_path / "x")],
        capsys,
    )
    assert code == 1
    assert "transcript" in json.loads(err.strip().splitlines()[-1])["error"]


def test_solve_empty_dataset_fails(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code, _, err = run(
        ["solve", "--dataset", str(empty), "-o", str(tmp_path / "x")], capsys
    )
    assert code == 1


def test_config_file_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed=9\ninstances=1\n")
    out = tmp_path / "ds.jsonl"
    # config file sets instances=1; flag overrides to 3
    code, _, _ = run(
        ["gen-dataset", "--config", str(cfg), "--tasks", "connectivity",
         "--instances", "3", "-o", str(out)],
        capsys,
    )
    assert code == 0
    assert len(read_jsonl(out)) == 3

    # without the flag the config file wins
    code, _, _ = run(
        ["gen-dataset", "--config", str(cfg), "--tasks", "connectivity",
         "-o", str(out)],
        capsys,
    )
    assert code == 0
    records = read_jsonl(out)
    assert len(records) == 1


def test_live_gateway_without_base_url_fails(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("GRAPHDOC_API_BASE", raising=False)
    monkeypatch.delenv("OPENAI_BASE_URL", raising=False)
    ds = make_dataset(tmp_path, capsys, tasks="connectivity")
    code, _, err = run(
        ["solve", "--dataset", str(ds), "--gateway", "live",
         "-o", str(tmp_path / "x")],
        capsys,
    )
    assert code == 1
    assert "API base" in json.loads(err.strip().splitlines()[-1])["error"]

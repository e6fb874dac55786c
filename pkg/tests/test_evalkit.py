"""Scoring formulas, cost rollups, report rendering."""
import csv
import io
import random

from graphdoc.evalkit import (
    CostLedger,
    evaluate_predictions,
    macro_accuracy,
    retrieval_f1,
    retrieval_precision,
    retrieval_recall,
)
from graphdoc.gateway import UsageRecord


def test_retrieval_metric_edge_cases():
    assert retrieval_recall([], []) == 1.0
    assert retrieval_recall(["a"], []) == 1.0
    assert retrieval_precision([], ["a"]) == 0.0
    assert retrieval_precision([], []) == 0.0
    assert retrieval_f1(0.0, 0.0) == 0.0
    assert retrieval_f1(1.0, 1.0) == 1.0
    assert abs(retrieval_f1(0.5, 1.0) - 2 / 3) < 1e-12


def test_retrieval_metrics_random_sets():
    rng = random.Random(13)
    universe = [f"leaf{i}" for i in range(12)]
    for _ in range(100):
        retrieved = set(rng.sample(universe, rng.randint(0, 12)))
        gold = set(rng.sample(universe, rng.randint(0, 12)))
        inter = len(retrieved & gold)
        p = retrieval_precision(retrieved, gold)
        r = retrieval_recall(retrieved, gold)
        assert p == (inter / len(retrieved) if retrieved else 0.0)
        assert r == (inter / len(gold) if gold else 1.0)
        f1 = retrieval_f1(p, r)
        if p + r:
            assert abs(f1 - 2 * p * r / (p + r)) < 1e-12
        else:
            assert f1 == 0.0


def test_macro_vs_micro():
    records = (
        [{"id": f"a-{i}", "task_id": "connectivity", "label": True}
         for i in range(8)]
        + [{"id": f"b-{i}", "task_id": "component_count", "label": 2}
           for i in range(2)]
    )
    # task a: all 8 right; task b: both wrong
    preds = [{"id": f"a-{i}", "status": "success", "predicted": True}
             for i in range(8)]
    preds += [{"id": f"b-{i}", "status": "success", "predicted": 5}
              for i in range(2)]
    report = evaluate_predictions(records, preds)
    assert report.macro_accuracy == 0.5          # (1.0 + 0.0) / 2
    assert report.micro_accuracy == 0.8          # 8 of 10
    assert report.per_task["component_count"]["outcomes"]["logical_error"] == 2


def test_missing_predictions_are_runtime_errors():
    records = [{"id": "x-0", "task_id": "connectivity", "label": True}]
    report = evaluate_predictions(records, [])
    row = report.per_task["connectivity"]
    assert row["outcomes"]["runtime_error"] == 1
    assert row["accuracy"] == 0.0


def test_error_status_predictions():
    records = [{"id": "x-0", "task_id": "connectivity", "label": True}]
    preds = [{"id": "x-0", "status": "runtime_error", "predicted": None}]
    report = evaluate_predictions(records, preds)
    assert report.per_task["connectivity"]["outcomes"]["runtime_error"] == 1


def test_tagged_comparison_via_registry():
    # real-valued task: tolerant numeric match through the answer tag
    records = [{"id": "f-0", "task_id": "max_flow", "label": 3.0}]
    preds = [{"id": "f-0", "status": "success", "predicted": 3.0000000001}]
    report = evaluate_predictions(records, preds)
    assert report.per_task["max_flow"]["correct"] == 1
    # boolean task: 1 is not True
    records = [{"id": "c-0", "task_id": "connectivity", "label": True}]
    preds = [{"id": "c-0", "status": "success", "predicted": 1}]
    report = evaluate_predictions(records, preds)
    assert report.per_task["connectivity"]["correct"] == 0


def test_zero_instance_task_warns(caplog):
    records = [{"id": "x-0", "task_id": "connectivity", "label": True}]
    preds = [{"id": "x-0", "status": "success", "predicted": True}]
    with caplog.at_level("WARNING"):
        report = evaluate_predictions(records, preds,
                                      task_ids=["connectivity", "max_flow"])
    assert "max_flow" in caplog.text
    assert report.macro_accuracy == 1.0  # ghost task excluded


def test_retrieval_scoring_against_required_docs():
    records = [{"id": "x-0", "task_id": "max_flow", "label": 1.0}]
    preds = [{"id": "x-0", "status": "success", "predicted": 1.0}]
    report = evaluate_predictions(
        records, preds,
        retrieval_by_task={"max_flow": {"flow.maximum_flow_value", "extra.leaf"}},
        gold_docs_by_task={"max_flow": {"flow.maximum_flow_value"}},
    )
    row = report.retrieval["max_flow"]
    assert row["precision"] == 0.5
    assert row["recall"] == 1.0
    assert report.retrieval_mean["f1"] == retrieval_f1(0.5, 1.0)


def test_cost_ledger_grouping_and_pricing():
    ledger = CostLedger(unit_prices={"m": {"prompt": 1.0, "completion": 2.0}})
    ledger.add(UsageRecord(purpose_tag="relevance", model_id="m",
                           prompt_tokens=1000, completion_tokens=500,
                           latency=0.5))
    ledger.add(UsageRecord(purpose_tag="codegen", model_id="m",
                           prompt_tokens=2000, completion_tokens=1000,
                           latency=1.0))
    ledger.add(UsageRecord(purpose_tag="codegen", model_id="unpriced",
                           prompt_tokens=999, completion_tokens=999,
                           latency=0.1))
    summary = ledger.summary()
    assert summary["by_purpose"]["relevance"]["calls"] == 1
    assert summary["by_purpose"]["relevance"]["cost"] == 1.0 + 1.0
    assert summary["by_purpose"]["codegen"]["calls"] == 2
    # unpriced model contributes tokens but zero cost
    assert summary["by_purpose"]["codegen"]["cost"] == 2.0 + 2.0
    assert summary["retrieval"]["calls"] == 1
    assert summary["coding"]["calls"] == 2
    assert summary["total"]["calls"] == 3
    assert summary["total"]["prompt_tokens"] == 3999


def test_render_text_and_csv():
    records = [
        {"id": "a-0", "task_id": "connectivity", "label": True},
        {"id": "b-0", "task_id": "max_flow", "label": 2.0},
    ]
    preds = [
        {"id": "a-0", "status": "success", "predicted": True},
        {"id": "b-0", "status": "success", "predicted": 1.0},
    ]
    report = evaluate_predictions(
        records, preds,
        retrieval_by_task={"max_flow": {"flow.maximum_flow_value"}},
        gold_docs_by_task={"max_flow": {"flow.maximum_flow_value"}},
    )
    text = report.render_text()
    assert "macro accuracy: 0.5000" in text
    assert "retrieval mean" in text
    rows = list(csv.reader(io.StringIO(report.render_csv())))
    assert rows[0][0] == "task_id"
    by_task = {r[0]: r for r in rows[1:]}
    assert by_task["connectivity"][3] == "1.000000"
    assert by_task["max_flow"][7] == "1.000000"   # precision column
    assert by_task["connectivity"][7] == ""       # no retrieval for this task
    json_round = report.to_json()
    assert json_round["micro_accuracy"] == 0.5

"""Metrics and report assembly for benchmark runs.

Accuracy is macro-averaged: per-task accuracy first, then the mean over
tasks, so small tasks weigh the same as large ones. The micro number rides
along for reference. Retrieval quality is set-overlap precision/recall/F1
against each task's required documentation leaves.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field

from .graphs import answers_equal
from .tasks import REGISTRY

log = logging.getLogger(__name__)

RETRIEVAL_PURPOSES = ("relevance", "global_filter")
CODING_PURPOSES = ("testgen", "codegen", "refine")


# ---------------------------------------------------------------------------
# Metric formulas


def retrieval_recall(retrieved, gold) -> float:
    """|retrieved ∩ gold| / |gold|; an empty gold set scores 1.0."""
    gold = set(gold)
    if not gold:
        return 1.0
    return len(set(retrieved) & gold) / len(gold)


def retrieval_precision(retrieved, gold) -> float:
    """|retrieved ∩ gold| / |retrieved|; an empty retrieval scores 0.0."""
    retrieved = set(retrieved)
    if not retrieved:
        return 0.0
    return len(retrieved & set(gold)) / len(retrieved)


def retrieval_f1(precision: float, recall: float) -> float:
    """Harmonic mean, 0.0 when both inputs are 0."""
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def macro_accuracy(per_task: dict) -> float:
    """Mean of per-task accuracies. Empty input scores 0.0."""
    if not per_task:
        return 0.0
    return sum(per_task.values()) / len(per_task)


# ---------------------------------------------------------------------------
# Cost accounting


@dataclass
class CostLedger:
    """Token usage grouped by purpose, priced per 1k tokens per model."""

    usage_records: list = field(default_factory=list)
    # model_id -> {"prompt": usd per 1k prompt tokens, "completion": ...}
    unit_prices: dict = field(default_factory=dict)

    def add(self, record) -> None:
        self.usage_records.append(record)

    def _price(self, model_id: str, kind: str) -> float:
        return float(self.unit_prices.get(model_id, {}).get(kind, 0.0))

    def by_purpose(self) -> dict:
        out = {}
        for rec in self.usage_records:
            slot = out.setdefault(
                rec.purpose_tag,
                {"calls": 0, "prompt_tokens": 0, "completion_tokens": 0,
                 "latency": 0.0, "cost": 0.0},
            )
            slot["calls"] += 1
            slot["prompt_tokens"] += rec.prompt_tokens
            slot["completion_tokens"] += rec.completion_tokens
            slot["latency"] += rec.latency
            slot["cost"] += (
                rec.prompt_tokens / 1000.0 * self._price(rec.model_id, "prompt")
                + rec.completion_tokens / 1000.0 * self._price(rec.model_id, "completion")
            )
        return out

    def summary(self) -> dict:
        purposes = self.by_purpose()

        def rollup(tags):
            keys = ("calls", "prompt_tokens", "completion_tokens", "latency", "cost")
            total = dict.fromkeys(keys, 0)
            total["latency"] = 0.0
            total["cost"] = 0.0
            for tag in tags:
                for key in keys:
                    total[key] += purposes.get(tag, {}).get(key, 0)
            return total

        return {
            "by_purpose": purposes,
            "retrieval": rollup(RETRIEVAL_PURPOSES),
            "coding": rollup(CODING_PURPOSES),
            "total": rollup(tuple(purposes.keys())),
        }


# ---------------------------------------------------------------------------
# Report assembly


@dataclass
class EvalReport:
    per_task: dict            # task_id -> {"n","correct","accuracy", outcome counts}
    macro_accuracy: float
    micro_accuracy: float
    retrieval: dict           # task_id -> {"precision","recall","f1"}; may be empty
    retrieval_mean: dict      # {"precision","recall","f1"}; empty if no retrieval
    cost: dict                # CostLedger.summary(); may be empty

    def to_json(self) -> dict:
        return {
            "per_task": self.per_task,
            "macro_accuracy": self.macro_accuracy,
            "micro_accuracy": self.micro_accuracy,
            "retrieval": self.retrieval,
            "retrieval_mean": self.retrieval_mean,
            "cost": self.cost,
        }

    def render_text(self) -> str:
        lines = []
        width = max([len(t) for t in self.per_task] + [4])
        header = f"{'task':<{width}}  {'n':>5}  {'acc':>6}  {'pass':>5} {'logic':>5} {'runtm':>5}"
        lines.append(header)
        lines.append("-" * len(header))
        for task_id in sorted(self.per_task):
            row = self.per_task[task_id]
            lines.append(
                f"{task_id:<{width}}  {row['n']:>5}  {row['accuracy']:>6.3f}  "
                f"{row['outcomes']['pass']:>5} {row['outcomes']['logical_error']:>5} "
                f"{row['outcomes']['runtime_error']:>5}"
            )
        lines.append("-" * len(header))
        lines.append(f"macro accuracy: {self.macro_accuracy:.4f}")
        lines.append(f"micro accuracy: {self.micro_accuracy:.4f}")
        if self.retrieval_mean:
            lines.append(
                "retrieval mean: "
                f"P={self.retrieval_mean['precision']:.3f} "
                f"R={self.retrieval_mean['recall']:.3f} "
                f"F1={self.retrieval_mean['f1']:.3f}"
            )
        total = self.cost.get("total") if self.cost else None
        if total:
            lines.append(
                f"llm usage: {total['calls']} calls, "
                f"{total['prompt_tokens']} prompt + "
                f"{total['completion_tokens']} completion tokens, "
                f"cost {total['cost']:.4f}"
            )
        return "\n".join(lines) + "\n"

    def render_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["task_id", "n", "correct", "accuracy",
             "pass", "logical_error", "runtime_error",
             "precision", "recall", "f1"]
        )
        for task_id in sorted(self.per_task):
            row = self.per_task[task_id]
            ret = self.retrieval.get(task_id, {})
            writer.writerow([
                task_id,
                row["n"],
                row["correct"],
                f"{row['accuracy']:.6f}",
                row["outcomes"]["pass"],
                row["outcomes"]["logical_error"],
                row["outcomes"]["runtime_error"],
                f"{ret['precision']:.6f}" if ret else "",
                f"{ret['recall']:.6f}" if ret else "",
                f"{ret['f1']:.6f}" if ret else "",
            ])
        return buf.getvalue()


def _classify_prediction(pred: dict | None, expected_value) -> tuple:
    """(matched, classification) for one prediction against its label."""
    if pred is None or pred.get("status") != "success":
        return False, "runtime_error"
    matched = answers_equal(pred.get("predicted"), expected_value)
    return matched, ("pass" if matched else "logical_error")


def evaluate_predictions(
    dataset_records,
    predictions,
    retrieval_by_task: dict | None = None,
    gold_docs_by_task: dict | None = None,
    cost_ledger: CostLedger | None = None,
    task_ids=None,
) -> EvalReport:
    """Score predictions against dataset labels.

    ``predictions`` is an iterable of {"id", "status", "predicted"} dicts.
    Records with no prediction count as runtime errors. Tasks listed in
    ``task_ids`` but absent from the dataset are excluded from the macro
    average, loudly.
    """
    by_id = {p["id"]: p for p in predictions}
    per_task: dict = {}
    for rec in dataset_records:
        task_id = rec["task_id"]
        spec = REGISTRY.get(task_id)
        expected = spec.answer_value(rec["label"]) if spec else rec["label"]
        matched, cls = _classify_prediction(by_id.get(rec["id"]), expected)
        slot = per_task.setdefault(
            task_id,
            {"n": 0, "correct": 0, "accuracy": 0.0,
             "outcomes": {"pass": 0, "logical_error": 0, "runtime_error": 0}},
        )
        slot["n"] += 1
        slot["correct"] += int(matched)
        slot["outcomes"][cls] += 1
    for task_id in task_ids or ():
        if task_id not in per_task:
            log.warning("task %s has zero instances; excluded from accuracy", task_id)
    for slot in per_task.values():
        slot["accuracy"] = slot["correct"] / slot["n"]
    acc_by_task = {t: s["accuracy"] for t, s in per_task.items()}
    total_n = sum(s["n"] for s in per_task.values())
    total_correct = sum(s["correct"] for s in per_task.values())
    micro = (total_correct / total_n) if total_n else 0.0

    retrieval = {}
    retrieval_mean: dict = {}
    if retrieval_by_task:
        gold_map = gold_docs_by_task or {
            t: set(REGISTRY[t].required_docs) for t in retrieval_by_task if t in REGISTRY
        }
        for task_id, hits in sorted(retrieval_by_task.items()):
            gold = set(gold_map.get(task_id, ()))
            p = retrieval_precision(hits, gold)
            r = retrieval_recall(hits, gold)
            retrieval[task_id] = {"precision": p, "recall": r, "f1": retrieval_f1(p, r)}
        if retrieval:
            retrieval_mean = {
                key: sum(m[key] for m in retrieval.values()) / len(retrieval)
                for key in ("precision", "recall", "f1")
            }

    return EvalReport(
        per_task=per_task,
        macro_accuracy=macro_accuracy(acc_by_task),
        micro_accuracy=micro,
        retrieval=retrieval,
        retrieval_mean=retrieval_mean,
        cost=cost_ledger.summary() if cost_ledger else {},
    )

"""End-to-end orchestration: retrieve docs, debug code, answer a dataset.

One pass over a dataset groups records by task, retrieves documentation once
per task, runs the self-debugging loop once per task, and then executes the
winning program on every instance. Artifacts are written without wall-clock
fields so identical replays produce identical bytes.
"""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .agent import AgentConfig, DebugSession, TaskBrief, run_debug_loop
from .datasetgen import record_args, record_graph
from .doctree import DocTree
from .executor import SandboxLimits
from .gateway import Gateway, UsageRecord
from .retrieval import (
    LLMJudge,
    RetrievalConfig,
    RetrievalResult,
    TaskQuery,
    retrieve,
)
from .tasks import get_task

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    top_k: int = 5
    use_global_filter: bool = True
    use_retrieval: bool = True
    t_max: int = 3
    max_cases: int = 4
    oracle_check: bool = True  # cross-check generated cases with task oracles
    model_id: str = "default"
    limits: SandboxLimits = field(default_factory=SandboxLimits)


@dataclass
class SolveRun:
    """Everything one solve pass produced, in dataset order."""

    predictions: list  # one dict per input record
    sessions: dict  # task_id -> DebugSession
    retrieval: dict  # task_id -> RetrievalResult
    task_usage: dict  # task_id -> aggregated model usage
    usage_records: list = field(default_factory=list)

    def sessions_json(self) -> dict:
        return {
            tid: {**session.to_json(), "usage": self.task_usage.get(tid, {})}
            for tid, session in self.sessions.items()
        }

    def retrieval_json(self) -> dict:
        return {tid: res.to_json() for tid, res in self.retrieval.items()}


def docs_section(tree: DocTree, leaf_ids) -> str:
    """Stitch retrieved leaves into the documentation block for prompts."""
    parts = []
    for leaf_id in sorted(leaf_ids):
        node = tree.node(leaf_id)
        parts.append(f"## {node.title}\n{node.body}")
    return "\n\n".join(parts)


def _usage_slice(records) -> dict:
    out = {"calls": 0, "prompt_tokens": 0, "completion_tokens": 0}
    for rec in records:
        out["calls"] += 1
        out["prompt_tokens"] += rec.prompt_tokens
        out["completion_tokens"] += rec.completion_tokens
    return out


def group_by_task(records) -> dict:
    grouped: dict = {}
    for rec in records:
        grouped.setdefault(rec["task_id"], []).append(rec)
    return grouped


def solve_dataset(
    records,
    tree: DocTree | None,
    gateway: Gateway,
    executor,
    config: PipelineConfig | None = None,
) -> SolveRun:
    """Solve every record of a dataset, one debugged program per task."""
    config = config or PipelineConfig()
    grouped = group_by_task(records)
    sessions: dict = {}
    retrieval: dict = {}
    task_usage: dict = {}
    by_id: dict = {}

    for task_id, task_records in grouped.items():
        spec = get_task(task_id)
        seen_usage = len(gateway.usage_records)

        docs = ""
        if config.use_retrieval and tree is not None:
            rconf = RetrievalConfig(
                top_k=config.top_k,
                use_global_filter=config.use_global_filter,
                model_id=config.model_id,
            )
            query = TaskQuery(
                text=spec.description,
                directed=spec.directed,
                weighted=spec.weighted,
            )
            result = retrieve(query, tree, LLMJudge(gateway, rconf), rconf)
            retrieval[task_id] = result
            docs = docs_section(tree, result.selected_leaf_ids)

        brief = TaskBrief(
            query=spec.description,
            directed=spec.directed,
            weighted=spec.weighted,
            args_desc=spec.args_desc,
            oracle=spec.label if config.oracle_check else None,
            answer_tag=spec.answer_tag,
        )
        agent_conf = AgentConfig(
            t_max=config.t_max,
            max_cases=config.max_cases,
            model_id=config.model_id,
            limits=config.limits,
        )
        session = run_debug_loop(brief, docs, gateway, executor, agent_conf)
        sessions[task_id] = session
        log.info(
            "task %s: %s after %d iteration(s)",
            task_id, session.status, len(session.iterations),
        )

        instances = [(record_graph(r), record_args(r)) for r in task_records]
        outcomes = executor.execute_batch(
            session.final.source, instances, config.limits
        )
        for rec, outcome in zip(task_records, outcomes):
            by_id[rec["id"]] = {
                "id": rec["id"],
                "task_id": task_id,
                "status": outcome.status,
                "predicted": outcome.answer,
                "error": outcome.error,
            }
        task_usage[task_id] = _usage_slice(gateway.usage_records[seen_usage:])

    predictions = [by_id[rec["id"]] for rec in records]
    return SolveRun(
        predictions=predictions,
        sessions=sessions,
        retrieval=retrieval,
        task_usage=task_usage,
        usage_records=list(gateway.usage_records),
    )


# ---------------------------------------------------------------------------
# Artifact IO


def dump_predictions(predictions, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pred in predictions:
            fh.write(json.dumps(pred, sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def load_predictions(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def write_solve_artifacts(run: SolveRun, out_dir) -> list:
    """predictions.jsonl, sessions.json, retrieval.json under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    pred_path = out / "predictions.jsonl"
    dump_predictions(run.predictions, pred_path)
    written.append(pred_path)

    sessions_path = out / "sessions.json"
    sessions_path.write_text(
        json.dumps(run.sessions_json(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    written.append(sessions_path)

    retrieval_path = out / "retrieval.json"
    retrieval_path.write_text(
        json.dumps(run.retrieval_json(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    written.append(retrieval_path)

    usage_path = out / "usage.jsonl"
    with open(usage_path, "w", encoding="utf-8") as fh:
        for rec in run.usage_records:
            fh.write(json.dumps(asdict(rec), sort_keys=True, separators=(",", ":")))
            fh.write("\n")
    written.append(usage_path)
    return written


def load_usage(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(UsageRecord(**json.loads(line)))
    return out

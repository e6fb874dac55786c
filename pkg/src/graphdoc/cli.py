"""Command line entry points.

Five subcommands cover the pipeline end to end: build-doctree, gen-dataset,
retrieve, solve, and evaluate. All data goes through files; progress and
errors go to stderr. Values can come from a key=value config file, with
command line flags taking precedence.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import datasetgen, doctree, pipeline, report
from .evalkit import CostLedger, evaluate_predictions
from .example_corpus import example_tree
from .executor import (
    DEFAULT_WALL_TIME,
    OracleStubExecutor,
    PythonSubprocessExecutor,
    SandboxLimits,
)
from .gateway import Gateway, HttpBackend, Transcript
from .mockmodel import RuleBackend
from .retrieval import (
    KeywordJudge,
    LLMJudge,
    RetrievalConfig,
    TaskQuery,
    retrieve,
    tfidf_baseline,
)
from .tasks import REGISTRY, get_task

log = logging.getLogger(__name__)


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# Config file + flag merging


def read_config_file(path) -> dict:
    """key=value lines; '#' starts a comment; blank lines ignored."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


class Settings:
    """Flag > config file > default, with light type coercion."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file_values = (
            read_config_file(args.config) if getattr(args, "config", None) else {}
        )

    def get(self, key: str, default=None, kind=str):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if key in self.file_values:
            raw = self.file_values[key]
            if kind is bool:
                return raw.lower() in ("1", "true", "yes", "on")
            return kind(raw)
        return default


# ---------------------------------------------------------------------------
# Shared builders


def build_gateway(settings: Settings) -> Gateway:
    mode = settings.get("gateway", "mock")
    transcript_path = settings.get("transcript")
    if mode in ("record", "replay") and not transcript_path:
        raise CliError(f"--transcript is required for gateway mode {mode!r}")

    if mode == "replay":
        return Gateway(backend=None, transcript=Transcript.load(transcript_path, "replay"))

    if mode == "mock":
        backend = RuleBackend()
        return Gateway(backend=backend)

    if mode in ("live", "record"):
        if mode == "record" and settings.get("backend", "mock") == "mock":
            backend = RuleBackend()
        else:
            base_url = (
                settings.get("api_base")
                or os.environ.get("GRAPHDOC_API_BASE")
                or os.environ.get("OPENAI_BASE_URL")
            )
            api_key = (
                os.environ.get("GRAPHDOC_API_KEY")
                or os.environ.get("OPENAI_API_KEY")
                or ""
            )
            if not base_url:
                raise CliError(
                    "no API base url: set GRAPHDOC_API_BASE or pass --api-base"
                )
            backend = HttpBackend(base_url=base_url, api_key=api_key)
        transcript = Transcript("record") if mode == "record" else None
        return Gateway(backend=backend, transcript=transcript)

    raise CliError(f"unknown gateway mode {mode!r}")


def finish_gateway(gateway: Gateway, settings: Settings) -> None:
    if gateway.transcript.mode == "record":
        path = settings.get("transcript")
        gateway.transcript.save(path)
        log.info("recorded %d transcript entries to %s",
                 len(gateway.transcript.entries), path)


def build_executor(settings: Settings):
    kind = settings.get("executor", "stub")
    if kind == "stub":
        from .tasks import oracle_by_task

        return OracleStubExecutor(oracle_by_task())
    if kind == "subprocess":
        return PythonSubprocessExecutor()
    raise CliError(f"unknown executor {kind!r} (want stub or subprocess)")


def load_tree(settings: Settings) -> doctree.DocTree:
    tree_path = settings.get("tree")
    if tree_path in (None, "", "example"):
        return example_tree()
    return doctree.load(tree_path)


def write_manifest(out_dir: Path, command: str, config: dict) -> Path:
    path = out_dir / "manifest.json"
    payload = {"command": command, "config": config}
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


# ---------------------------------------------------------------------------
# Subcommands


def cmd_build_doctree(settings: Settings) -> int:
    args = settings.args
    if args.example:
        tree = example_tree()
    elif args.source:
        tree = doctree.build_from_directory(args.source)
    else:
        raise CliError("build-doctree needs a source directory or --example")
    doctree.save(tree, args.out)
    print(
        f"wrote {args.out}: {len(tree.nodes)} nodes, "
        f"{len(tree.leaves())} leaves, depth {tree.depth}",
        file=sys.stderr,
    )
    return 0


def cmd_gen_dataset(settings: Settings) -> int:
    tasks = settings.get("tasks")
    task_list = [t.strip() for t in tasks.split(",") if t.strip()] if tasks else None
    for tid in task_list or ():
        get_task(tid)  # fail fast on typos
    config = datasetgen.GenerationConfig(
        seed=settings.get("seed", 0, int),
        instances_per_task=settings.get("instances", 10, int),
        profile=settings.get("profile", "S"),
        tasks=task_list,
    )
    records = datasetgen.generate_dataset(config)
    datasetgen.write_jsonl(records, settings.args.out)
    print(
        f"wrote {settings.args.out}: {len(records)} records over "
        f"{len(config.task_ids())} tasks (profile {config.profile}, seed {config.seed})",
        file=sys.stderr,
    )
    return 0


def cmd_retrieve(settings: Settings) -> int:
    args = settings.args
    tree = load_tree(settings)
    if args.task:
        spec = get_task(args.task)
        query = TaskQuery(
            text=spec.description, directed=spec.directed, weighted=spec.weighted
        )
    elif args.query:
        query = TaskQuery(text=args.query)
    else:
        raise CliError("retrieve needs --task or --query")

    method = settings.get("method", "agentic")
    top_k = settings.get("top_k", 5, int)
    if method == "tfidf":
        leaves = tfidf_baseline(query, tree, top_k)
        payload = {"method": "tfidf", "leaf_ids": [n.id for n in leaves]}
    else:
        rconf = RetrievalConfig(
            top_k=top_k,
            use_global_filter=not args.no_global_filter,
            model_id=settings.get("model_id", "default"),
        )
        if method == "keyword":
            judge = KeywordJudge()
            gateway = None
        elif method == "agentic":
            gateway = build_gateway(settings)
            judge = LLMJudge(gateway, rconf)
        else:
            raise CliError(f"unknown method {method!r}")
        result = retrieve(query, tree, judge, rconf)
        payload = {"method": method, **result.to_json()}
        if gateway is not None:
            finish_gateway(gateway, settings)

    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(settings: Settings) -> int:
    args = settings.args
    records = datasetgen.read_jsonl(args.dataset)
    if not records:
        raise CliError(f"dataset {args.dataset} is empty")
    tree = load_tree(settings)
    gateway = build_gateway(settings)
    executor = build_executor(settings)
    config = pipeline.PipelineConfig(
        top_k=settings.get("top_k", 5, int),
        use_global_filter=not args.no_global_filter,
        use_retrieval=not args.no_retrieval,
        t_max=settings.get("t_max", 3, int),
        max_cases=settings.get("max_cases", 4, int),
        oracle_check=not args.no_oracle_check,
        model_id=settings.get("model_id", "default"),
        limits=SandboxLimits(
            wall_time=settings.get("wall_time", DEFAULT_WALL_TIME, float)
        ),
    )
    run = pipeline.solve_dataset(records, tree, gateway, executor, config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = pipeline.write_solve_artifacts(run, out_dir)
    finish_gateway(gateway, settings)
    manifest_config = {
        "dataset": str(args.dataset),
        "tree": settings.get("tree") or "example",
        "gateway": settings.get("gateway", "mock"),
        "executor": settings.get("executor", "stub"),
        "top_k": config.top_k,
        "t_max": config.t_max,
        "max_cases": config.max_cases,
        "use_retrieval": config.use_retrieval,
        "use_global_filter": config.use_global_filter,
        "oracle_check": config.oracle_check,
        "model_id": config.model_id,
        "records": len(records),
        "tasks": sorted(run.sessions),
    }
    written.append(write_manifest(out_dir, "solve", manifest_config))
    statuses = {t: s.status for t, s in run.sessions.items()}
    solved = sum(1 for s in statuses.values() if s == "all_passed")
    print(
        f"solved {solved}/{len(statuses)} task suites; wrote "
        + ", ".join(p.name for p in written)
        + f" to {out_dir}",
        file=sys.stderr,
    )
    return 0


def cmd_evaluate(settings: Settings) -> int:
    args = settings.args
    records = datasetgen.read_jsonl(args.dataset)
    predictions = pipeline.load_predictions(args.predictions)

    retrieval_by_task = None
    if args.retrieval:
        raw = json.loads(Path(args.retrieval).read_text(encoding="utf-8"))
        retrieval_by_task = {
            tid: set(entry.get("selected_leaf_ids", ()))
            for tid, entry in raw.items()
        }

    ledger = None
    if args.usage:
        prices = {}
        if args.prices:
            prices = json.loads(Path(args.prices).read_text(encoding="utf-8"))
        ledger = CostLedger(
            usage_records=pipeline.load_usage(args.usage), unit_prices=prices
        )

    result = evaluate_predictions(
        records,
        predictions,
        retrieval_by_task=retrieval_by_task,
        cost_ledger=ledger,
    )
    out_dir = Path(args.out)
    written = report.write_report_files(
        result, out_dir, figures=not args.no_figures
    )
    written.append(
        write_manifest(
            out_dir,
            "evaluate",
            {
                "dataset": str(args.dataset),
                "predictions": str(args.predictions),
                "retrieval": str(args.retrieval) if args.retrieval else None,
                "usage": str(args.usage) if args.usage else None,
                "figures": not args.no_figures,
                "records": len(records),
            },
        )
    )
    print(
        f"macro accuracy {result.macro_accuracy:.4f}, micro {result.micro_accuracy:.4f}; "
        f"wrote {len(written)} files to {out_dir}",
        file=sys.stderr,
    )
    return 0


# ---------------------------------------------------------------------------
# Parser


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphdoc",
        description="Documentation-guided solving of graph tasks.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file")

    p = sub.add_parser("build-doctree", help="compile a documentation tree")
    common(p)
    p.add_argument("source", nargs="?", help="directory of markdown docs")
    p.add_argument("--example", action="store_true", help="use the bundled corpus")
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("gen-dataset", help="generate a labeled benchmark")
    common(p)
    p.add_argument("--profile", choices=datasetgen.PROFILES)
    p.add_argument("--seed", type=int)
    p.add_argument("--instances", type=int, help="instances per task")
    p.add_argument("--tasks", help="comma-separated task ids (default: all in profile)")
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("retrieve", help="fetch documentation for one task")
    common(p)
    p.add_argument("--tree", help="doc tree json (default: bundled corpus)")
    p.add_argument("--task", help="task id whose description becomes the query")
    p.add_argument("--query", help="free-text query")
    p.add_argument("--method", choices=("agentic", "keyword", "tfidf"))
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--no-global-filter", action="store_true")
    p.add_argument("--gateway", choices=("mock", "live", "record", "replay"))
    p.add_argument("--backend", choices=("mock", "live"))
    p.add_argument("--transcript")
    p.add_argument("--api-base", dest="api_base")
    p.add_argument("--model-id", dest="model_id")
    p.add_argument("-o", "--out")

    p = sub.add_parser("solve", help="solve every record of a dataset")
    common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--tree", help="doc tree json (default: bundled corpus)")
    p.add_argument("--gateway", choices=("mock", "live", "record", "replay"))
    p.add_argument("--backend", choices=("mock", "live"))
    p.add_argument("--transcript")
    p.add_argument("--api-base", dest="api_base")
    p.add_argument("--model-id", dest="model_id")
    p.add_argument("--executor", choices=("stub", "subprocess"))
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--t-max", dest="t_max", type=int)
    p.add_argument("--max-cases", dest="max_cases", type=int)
    p.add_argument("--wall-time", dest="wall_time", type=float)
    p.add_argument("--no-retrieval", action="store_true")
    p.add_argument("--no-global-filter", action="store_true")
    p.add_argument("--no-oracle-check", action="store_true")
    p.add_argument("-o", "--out", required=True, help="output directory")

    p = sub.add_parser("evaluate", help="score predictions and render a report")
    common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--retrieval", help="retrieval.json from solve")
    p.add_argument("--usage", help="usage.jsonl from solve")
    p.add_argument("--prices", help="unit price json: model -> prompt/completion per 1k")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("-o", "--out", required=True, help="output directory")

    return parser


_COMMANDS = {
    "build-doctree": cmd_build_doctree,
    "gen-dataset": cmd_gen_dataset,
    "retrieve": cmd_retrieve,
    "solve": cmd_solve,
    "evaluate": cmd_evaluate,
}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    settings = Settings(args)
    try:
        return _COMMANDS[args.command](settings)
    except CliError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1
    except Exception as exc:  # surface anything else as a structured error
        if args.verbose:
            raise
        print(
            json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())

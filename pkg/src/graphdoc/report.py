"""Rendering an EvalReport to files: JSON, plain text, CSV, and figures."""
from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .evalkit import EvalReport  # noqa: E402


def write_report_files(report: EvalReport, out_dir, figures: bool = True) -> list:
    """Write report.json / report.txt / per_task.csv and, unless disabled,
    the summary figures. Returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out_dir / "report.json"
    json_path.write_text(
        json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    written.append(json_path)

    txt_path = out_dir / "report.txt"
    txt_path.write_text(report.render_text(), encoding="utf-8")
    written.append(txt_path)

    csv_path = out_dir / "per_task.csv"
    csv_path.write_text(report.render_csv(), encoding="utf-8")
    written.append(csv_path)

    if figures:
        written.extend(render_figures(report, out_dir / "figures"))
    return written


def render_figures(report: EvalReport, fig_dir) -> list:
    fig_dir = Path(fig_dir)
    fig_dir.mkdir(parents=True, exist_ok=True)
    written = []
    tasks = sorted(report.per_task)
    if tasks:
        written.append(_accuracy_figure(report, tasks, fig_dir))
        written.append(_outcome_figure(report, tasks, fig_dir))
    if report.retrieval:
        written.append(_retrieval_figure(report, fig_dir))
    if report.cost.get("by_purpose"):
        written.append(_cost_figure(report, fig_dir))
    return written


def _accuracy_figure(report: EvalReport, tasks, fig_dir: Path) -> Path:
    accs = [report.per_task[t]["accuracy"] for t in tasks]
    fig, ax = plt.subplots(figsize=(8, max(3, 0.35 * len(tasks))))
    ax.barh(tasks, accs, color="#4878cf")
    ax.axvline(report.macro_accuracy, color="#d65f5f", linestyle="--",
               label=f"macro {report.macro_accuracy:.3f}")
    ax.set_xlim(0, 1.0)
    ax.set_xlabel("accuracy")
    ax.invert_yaxis()
    ax.legend(loc="lower right")
    fig.tight_layout()
    path = fig_dir / "accuracy_by_task.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _outcome_figure(report: EvalReport, tasks, fig_dir: Path) -> Path:
    kinds = ("pass", "logical_error", "runtime_error")
    colors = {"pass": "#6acc65", "logical_error": "#d65f5f", "runtime_error": "#ee854a"}
    fig, ax = plt.subplots(figsize=(8, max(3, 0.35 * len(tasks))))
    left = [0.0] * len(tasks)
    for kind in kinds:
        vals = [report.per_task[t]["outcomes"][kind] for t in tasks]
        ax.barh(tasks, vals, left=left, label=kind, color=colors[kind])
        left = [l + v for l, v in zip(left, vals)]
    ax.set_xlabel("instances")
    ax.invert_yaxis()
    ax.legend()
    fig.tight_layout()
    path = fig_dir / "outcomes_by_task.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _retrieval_figure(report: EvalReport, fig_dir: Path) -> Path:
    tasks = sorted(report.retrieval)
    idx = range(len(tasks))
    width = 0.27
    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(tasks)), 4))
    for off, key, color in (
        (-width, "precision", "#4878cf"),
        (0.0, "recall", "#6acc65"),
        (width, "f1", "#956cb4"),
    ):
        ax.bar(
            [i + off for i in idx],
            [report.retrieval[t][key] for t in tasks],
            width=width,
            label=key,
            color=color,
        )
    ax.set_xticks(list(idx))
    ax.set_xticklabels(tasks, rotation=45, ha="right")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    path = fig_dir / "retrieval_by_task.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _cost_figure(report: EvalReport, fig_dir: Path) -> Path:
    purposes = sorted(report.cost["by_purpose"])
    tokens = [
        report.cost["by_purpose"][p]["prompt_tokens"]
        + report.cost["by_purpose"][p]["completion_tokens"]
        for p in purposes
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(purposes, tokens, color="#4878cf")
    ax.set_ylabel("tokens")
    ax.set_title("llm usage by purpose")
    fig.tight_layout()
    path = fig_dir / "cost_by_purpose.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path

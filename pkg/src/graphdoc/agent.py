"""Self-debugging code generation.

The agent drafts a solution from retrieved documentation, runs it against a
small self-made test suite, and feeds failures back into bounded refinement
rounds. The returned session keeps every candidate so the best one can be
picked by test accuracy, earliest iteration winning ties.
"""
from __future__ import annotations

import ast
import json
import logging
from dataclasses import dataclass, field

from . import prompts
from .executor import ExecutionOutcome, ExecutionRequest, SandboxLimits
from .gateway import ChatRequest, EmptyCode, Gateway, extract_code_block
from .graphs import AnswerValue, GraphError, GraphInstance, answers_equal, from_edges

log = logging.getLogger(__name__)

PLACEHOLDER_SOURCE = "# no code produced"


class NoUsableCases(Exception):
    """Test-case generation yielded nothing parseable."""


@dataclass(frozen=True)
class TaskBrief:
    """Everything the agent needs to know about one task."""

    query: str
    directed: bool = False
    weighted: bool = False
    args_desc: str = "num_nodes: total number of nodes, labeled 0..num_nodes-1"
    oracle: object | None = None  # (graph, args) -> canonical label
    answer_tag: str | None = None

    @property
    def graph_type_description(self) -> str:
        d = "directed" if self.directed else "undirected"
        w = "weighted" if self.weighted else "unweighted"
        return f"{d} and {w}"

    @property
    def nx_graph_class(self) -> str:
        return "DiGraph" if self.directed else "Graph"

    @property
    def edge_format(self) -> str:
        if self.weighted:
            return "[u, v, w] with endpoints u, v and weight w"
        return "[u, v] with endpoints u and v"

    def expected_value(self, raw):
        if self.answer_tag is None:
            return raw
        return AnswerValue(tag=self.answer_tag, value=raw)


@dataclass
class AgentConfig:
    t_max: int = 3
    max_cases: int = 4
    small_case_cap: int = 6  # max nodes in a self-test graph
    feedback_cap: int = 3
    model_id: str = "default"
    limits: SandboxLimits = field(default_factory=SandboxLimits)

    def __post_init__(self):
        if self.t_max < 0:
            raise ValueError("t_max must be >= 0")
        if self.small_case_cap < 1 or self.max_cases < 1 or self.feedback_cap < 1:
            raise ValueError("caps must be positive")


@dataclass(frozen=True)
class TestCase:
    graph: GraphInstance
    args: dict
    expected: object
    origin: str = "llm"  # llm | oracle_verified | provided


@dataclass(frozen=True)
class CandidateCode:
    source: str
    iteration: int

    def __post_init__(self):
        if not self.source.strip():
            raise ValueError("candidate source must be non-empty")
        if self.iteration < 0:
            raise ValueError("iteration must be >= 0")


@dataclass
class CaseResult:
    case: TestCase
    outcome: ExecutionOutcome
    matched: bool
    classification: str  # pass | logical_error | runtime_error


@dataclass
class IterationRecord:
    candidate: CandidateCode
    results: list
    acc_test: float | None  # None = never scored (no usable suite)


@dataclass
class DebugSession:
    iterations: list
    final: CandidateCode
    status: str  # all_passed | budget_exhausted
    suite: list

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "final_iteration": self.final.iteration,
            "iterations": [
                {
                    "iteration": rec.candidate.iteration,
                    "acc_test": rec.acc_test,
                    "classifications": [r.classification for r in rec.results],
                    "source": rec.candidate.source,
                }
                for rec in self.iterations
            ],
        }


def classify_outcome(outcome: ExecutionOutcome, expected, tag: str | None = None) -> str:
    """pass / logical_error / runtime_error taxonomy for one execution.

    Logical errors are runs that finish cleanly but answer wrongly; a null
    answer counts as wrong against any concrete expectation. Timeouts land
    in the runtime bucket.
    """
    if outcome.status != "success":
        return "runtime_error"
    exp = AnswerValue(tag=tag, value=expected) if tag else expected
    return "pass" if answers_equal(outcome.answer, exp) else "logical_error"


# ---------------------------------------------------------------------------
# Test-case generation


def balanced_span(text: str, start: int) -> str | None:
    """The bracket-balanced slice starting at an opener at text[start],
    honoring string literals, or None if it never closes."""
    depth = 0
    i = start
    in_str: str | None = None
    while i < len(text):
        ch = text[i]
        if in_str:
            if ch == "\\":
                i += 2
                continue
            if ch == in_str:
                in_str = None
        elif ch in "'\"":
            in_str = ch
        elif ch in "[{(":
            depth += 1
        elif ch in "]})":
            depth -= 1
            if depth == 0:
                return text[start : i + 1]
        i += 1
    return None


def parse_case_list(text: str) -> list:
    """Pull the first parseable Python list literal out of free text."""
    for i, ch in enumerate(text):
        if ch != "[":
            continue
        span = balanced_span(text, i)
        if span is None:
            continue
        try:
            value = ast.literal_eval(span)
        except (ValueError, SyntaxError):
            continue
        if isinstance(value, list):
            return value
    return []


def _case_from_entry(entry, brief: TaskBrief, cap: int) -> TestCase | None:
    if not isinstance(entry, dict):
        return None
    if "input" not in entry or "expected_output" not in entry:
        return None
    raw_input = entry["input"]
    if isinstance(raw_input, dict):
        edges = raw_input.get("edge_list", raw_input.get("edges"))
        args = {
            k: v
            for k, v in raw_input.items()
            if k not in ("edge_list", "edges")
        }
    elif isinstance(raw_input, list):
        edges, args = raw_input, {}
    else:
        return None
    if not isinstance(edges, list):
        return None
    try:
        graph = from_edges(
            edges,
            directed=brief.directed,
            weighted=brief.weighted,
            num_nodes=args.get("num_nodes"),
        )
    except (GraphError, TypeError, ValueError, IndexError):
        return None
    if graph.num_nodes == 0 or graph.num_nodes > cap:
        return None
    args.setdefault("num_nodes", graph.num_nodes)
    return TestCase(graph=graph, args=args, expected=entry["expected_output"])


def generate_test_cases(
    brief: TaskBrief, gateway: Gateway, config: AgentConfig
) -> list:
    """Ask the model for tiny labeled cases; cross-check against the task
    oracle when one is available. Raises NoUsableCases if nothing survives."""
    user_text = prompts.render(
        "testgen",
        task_description=brief.query,
        graph_type_description=brief.graph_type_description,
        max_cases=config.max_cases,
        max_nodes=config.small_case_cap,
    )
    req = ChatRequest(
        system_text="You write small, hand-checkable test cases.",
        user_text=user_text,
        model_id=config.model_id,
        purpose_tag="testgen",
    )
    resp = gateway.complete(req)
    cases = []
    for entry in parse_case_list(resp.text)[: config.max_cases]:
        case = _case_from_entry(entry, brief, config.small_case_cap)
        if case is None:
            continue
        if brief.oracle is not None:
            try:
                truth = brief.oracle(case.graph, case.args)
            except GraphError:
                continue
            if not answers_equal(case.expected, brief.expected_value(truth)):
                log.debug("testgen expectation corrected by oracle")
            case = TestCase(
                graph=case.graph,
                args=case.args,
                expected=truth,
                origin="oracle_verified",
            )
        cases.append(case)
    if not cases:
        raise NoUsableCases("no parseable test cases in model output")
    return cases


# ---------------------------------------------------------------------------
# Code generation and refinement


def _case_input_str(case: TestCase) -> str:
    payload = {
        "edge_list": [list(e) for e in case.graph.edges],
        **case.args,
    }
    return json.dumps(payload, sort_keys=True)


def generate_code(
    brief: TaskBrief,
    docs_section: str,
    example: TestCase,
    gateway: Gateway,
    config: AgentConfig,
) -> CandidateCode:
    user_text = prompts.render(
        "codegen",
        docs_section=docs_section or "(no documentation retrieved)",
        question_text=brief.query,
        directed_text="directed" if brief.directed else "undirected",
        weighted_text="weighted" if brief.weighted else "unweighted",
        edge_format=brief.edge_format,
        nx_graph_class=brief.nx_graph_class,
        args_desc=brief.args_desc,
        edge_list=json.dumps([list(e) for e in example.graph.edges]),
        arguments=json.dumps(example.args, sort_keys=True),
        answer=json.dumps(example.expected),
    )
    req = ChatRequest(
        system_text="You write correct, self-contained Python functions.",
        user_text=user_text,
        model_id=config.model_id,
        purpose_tag="codegen",
    )
    resp = gateway.complete(req)
    return CandidateCode(source=extract_code_block(resp.text), iteration=0)


@dataclass
class FeedbackBundle:
    failures: list  # CaseResult, capped

    def error_output(self) -> str:
        lines = []
        for r in self.failures:
            if r.outcome.status != "success":
                lines.append(
                    f"input {_case_input_str(r.case)} -> {r.outcome.status}: "
                    f"{r.outcome.error}"
                )
            else:
                lines.append(
                    f"input {_case_input_str(r.case)} -> returned "
                    f"{json.dumps(r.outcome.answer)}, expected "
                    f"{json.dumps(r.case.expected)}"
                )
        return "\n".join(lines)

    @property
    def first(self) -> CaseResult:
        return self.failures[0]


def build_feedback(results, cap: int = 3) -> FeedbackBundle:
    failures = [r for r in results if not r.matched][:cap]
    return FeedbackBundle(failures=failures)


def refine_code(
    brief: TaskBrief,
    candidate: CandidateCode,
    feedback: FeedbackBundle,
    gateway: Gateway,
    config: AgentConfig,
) -> CandidateCode:
    first = feedback.first
    user_text = prompts.render(
        "refine",
        original_query=brief.query,
        error_code=candidate.source,
        error_output=feedback.error_output(),
        test_input=_case_input_str(first.case),
        expected_answer=json.dumps(first.case.expected),
    )
    req = ChatRequest(
        system_text="You debug Python functions for graph tasks.",
        user_text=user_text,
        model_id=config.model_id,
        purpose_tag="refine",
    )
    resp = gateway.complete(req)
    return CandidateCode(
        source=extract_code_block(resp.text), iteration=candidate.iteration + 1
    )


# ---------------------------------------------------------------------------
# The loop


def score_candidate(
    candidate: CandidateCode,
    suite,
    executor,
    brief: TaskBrief,
    config: AgentConfig,
) -> IterationRecord:
    results = []
    for case in suite:
        outcome = executor.execute(
            ExecutionRequest(
                code=candidate.source,
                graph=case.graph,
                args=case.args,
                limits=config.limits,
            )
        )
        cls = classify_outcome(outcome, case.expected, brief.answer_tag)
        results.append(
            CaseResult(
                case=case,
                outcome=outcome,
                matched=(cls == "pass"),
                classification=cls,
            )
        )
    acc = sum(r.matched for r in results) / len(results)
    return IterationRecord(candidate=candidate, results=results, acc_test=acc)


def _best_iteration(iterations) -> IterationRecord:
    best = iterations[0]
    for rec in iterations[1:]:
        best_acc = -1.0 if best.acc_test is None else best.acc_test
        acc = -1.0 if rec.acc_test is None else rec.acc_test
        if acc > best_acc:
            best = rec
    return best


def run_debug_loop(
    brief: TaskBrief,
    docs_section: str,
    gateway: Gateway,
    executor,
    config: AgentConfig | None = None,
    suite=None,
) -> DebugSession:
    """Generate, score, and refine until the suite passes or the budget runs
    out. Never raises on model misbehavior: a response with no code becomes
    a zero-scoring placeholder iteration."""
    config = config or AgentConfig()
    if suite is None:
        try:
            suite = generate_test_cases(brief, gateway, config)
        except NoUsableCases:
            suite = []
    if not suite:
        # nothing to score against: hand back the initial draft unscored
        try:
            synthetic = TestCase(
                graph=from_edges(
                    [(0, 1, 1.0)] if brief.weighted else [(0, 1)],
                    directed=brief.directed,
                    weighted=brief.weighted,
                ),
                args={"num_nodes": 2},
                expected=None,
                origin="provided",
            )
            candidate = generate_code(brief, docs_section, synthetic, gateway, config)
        except EmptyCode:
            candidate = CandidateCode(source=PLACEHOLDER_SOURCE, iteration=0)
        rec = IterationRecord(candidate=candidate, results=[], acc_test=None)
        return DebugSession(
            iterations=[rec], final=candidate, status="budget_exhausted", suite=[]
        )

    try:
        candidate = generate_code(brief, docs_section, suite[0], gateway, config)
    except EmptyCode:
        candidate = CandidateCode(source=PLACEHOLDER_SOURCE, iteration=0)
    rec = score_candidate(candidate, suite, executor, brief, config)
    iterations = [rec]
    while rec.acc_test < 1.0 and len(iterations) - 1 < config.t_max:
        feedback = build_feedback(rec.results, config.feedback_cap)
        try:
            candidate = refine_code(brief, rec.candidate, feedback, gateway, config)
        except EmptyCode:
            candidate = CandidateCode(
                source=PLACEHOLDER_SOURCE, iteration=rec.candidate.iteration + 1
            )
        rec = score_candidate(candidate, suite, executor, brief, config)
        iterations.append(rec)
    best = _best_iteration(iterations)
    status = "all_passed" if best.acc_test == 1.0 else "budget_exhausted"
    return DebugSession(
        iterations=iterations, final=best.candidate, status=status, suite=list(suite)
    )

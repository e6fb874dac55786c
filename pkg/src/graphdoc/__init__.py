"""Documentation-guided solving of graph algorithm tasks.

The package walks a documentation tree to gather the material a task needs,
asks a model to write and iteratively repair a solver for it, runs the
winning program in a subprocess sandbox, and scores everything against
built-in exact oracles.
"""

__version__ = "0.1.0"

from .graphs import (
    AnswerValue,
    GraphError,
    GraphInstance,
    answers_equal,
    from_edges,
)
from .doctree import DocTree, build_tree, load, loads, save
from .gateway import (
    ChatRequest,
    ChatResponse,
    Gateway,
    HttpBackend,
    ScriptedBackend,
    Transcript,
)
from .retrieval import RetrievalConfig, RetrievalResult, TaskQuery, retrieve
from .tasks import REGISTRY, compose_task, get_task
from .datasetgen import GenerationConfig, generate_dataset
from .agent import AgentConfig, DebugSession, TaskBrief, run_debug_loop
from .executor import (
    ExecutionOutcome,
    ExecutionRequest,
    OracleStubExecutor,
    PythonSubprocessExecutor,
    SandboxLimits,
)
from .mockmodel import RuleBackend
from .pipeline import PipelineConfig, SolveRun, solve_dataset
from .evalkit import CostLedger, EvalReport, evaluate_predictions
from .example_corpus import example_tree

__all__ = [
    "AgentConfig",
    "AnswerValue",
    "ChatRequest",
    "ChatResponse",
    "CostLedger",
    "DebugSession",
    "DocTree",
    "EvalReport",
    "ExecutionOutcome",
    "ExecutionRequest",
    "Gateway",
    "GenerationConfig",
    "GraphError",
    "GraphInstance",
    "HttpBackend",
    "OracleStubExecutor",
    "PipelineConfig",
    "PythonSubprocessExecutor",
    "REGISTRY",
    "RetrievalConfig",
    "RetrievalResult",
    "RuleBackend",
    "SandboxLimits",
    "ScriptedBackend",
    "SolveRun",
    "TaskBrief",
    "TaskQuery",
    "Transcript",
    "answers_equal",
    "build_tree",
    "compose_task",
    "evaluate_predictions",
    "example_tree",
    "from_edges",
    "generate_dataset",
    "get_task",
    "load",
    "loads",
    "retrieve",
    "run_debug_loop",
    "save",
    "solve_dataset",
    "__version__",
]

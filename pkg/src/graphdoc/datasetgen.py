"""Benchmark dataset generation.

Graphs are Erdos-Renyi draws shaped by each task's constraints; labels come
from the task oracles. Generation is fully determined by the master seed:
every task derives its own child RNG from (seed, task_id), so adding or
removing tasks does not disturb the others' records.

Profiles:
  S  small graphs, all primitive tasks
  L  large graphs, the primitive tasks that scale
  C  small graphs, the composite tasks
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import networkx as nx

from .graphs import GraphError, GraphInstance, from_edges
from .tasks import REGISTRY, TaskSpec, get_task

PROFILES = ("S", "L", "C")

# large graphs aim for a roughly size-independent average degree
L_DEGREE_RANGE = (50.0, 79.0)

L_SIZE_BUCKETS = ((200, 1000), (1000, 4000), (4000, 8000), (5000, 5000))


class GenerationError(Exception):
    """Constraints could not be satisfied within the retry budget."""


@dataclass
class GenerationConfig:
    seed: int = 0
    instances_per_task: int = 10
    profile: str = "S"
    tasks: tuple | None = None          # task ids; None = profile default
    size_buckets: tuple | None = None   # ((lo, hi), ...); None = profile default
    max_arg_retries: int = 20
    max_graph_retries: int = 50

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile: {self.profile!r}")
        if self.instances_per_task < 0:
            raise ValueError("instances_per_task must be >= 0")

    def task_ids(self) -> list:
        if self.tasks is not None:
            return [get_task(t).task_id for t in self.tasks]
        if self.profile == "C":
            chosen = [s for s in REGISTRY.values() if s.is_composite]
        elif self.profile == "L":
            chosen = [
                s for s in REGISTRY.values()
                if not s.is_composite and s.l_node_range is not None
            ]
        else:
            chosen = [s for s in REGISTRY.values() if not s.is_composite]
        return sorted(s.task_id for s in chosen)

    def buckets(self) -> tuple | None:
        if self.size_buckets is not None:
            return tuple(tuple(b) for b in self.size_buckets)
        if self.profile == "L":
            return L_SIZE_BUCKETS
        return None


def _node_range(spec: TaskSpec, config: GenerationConfig, bucket) -> tuple:
    lo, hi = spec.l_node_range if config.profile == "L" else spec.node_range
    if bucket is not None:
        blo, bhi = bucket
        ilo, ihi = max(lo, blo), min(hi, bhi)
        if ilo <= ihi:
            return ilo, ihi
    return lo, hi


def _edge_probability(spec: TaskSpec, config: GenerationConfig, n: int, rng) -> float:
    if config.profile == "L":
        if spec.l_density is not None:
            return rng.uniform(*spec.l_density)
        degree = rng.uniform(*L_DEGREE_RANGE)
        return min(0.9, degree / max(1, n - 1))
    return rng.uniform(*spec.s_density)


def _repair_connected(G, rng) -> None:
    """Thread a random spanning path through the components."""
    order = list(G.nodes())
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        if not nx.has_path(G, a, b):
            G.add_edge(a, b)


def generate_graph(spec: TaskSpec, config: GenerationConfig, rng, bucket=None) -> GraphInstance:
    """One random graph satisfying the task's structural constraints."""
    lo, hi = _node_range(spec, config, bucket)
    for _ in range(config.max_graph_retries):
        n = rng.randint(lo, hi)
        p = _edge_probability(spec, config, n, rng)
        G = nx.fast_gnp_random_graph(
            n, p, seed=rng.randrange(2**32), directed=spec.directed
        )
        if spec.connected and not spec.directed:
            if n > 1 and not nx.is_connected(G):
                _repair_connected(G, rng)
        edges = []
        for u, v in G.edges():
            if spec.weighted:
                edges.append((u, v, round(rng.uniform(0.0, 10.0), 1)))
            else:
                edges.append((u, v))
        return from_edges(
            edges, directed=spec.directed, weighted=spec.weighted, num_nodes=n
        )
    raise GenerationError(f"could not generate a graph for {spec.task_id}")


def sample_args(spec: TaskSpec, g: GraphInstance, rng) -> dict:
    """Draw the task arguments for one instance. num_nodes always rides
    along so isolated nodes survive the edge-list encoding."""
    nodes = sorted(g.nodes)
    args = {"num_nodes": g.num_nodes}
    schema = set(spec.args_schema)
    if {"source", "target"} <= schema:
        s, t = rng.sample(nodes, 2) if len(nodes) >= 2 else (nodes[0], nodes[0])
        args["source"], args["target"] = s, t
    elif "target" in schema:
        args["target"] = rng.choice(nodes)
    if "node" in schema:
        args["node"] = rng.choice(nodes)
    if {"node_u", "node_v"} <= schema:
        u, v = rng.sample(nodes, 2) if len(nodes) >= 2 else (nodes[0], nodes[0])
        args["node_u"], args["node_v"] = u, v
    if "k" in schema:
        args["k"] = rng.randint(1, max(1, min(10, g.num_nodes)))
    return args


def make_record(spec: TaskSpec, config: GenerationConfig, rng, seq: int, bucket=None) -> dict:
    """One labeled instance: sample a graph, then args until the oracle
    accepts them, regenerating the graph when args can never work."""
    for _ in range(config.max_graph_retries):
        g = generate_graph(spec, config, rng, bucket)
        for _ in range(config.max_arg_retries):
            args = sample_args(spec, g, rng)
            try:
                label = spec.label(g, args)
            except GraphError:
                continue
            return {
                "id": f"{spec.task_id}-{seq:04d}",
                "task_id": spec.task_id,
                "description": spec.description,
                "directed": spec.directed,
                "weighted": spec.weighted,
                "edges": [list(e) for e in g.edges],
                "args": args,
                "label": label,
                "meta": {"n": g.num_nodes, "m": g.num_edges},
            }
    raise GenerationError(f"could not label an instance for {spec.task_id}")


def generate_dataset(config: GenerationConfig) -> list:
    """All records for the profile, grouped by task, seed-deterministic."""
    records = []
    buckets = config.buckets()
    for task_id in config.task_ids():
        spec = get_task(task_id)
        rng = random.Random(f"{config.seed}:{task_id}")
        for i in range(config.instances_per_task):
            bucket = buckets[i % len(buckets)] if buckets else None
            records.append(make_record(spec, config, rng, seq=i, bucket=bucket))
    return records


# ---------------------------------------------------------------------------
# JSONL round-trip


def dumps_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def write_jsonl(records, path) -> None:
    text = "".join(dumps_record(r) + "\n" for r in records)
    Path(path).write_text(text, encoding="utf-8")


def read_jsonl(path) -> list:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(json.loads(line))
    return out


def record_graph(record: dict) -> GraphInstance:
    """Rebuild the GraphInstance a record describes."""
    return from_edges(
        record["edges"],
        directed=bool(record["directed"]),
        weighted=bool(record["weighted"]),
        num_nodes=record["args"].get("num_nodes"),
    )


def record_args(record: dict) -> dict:
    return dict(record["args"])

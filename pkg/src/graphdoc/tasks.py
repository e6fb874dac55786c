"""The task registry: what each graph question asks, on what kind of graph,
how its reference answer is computed, and which documentation leaves a
perfect retriever would fetch for it.

Primitive tasks call one oracle; composite tasks chain several and are keyed
by (primitive parts, composition pattern).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import composites as comp
from . import graphs
from .graphs import AnswerValue, GraphInstance


class UnknownTask(Exception):
    pass


class IncoherentComposition(Exception):
    """No composite task exists for that part set and pattern."""


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    title: str
    description: str
    answer_tag: str
    oracle: object  # (GraphInstance, args dict) -> raw answer
    directed: bool = False
    weighted: bool = False
    connected: bool = False
    pattern: str | None = None  # None = primitive
    parts: frozenset = frozenset()
    args_schema: tuple = ()
    args_desc: str = "num_nodes: total number of nodes, labeled 0..num_nodes-1"
    node_range: tuple = (2, 200)
    s_density: tuple = (0.1, 0.9)
    l_node_range: tuple | None = None
    l_density: tuple | None = None
    required_docs: tuple = ()
    canonical: object = None  # raw -> canonical JSON value

    @property
    def is_composite(self) -> bool:
        return self.pattern is not None

    @property
    def graph_type_description(self) -> str:
        d = "directed" if self.directed else "undirected"
        w = "weighted" if self.weighted else "unweighted"
        return f"{d} and {w}"

    @property
    def nx_graph_class(self) -> str:
        return "DiGraph" if self.directed else "Graph"

    def label(self, g: GraphInstance, args: dict):
        """Canonical JSON-ready reference answer."""
        raw = self.oracle(g, args)
        return self.canonical(raw) if self.canonical else raw

    def answer_value(self, value) -> AnswerValue:
        return AnswerValue(tag=self.answer_tag, value=value)


def _pair_map(raw: tuple) -> dict:
    node, coeffs = raw
    return {"node": node, "coefficients": [float(c) for c in coeffs]}


def _ranked_map(raw: list) -> dict:
    return {
        "nodes": [v for v, _ in raw],
        "scores": [float(s) for _, s in raw],
    }


_ARGS_BASE = "num_nodes: total number of nodes, labeled 0..num_nodes-1"


def _specs() -> list:
    out = []

    # -- primitives ---------------------------------------------------------
    out.append(TaskSpec(
        task_id="connectivity",
        title="Graph connectivity",
        description=(
            "Determine whether the undirected graph is connected, counting "
            "every node from 0 to num_nodes-1 even if it has no edges. "
            "Return True when every pair of nodes is joined by a path, "
            "otherwise False."
        ),
        answer_tag="boolean",
        oracle=lambda g, a: graphs.is_connected(g),
        node_range=(2, 200),
        l_node_range=(200, 8000),
        required_docs=("connectivity.is_connected",),
    ))
    out.append(TaskSpec(
        task_id="component_count",
        title="Connected component count",
        description=(
            "Count the connected components of the undirected graph. Nodes "
            "without edges count as components of size one. Return the "
            "number of components as an integer."
        ),
        answer_tag="integer",
        oracle=lambda g, a: graphs.count_components(g),
        node_range=(2, 200),
        l_node_range=(200, 8000),
        required_docs=("connectivity.number_connected_components",),
    ))
    out.append(TaskSpec(
        task_id="scc_count",
        title="Strongly connected component count",
        description=(
            "Count the strongly connected components of the directed graph, "
            "counting every node from 0 to num_nodes-1. Return the number "
            "of components as an integer."
        ),
        answer_tag="integer",
        oracle=lambda g, a: graphs.count_scc(g),
        directed=True,
        node_range=(4, 200),
        l_node_range=(200, 8000),
        required_docs=("connectivity.number_strongly_connected_components",),
    ))
    out.append(TaskSpec(
        task_id="shortest_path",
        title="Shortest path length",
        description=(
            "Compute the total weight of the shortest path from node "
            "'source' to node 'target' in the directed, weighted graph. "
            "Return the path length as a number."
        ),
        answer_tag="real",
        oracle=lambda g, a: graphs.shortest_path_length(g, a["source"], a["target"]),
        directed=True,
        weighted=True,
        args_schema=("source", "target"),
        args_desc=_ARGS_BASE + "; source: start node; target: destination node",
        node_range=(2, 200),
        l_node_range=(200, 8000),
        required_docs=("shortest_paths.dijkstra_path_length",),
    ))
    out.append(TaskSpec(
        task_id="eulerian_path",
        title="Eulerian path existence",
        description=(
            "Decide whether the undirected graph contains an Eulerian path, "
            "that is, a trail that uses every edge exactly once. A graph "
            "with no edges counts as having one. Return True or False."
        ),
        answer_tag="boolean",
        oracle=lambda g, a: graphs.has_eulerian_path(g),
        node_range=(2, 200),
        l_node_range=(200, 8000),
        required_docs=("euler.has_eulerian_path",),
    ))
    out.append(TaskSpec(
        task_id="bipartite_check",
        title="Bipartiteness",
        description=(
            "Decide whether the undirected graph is bipartite, i.e. its "
            "nodes can be split into two sets with every edge crossing "
            "between them. Return True or False."
        ),
        answer_tag="boolean",
        oracle=lambda g, a: graphs.is_bipartite(g),
        node_range=(2, 200),
        l_node_range=(200, 8000),
        required_docs=("bipartite.is_bipartite",),
    ))
    out.append(TaskSpec(
        task_id="graph_diameter",
        title="Graph diameter",
        description=(
            "Compute the diameter of the connected undirected graph: the "
            "greatest shortest-path distance in hops between any two "
            "nodes. Return it as an integer."
        ),
        answer_tag="integer",
        oracle=lambda g, a: graphs.diameter(g),
        connected=True,
        node_range=(2, 200),
        l_node_range=(200, 400),
        required_docs=("distance.diameter",),
    ))
    out.append(TaskSpec(
        task_id="regular_check",
        title="Regularity",
        description=(
            "Decide whether the undirected graph is regular, meaning every "
            "node has the same degree. Return True or False."
        ),
        answer_tag="boolean",
        oracle=lambda g, a: graphs.is_regular(g),
        node_range=(2, 200),
        l_node_range=(200, 8000),
        required_docs=("properties.is_regular",),
    ))
    out.append(TaskSpec(
        task_id="distance_regular",
        title="Distance regularity",
        description=(
            "Decide whether the undirected graph is distance-regular: it is "
            "connected and regular, and for every pair of nodes the number "
            "of neighbors of one at each distance from the other depends "
            "only on that distance. Return True or False."
        ),
        answer_tag="boolean",
        oracle=lambda g, a: graphs.is_distance_regular(g),
        node_range=(3, 200),
        l_node_range=(200, 500),
        required_docs=("distance.is_distance_regular",),
    ))
    out.append(TaskSpec(
        task_id="max_flow",
        title="Maximum flow",
        description=(
            "Compute the maximum flow that can be routed from node 'source' "
            "to node 'target' in the directed graph, using edge weights as "
            "capacities. Return the flow value as a number; if the target "
            "is unreachable the flow is 0."
        ),
        answer_tag="real",
        oracle=lambda g, a: graphs.max_flow_value(g, a["source"], a["target"]),
        directed=True,
        weighted=True,
        args_schema=("source", "target"),
        args_desc=_ARGS_BASE + "; source: flow source node; target: flow sink node",
        node_range=(2, 200),
        l_node_range=(200, 2000),
        required_docs=("flow.maximum_flow_value",),
    ))
    out.append(TaskSpec(
        task_id="max_clique",
        title="Maximum clique size",
        description=(
            "Find the size of the largest clique in the undirected graph: "
            "the largest set of nodes in which every two are adjacent. "
            "Return that size as an integer."
        ),
        answer_tag="integer",
        oracle=lambda g, a: graphs.max_clique_size(g),
        node_range=(2, 60),
        s_density=(0.1, 0.6),
        required_docs=("cliques.max_weight_clique",),
    ))
    out.append(TaskSpec(
        task_id="max_independent_set",
        title="Maximum independent set size",
        description=(
            "Find the size of the largest independent set in the undirected "
            "graph: the largest set of nodes no two of which are adjacent. "
            "Return that size as an integer."
        ),
        answer_tag="integer",
        oracle=lambda g, a: graphs.max_independent_set_size(g),
        node_range=(2, 60),
        s_density=(0.4, 0.9),
        l_node_range=(200, 400),
        l_density=(0.6, 0.75),
        required_docs=("cliques.complement", "cliques.max_weight_clique"),
    ))
    out.append(TaskSpec(
        task_id="clustering_coefficient",
        title="Local clustering coefficient",
        description=(
            "Compute the local clustering coefficient of node 'node' in the "
            "undirected graph: the fraction of pairs of its neighbors that "
            "are themselves connected. Edge weights do not enter the "
            "computation. Nodes with fewer than two neighbors score 0. "
            "Return the coefficient as a number between 0 and 1."
        ),
        answer_tag="real",
        oracle=lambda g, a: graphs.local_clustering(g, a["node"]),
        weighted=True,
        args_schema=("node",),
        args_desc=_ARGS_BASE + "; node: the node whose coefficient is wanted",
        node_range=(13, 200),
        l_node_range=(200, 8000),
        required_docs=("clustering.clustering",),
    ))
    out.append(TaskSpec(
        task_id="common_neighbors",
        title="Common neighbor count",
        description=(
            "Count the nodes adjacent to both 'node_u' and 'node_v' in the "
            "undirected graph. Return the count as an integer."
        ),
        answer_tag="integer",
        oracle=lambda g, a: graphs.common_neighbors(g, a["node_u"], a["node_v"]),
        args_schema=("node_u", "node_v"),
        args_desc=_ARGS_BASE + "; node_u, node_v: the two distinct nodes to compare",
        node_range=(16, 200),
        l_node_range=(200, 1800),
        required_docs=("clustering.common_neighbors",),
    ))

    # -- composites ---------------------------------------------------------
    out.append(TaskSpec(
        task_id="clustering_on_path",
        title="Clustering along a shortest path",
        description=(
            "In the undirected graph, find one shortest path from node "
            "'source' to node 'target' (fewest edges; when several "
            "predecessors tie during the backwards walk from target, take "
            "the smallest node id). Compute the local clustering "
            "coefficient of every node on that path, then select the path "
            "node with the highest coefficient, breaking ties toward the "
            "node nearer to source. Return a dictionary {\"node\": the "
            "selected node, \"coefficients\": the coefficients of all path "
            "nodes in path order}."
        ),
        answer_tag="labeled_map",
        oracle=lambda g, a: comp.clustering_on_shortest_path(g, a["source"], a["target"]),
        canonical=_pair_map,
        pattern="sequential",
        parts=frozenset({"shortest_path", "clustering_coefficient"}),
        args_schema=("source", "target"),
        args_desc=_ARGS_BASE + "; source: path start node; target: path end node",
        node_range=(2, 200),
        required_docs=("shortest_paths.shortest_path", "clustering.clustering"),
    ))
    out.append(TaskSpec(
        task_id="scc_diameters",
        title="Diameters of strongly connected components",
        description=(
            "Find the strongly connected components of the directed graph. "
            "For each component, take the subgraph induced on its nodes, "
            "treat it as undirected, and compute its diameter in hops. "
            "Return the list of diameters with components ordered by their "
            "smallest node id."
        ),
        answer_tag="real_list",
        oracle=lambda g, a: comp.scc_diameters(g),
        directed=True,
        pattern="sequential",
        parts=frozenset({"scc_count", "graph_diameter"}),
        node_range=(4, 200),
        required_docs=("connectivity.strongly_connected_components", "distance.diameter"),
    ))
    out.append(TaskSpec(
        task_id="scc_flow_best",
        title="Best component by flow and clustering",
        description=(
            "Find the strongly connected components of the directed, "
            "weighted graph. For each component let r be its smallest node "
            "id; score the component as the maximum flow from r to node "
            "'target' (edge weights are capacities, and the flow from "
            "'target' to itself is 0) multiplied by (1 + the clustering "
            "coefficient of r in the undirected version of the graph). "
            "Return the nodes of the highest-scoring component as a sorted "
            "list; on ties take the component with the smallest node id."
        ),
        answer_tag="node_list",
        oracle=lambda g, a: comp.scc_flow_clustering_best(g, a["target"]),
        directed=True,
        weighted=True,
        pattern="sequential",
        parts=frozenset({"scc_count", "max_flow", "clustering_coefficient"}),
        args_schema=("target",),
        args_desc=_ARGS_BASE + "; target: the flow sink node",
        node_range=(2, 60),
        required_docs=(
            "connectivity.strongly_connected_components",
            "flow.maximum_flow_value",
            "clustering.clustering",
        ),
    ))
    out.append(TaskSpec(
        task_id="pair_tightness",
        title="Pair tightness score",
        description=(
            "For nodes 'source' and 'target' in the undirected, weighted "
            "graph, compute T = (common + (Cs + Ct) / 2) / (1 + d), where "
            "common is the number of shared neighbors, Cs and Ct are the "
            "two nodes' local clustering coefficients (ignoring weights), "
            "and d is the weighted shortest-path distance between them. "
            "Return T as a number."
        ),
        answer_tag="real",
        oracle=lambda g, a: comp.pair_tightness(g, a["source"], a["target"]),
        weighted=True,
        pattern="parallel",
        parts=frozenset({"shortest_path", "common_neighbors", "clustering_coefficient"}),
        args_schema=("source", "target"),
        args_desc=_ARGS_BASE + "; source, target: the pair of nodes to score",
        node_range=(3, 200),
        required_docs=(
            "shortest_paths.dijkstra_path_length",
            "clustering.common_neighbors",
            "clustering.clustering",
        ),
    ))
    out.append(TaskSpec(
        task_id="bridge_hubs",
        title="Bridge hub ranking",
        description=(
            "In the connected undirected graph, score every node v as "
            "(1 - C(v)) / m(v), where C(v) is its local clustering "
            "coefficient and m(v) is the mean shortest-path distance in "
            "hops from v to every other node. Rank nodes by score, highest "
            "first, breaking ties by smaller node id, and keep the top k. "
            "Return a dictionary {\"nodes\": the k node ids in rank order, "
            "\"scores\": their scores in the same order}."
        ),
        answer_tag="labeled_map",
        oracle=lambda g, a: comp.bridge_hubs(g, a["k"]),
        canonical=_ranked_map,
        connected=True,
        pattern="parallel",
        parts=frozenset({"clustering_coefficient", "shortest_path"}),
        args_schema=("k",),
        args_desc=_ARGS_BASE + "; k: how many top nodes to return",
        node_range=(2, 200),
        required_docs=(
            "clustering.clustering",
            "shortest_paths.single_source_shortest_path_length",
        ),
    ))
    out.append(TaskSpec(
        task_id="endpoint_flow",
        title="Endpoint-aware flow score",
        description=(
            "Compute F, the maximum flow from node 'source' to node "
            "'target' in the directed, weighted graph (edge weights are "
            "capacities). Also compute the local clustering coefficients "
            "Cs and Ct of the two endpoints in the undirected version of "
            "the graph. Return F * (1 + (Cs + Ct) / 2) as a number."
        ),
        answer_tag="real",
        oracle=lambda g, a: comp.endpoint_aware_flow(g, a["source"], a["target"]),
        directed=True,
        weighted=True,
        pattern="parallel",
        parts=frozenset({"max_flow", "clustering_coefficient"}),
        args_schema=("source", "target"),
        args_desc=_ARGS_BASE + "; source: flow source node; target: flow sink node",
        node_range=(8, 198),
        required_docs=("flow.maximum_flow_value", "clustering.clustering"),
    ))
    out.append(TaskSpec(
        task_id="euler_or_clustering",
        title="Eulerian path or clustering fallback",
        description=(
            "Check whether the connected undirected graph has an Eulerian "
            "path (a trail using every edge exactly once; a graph with no "
            "edges counts as having one). If it does, return the diameter "
            "of the graph in hops. Otherwise return the larger of the "
            "local clustering coefficients of nodes 'source' and 'target'. "
            "Return the result as a number."
        ),
        answer_tag="real",
        oracle=lambda g, a: comp.eulerian_or_clustering(g, a["source"], a["target"]),
        connected=True,
        pattern="conditional",
        parts=frozenset({"eulerian_path", "graph_diameter", "clustering_coefficient"}),
        args_schema=("source", "target"),
        args_desc=_ARGS_BASE + "; source, target: fallback nodes for the clustering branch",
        node_range=(2, 200),
        required_docs=(
            "euler.has_eulerian_path",
            "distance.diameter",
            "clustering.clustering",
        ),
    ))
    out.append(TaskSpec(
        task_id="largest_component_diameter",
        title="Largest component diameter",
        description=(
            "If the undirected graph is connected, return its diameter in "
            "hops. Otherwise find its largest connected component, "
            "breaking size ties by the smallest node id in the component, "
            "and return that component's diameter. Return an integer."
        ),
        answer_tag="integer",
        oracle=lambda g, a: comp.connectivity_component_diameter(g),
        pattern="conditional",
        parts=frozenset({"connectivity", "component_count", "graph_diameter"}),
        node_range=(2, 200),
        required_docs=(
            "connectivity.is_connected",
            "connectivity.connected_components",
            "distance.diameter",
        ),
    ))
    out.append(TaskSpec(
        task_id="scc_euler_score",
        title="Eulerian-gated component score",
        description=(
            "Check whether the directed graph has an Eulerian path (a "
            "directed trail using every edge exactly once; a graph with no "
            "edges counts as having one). If it does, return the size of "
            "the largest strongly connected component; otherwise return "
            "the number of strongly connected components. Return an "
            "integer."
        ),
        answer_tag="integer",
        oracle=lambda g, a: comp.scc_eulerian_score(g),
        directed=True,
        pattern="conditional",
        parts=frozenset({"eulerian_path", "scc_count"}),
        node_range=(4, 200),
        required_docs=(
            "euler.has_eulerian_path",
            "connectivity.strongly_connected_components",
        ),
    ))
    return out


REGISTRY = {spec.task_id: spec for spec in _specs()}

_COMPOSITE_INDEX = {
    (spec.parts, spec.pattern): spec
    for spec in REGISTRY.values()
    if spec.is_composite
}


def get_task(task_id: str) -> TaskSpec:
    try:
        return REGISTRY[task_id]
    except KeyError:
        raise UnknownTask(f"no such task: {task_id!r}") from None


def primitive_tasks() -> list:
    return [s for s in REGISTRY.values() if not s.is_composite]


def composite_tasks() -> list:
    return [s for s in REGISTRY.values() if s.is_composite]


def compose_task(part_ids, pattern: str) -> TaskSpec:
    """Look up the composite task built from the given primitive parts."""
    for pid in part_ids:
        if pid not in REGISTRY or REGISTRY[pid].is_composite:
            raise IncoherentComposition(f"not a primitive task: {pid!r}")
    key = (frozenset(part_ids), pattern)
    spec = _COMPOSITE_INDEX.get(key)
    if spec is None:
        raise IncoherentComposition(
            f"no composite combines {sorted(part_ids)!r} with pattern {pattern!r}"
        )
    return spec


def oracle_by_task() -> dict:
    """task_id -> callable(graph, args) returning the canonical label.
    The shape stub executors want."""
    return {tid: spec.label for tid, spec in REGISTRY.items()}

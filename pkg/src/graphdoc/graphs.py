"""Graph data model, answer comparison policy, and exact reference oracles.

Everything here is pure: oracles take an immutable :class:`GraphInstance`
and return plain Python values. Wrong graph kinds raise :class:`KindMismatch`
instead of silently coercing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import networkx as nx

ABS_TOL = 1e-6
REL_TOL = 1e-9

ANSWER_TAGS = frozenset(
    {"boolean", "integer", "real", "node_id", "node_list", "real_list", "labeled_map"}
)


class GraphError(Exception):
    """Base class for graph-domain failures."""


class KindMismatch(GraphError):
    """Graph is directed/weighted when the operation needs the opposite."""


class NoPath(GraphError):
    """No path exists between the requested endpoints."""


class Disconnected(GraphError):
    """Operation requires a connected graph."""


@dataclass(frozen=True)
class GraphInstance:
    """An immutable graph: explicit node set plus an edge tuple.

    Edges are (u, v) pairs when unweighted and (u, v, w) triples when
    weighted. The node set may contain ids that appear in no edge.
    """

    directed: bool
    weighted: bool
    nodes: frozenset
    edges: tuple

    def __post_init__(self):
        for e in self.edges:
            if self.weighted:
                if len(e) != 3:
                    raise GraphError(f"weighted edge must be a triple: {e!r}")
                if e[2] < 0:
                    raise GraphError(f"negative weight not supported: {e!r}")
            elif len(e) != 2:
                raise GraphError(f"unweighted edge must be a pair: {e!r}")
            if e[0] not in self.nodes or e[1] not in self.nodes:
                raise GraphError(f"edge endpoint missing from node set: {e!r}")

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def from_edges(
    edges: Iterable[Sequence],
    *,
    directed: bool,
    weighted: bool,
    num_nodes: int | None = None,
    nodes: Iterable | None = None,
) -> GraphInstance:
    """Build a GraphInstance from an edge list.

    Nodes default to the edge endpoints; ``num_nodes`` adds 0..num_nodes-1
    so isolated nodes survive the edge-list encoding.
    """
    edge_tuples = []
    node_set = set(nodes) if nodes is not None else set()
    if num_nodes is not None:
        node_set.update(range(int(num_nodes)))
    # an explicit node set is a contract; inferred sets grow with the edges
    closed = nodes is not None or num_nodes is not None
    for e in edges:
        e = tuple(e)
        if len(e) not in (2, 3):
            raise GraphError(f"edge must be a pair or weighted triple: {e!r}")
        if weighted and len(e) == 2:
            e = (e[0], e[1], 1.0)
        if not weighted and len(e) == 3:
            e = (e[0], e[1])
        edge_tuples.append(e)
        for end in (e[0], e[1]):
            if end not in node_set:
                if closed:
                    raise GraphError(f"edge endpoint outside the graph: {end!r}")
                node_set.add(end)
    return GraphInstance(
        directed=directed,
        weighted=weighted,
        nodes=frozenset(node_set),
        edges=tuple(edge_tuples),
    )


def to_networkx(g: GraphInstance):
    """Materialize as a networkx (Di)Graph with weight/capacity attributes."""
    G = nx.DiGraph() if g.directed else nx.Graph()
    G.add_nodes_from(g.nodes)
    if g.weighted:
        for u, v, w in g.edges:
            if G.has_edge(u, v):
                # parallel edges collapse by summing, matching flow semantics
                G[u][v]["weight"] += w
                G[u][v]["capacity"] += w
            else:
                G.add_edge(u, v, weight=w, capacity=w)
    else:
        for u, v in g.edges:
            G.add_edge(u, v, weight=1.0, capacity=1.0)
    return G


def undirected_view(g: GraphInstance) -> GraphInstance:
    """Collapse a directed graph onto its undirected, unweighted skeleton."""
    pairs = {tuple(sorted((e[0], e[1]))) for e in g.edges if e[0] != e[1]}
    return GraphInstance(
        directed=False,
        weighted=False,
        nodes=g.nodes,
        edges=tuple(sorted(pairs)),
    )


def _require(g: GraphInstance, *, directed: bool | None = None) -> None:
    if directed is not None and g.directed != directed:
        want = "directed" if directed else "undirected"
        raise KindMismatch(f"operation requires an {want} graph")


def _nonempty(g: GraphInstance) -> None:
    if not g.nodes:
        raise GraphError("operation undefined on the empty graph")


# ---------------------------------------------------------------------------
# Connectivity family


def is_connected(g: GraphInstance) -> bool:
    _require(g, directed=False)
    _nonempty(g)
    return nx.is_connected(to_networkx(g))


def count_components(g: GraphInstance) -> int:
    _require(g, directed=False)
    _nonempty(g)
    return nx.number_connected_components(to_networkx(g))


def scc_partition(g: GraphInstance) -> list[list]:
    """Strongly connected components as sorted node lists, ordered by min id."""
    _require(g, directed=True)
    _nonempty(g)
    comps = [sorted(c) for c in nx.strongly_connected_components(to_networkx(g))]
    comps.sort(key=lambda c: c[0])
    return comps


def count_scc(g: GraphInstance) -> int:
    return len(scc_partition(g))


# ---------------------------------------------------------------------------
# Paths and distances


def shortest_path_length(g: GraphInstance, s, t) -> float:
    """Length of a shortest s-t path: weight sum if weighted, hops otherwise."""
    if s not in g.nodes or t not in g.nodes:
        raise GraphError(f"endpoint not in graph: {s!r}/{t!r}")
    if s == t:
        return 0.0
    G = to_networkx(g)
    try:
        weight = "weight" if g.weighted else None
        return float(nx.shortest_path_length(G, s, t, weight=weight))
    except nx.NetworkXNoPath:
        raise NoPath(f"no path from {s!r} to {t!r}") from None


def shortest_path_nodes(g: GraphInstance, s, t) -> list:
    """One canonical shortest path (fewest hops), deterministic.

    BFS from s; the path is reconstructed backwards from t, always stepping
    to the smallest-id predecessor in the previous BFS layer.
    """
    if s not in g.nodes or t not in g.nodes:
        raise GraphError(f"endpoint not in graph: {s!r}/{t!r}")
    adj: dict[Any, set] = {v: set() for v in g.nodes}
    for e in g.edges:
        adj[e[0]].add(e[1])
        if not g.directed:
            adj[e[1]].add(e[0])
    dist = {s: 0}
    frontier = [s]
    while frontier and t not in dist:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    if t not in dist:
        raise NoPath(f"no path from {s!r} to {t!r}")
    rev: dict[Any, set] = {v: set() for v in g.nodes}
    for e in g.edges:
        rev[e[1]].add(e[0])
        if not g.directed:
            rev[e[0]].add(e[1])
    path = [t]
    cur = t
    while cur != s:
        cur = min(u for u in rev[cur] if dist.get(u) == dist[cur] - 1)
        path.append(cur)
    path.reverse()
    return path


def diameter(g: GraphInstance) -> int:
    """Longest shortest-path distance in hops. Requires a connected graph."""
    _require(g, directed=False)
    _nonempty(g)
    G = to_networkx(g)
    if not nx.is_connected(G):
        raise Disconnected("diameter undefined on a disconnected graph")
    if G.number_of_nodes() == 1:
        return 0
    return int(nx.diameter(G))


# ---------------------------------------------------------------------------
# Structure predicates


def has_eulerian_path(g: GraphInstance) -> bool:
    """True when one trail covers every edge.

    A graph with no edges trivially has one (the empty trail), whatever its
    node count; with edges present the usual degree and connectivity
    conditions apply.
    """
    _nonempty(g)
    if g.num_edges == 0:
        return True
    G = to_networkx(g)
    # a trail only cares about nodes that touch an edge
    G.remove_nodes_from([v for v, d in list(G.degree()) if d == 0])
    return bool(nx.has_eulerian_path(G))


def is_bipartite(g: GraphInstance) -> bool:
    _require(g, directed=False)
    _nonempty(g)
    return nx.is_bipartite(to_networkx(g))


def is_regular(g: GraphInstance) -> bool:
    _require(g, directed=False)
    _nonempty(g)
    degs = {d for _, d in to_networkx(g).degree()}
    return len(degs) <= 1


def is_distance_regular(g: GraphInstance) -> bool:
    _require(g, directed=False)
    _nonempty(g)
    G = to_networkx(g)
    G.remove_edges_from(nx.selfloop_edges(G))
    if G.number_of_nodes() == 1:
        return True
    if not nx.is_connected(G):
        return False
    return bool(nx.is_distance_regular(G))


# ---------------------------------------------------------------------------
# Optimization family


def max_flow_value(g: GraphInstance, s, t) -> float:
    """Maximum s-t flow. Undirected edges act as arc pairs of equal capacity."""
    if s not in g.nodes or t not in g.nodes:
        raise GraphError(f"endpoint not in graph: {s!r}/{t!r}")
    if s == t:
        return 0.0
    G = nx.DiGraph()
    G.add_nodes_from(g.nodes)
    for e in g.edges:
        w = float(e[2]) if g.weighted else 1.0
        arcs = [(e[0], e[1])] if g.directed else [(e[0], e[1]), (e[1], e[0])]
        for u, v in arcs:
            if u == v:
                continue
            if G.has_edge(u, v):
                G[u][v]["capacity"] += w
            else:
                G.add_edge(u, v, capacity=w)
    return float(nx.maximum_flow_value(G, s, t))


def _simple_undirected(g: GraphInstance):
    G = to_networkx(g)
    G.remove_edges_from(nx.selfloop_edges(G))
    return G


def max_clique_size(g: GraphInstance) -> int:
    _require(g, directed=False)
    _nonempty(g)
    G = _simple_undirected(g)
    _, size = nx.max_weight_clique(G, weight=None)
    return int(size)


def max_independent_set_size(g: GraphInstance) -> int:
    _require(g, directed=False)
    _nonempty(g)
    G = nx.complement(_simple_undirected(g))
    _, size = nx.max_weight_clique(G, weight=None)
    return int(size)


# ---------------------------------------------------------------------------
# Local neighborhood family


def local_clustering(g: GraphInstance, v) -> float:
    """Fraction of neighbor pairs of v that are themselves adjacent.

    Weights are ignored; nodes of degree < 2 score 0.0.
    """
    _require(g, directed=False)
    if v not in g.nodes:
        raise GraphError(f"node not in graph: {v!r}")
    return float(nx.clustering(_simple_undirected(g), v))


def common_neighbors(g: GraphInstance, u, v) -> int:
    _require(g, directed=False)
    if u not in g.nodes or v not in g.nodes:
        raise GraphError(f"endpoint not in graph: {u!r}/{v!r}")
    if u == v:
        raise GraphError("common neighbors needs two distinct nodes")
    G = _simple_undirected(g)
    return sum(1 for _ in nx.common_neighbors(G, u, v))


# ---------------------------------------------------------------------------
# Answer values and the comparison policy


@dataclass(frozen=True)
class AnswerValue:
    """A task answer with an explicit comparison tag."""

    tag: str
    value: Any

    def __post_init__(self):
        if self.tag not in ANSWER_TAGS:
            raise ValueError(f"unknown answer tag: {self.tag!r}")


def _real_close(a, b, abs_tol: float, rel_tol: float) -> bool:
    try:
        fa, fb = float(a), float(b)
    except (TypeError, ValueError):
        return False
    return abs(fa - fb) <= max(abs_tol, rel_tol * abs(fb))


def _as_int(x):
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return x
    if isinstance(x, float) and x == int(x):
        return int(x)
    return None


def _generic_equal(a, b, abs_tol, rel_tol) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return _real_close(a, b, abs_tol, rel_tol)
    if isinstance(a, str) or isinstance(b, str):
        return a == b
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        if len(a) != len(b):
            return False
        return all(_generic_equal(x, y, abs_tol, rel_tol) for x, y in zip(a, b))
    if isinstance(a, Mapping) and isinstance(b, Mapping):
        if set(a.keys()) != set(b.keys()):
            return False
        return all(_generic_equal(a[k], b[k], abs_tol, rel_tol) for k in a)
    return a == b


def _tagged_equal(tag: str, a, b, abs_tol, rel_tol) -> bool:
    if a is None or b is None:
        return False
    if tag == "boolean":
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if tag in ("integer", "node_id"):
        ia, ib = _as_int(a), _as_int(b)
        return ia is not None and ib is not None and ia == ib
    if tag == "real":
        if isinstance(a, bool) or isinstance(b, bool):
            return False
        return _real_close(a, b, abs_tol, rel_tol)
    if tag == "node_list":
        if not isinstance(a, (list, tuple)) or not isinstance(b, (list, tuple)):
            return False
        ia = [_as_int(x) for x in a]
        ib = [_as_int(x) for x in b]
        return None not in ia and None not in ib and ia == ib
    if tag == "real_list":
        if not isinstance(a, (list, tuple)) or not isinstance(b, (list, tuple)):
            return False
        if len(a) != len(b):
            return False
        return all(_real_close(x, y, abs_tol, rel_tol) for x, y in zip(a, b))
    if tag == "labeled_map":
        if not isinstance(a, Mapping) or not isinstance(b, Mapping):
            return False
        if set(a.keys()) != set(b.keys()):
            return False
        return all(_generic_equal(a[k], b[k], abs_tol, rel_tol) for k in a)
    raise ValueError(f"unknown answer tag: {tag!r}")


def answers_equal(a, b, *, abs_tol: float = ABS_TOL, rel_tol: float = REL_TOL) -> bool:
    """Compare a predicted answer against an expected one.

    Either side may be an :class:`AnswerValue`; a tag on either side pins
    the comparison policy. ``None`` (a candidate that bailed out) never
    matches a concrete expectation. Reals compare within
    ``max(abs_tol, rel_tol * |expected|)``; lists are order-sensitive.
    """
    tag = None
    if isinstance(b, AnswerValue):
        tag, b = b.tag, b.value
    if isinstance(a, AnswerValue):
        if tag is not None and a.tag != tag:
            return False
        tag, a = a.tag, a.value
    if tag is None:
        return _generic_equal(a, b, abs_tol, rel_tol)
    return _tagged_equal(tag, a, b, abs_tol, rel_tol)

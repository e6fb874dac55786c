"""Composite graph oracles: multi-step tasks built from the primitive ones.

Each function states its graph-kind requirements and composes primitives
from :mod:`graphdoc.graphs`. Tie-breaks are pinned so labels are unique.
"""
from __future__ import annotations

import networkx as nx

from .graphs import (
    Disconnected,
    GraphInstance,
    KindMismatch,
    NoPath,
    GraphError,
    count_scc,
    diameter,
    has_eulerian_path,
    is_connected,
    local_clustering,
    max_flow_value,
    scc_partition,
    shortest_path_length,
    shortest_path_nodes,
    to_networkx,
    undirected_view,
    common_neighbors,
)


def _require_kind(g: GraphInstance, *, directed: bool, weighted: bool) -> None:
    if g.directed != directed:
        want = "directed" if directed else "undirected"
        raise KindMismatch(f"task requires an {want} graph")
    if g.weighted != weighted:
        want = "weighted" if weighted else "unweighted"
        raise KindMismatch(f"task requires a {want} graph")


def clustering_on_shortest_path(g: GraphInstance, s, t) -> tuple:
    """Walk one canonical shortest s-t path and return the node on it with
    the highest clustering coefficient, plus every path node's coefficient.

    Ties go to the node closer to s. Returns (winner, coefficients) with
    coefficients listed in path order.
    """
    _require_kind(g, directed=False, weighted=False)
    path = shortest_path_nodes(g, s, t)
    coeffs = [local_clustering(g, v) for v in path]
    best = 0
    for i in range(1, len(path)):
        if coeffs[i] > coeffs[best]:
            best = i
    return path[best], coeffs


def scc_diameters(g: GraphInstance) -> list:
    """Diameter of each strongly connected component's undirected subgraph.

    Components are reported in ascending order of their smallest node id.
    """
    if g.directed is not True:
        raise KindMismatch("task requires a directed graph")
    out = []
    skel = undirected_view(g)
    for comp in scc_partition(g):
        members = set(comp)
        sub_edges = tuple(e for e in skel.edges if e[0] in members and e[1] in members)
        sub = GraphInstance(
            directed=False, weighted=False, nodes=frozenset(members), edges=sub_edges
        )
        out.append(diameter(sub))
    return out


def scc_flow_clustering_best(g: GraphInstance, t) -> list:
    """Score each SCC by flow from its smallest node to t, scaled by that
    node's clustering in the undirected skeleton; return the winning SCC.

    score(C) = flow(min(C), t) * (1 + clustering(min(C))). Flow from t to
    itself is zero, so t's own singleton component scores 0. Ties go to the
    component with the smallest minimum node id. The winner is returned as
    a sorted node list.
    """
    _require_kind(g, directed=True, weighted=True)
    if t not in g.nodes:
        raise GraphError(f"target not in graph: {t!r}")
    skel = undirected_view(g)
    best_comp = None
    best_score = None
    for comp in scc_partition(g):
        rep = comp[0]
        flow = max_flow_value(g, rep, t)
        score = flow * (1.0 + local_clustering(skel, rep))
        if best_score is None or score > best_score:
            best_comp, best_score = comp, score
    return list(best_comp)


def pair_tightness(g: GraphInstance, s, t) -> float:
    """How tightly two nodes are coupled: shared neighborhood and local
    clustering, discounted by their weighted distance.

    T = (|common neighbors| + (C(s)+C(t))/2) / (1 + dist(s, t)).
    Unreachable pairs raise NoPath. s == t degenerates to |N(s)| + C(s).
    """
    _require_kind(g, directed=False, weighted=True)
    cs = local_clustering(g, s)
    if s == t:
        G = to_networkx(g)
        G.remove_edges_from([(u, v) for u, v in G.edges() if u == v])
        return float(G.degree(s) + cs)
    ct = local_clustering(g, t)
    d = shortest_path_length(g, s, t)
    shared = common_neighbors(g, s, t)
    return float((shared + (cs + ct) / 2.0) / (1.0 + d))


def bridge_hubs(g: GraphInstance, k: int) -> list:
    """Top-k nodes ranked by (1 - clustering) / mean-distance-to-others.

    High scores mark nodes that reach the rest of the graph quickly while
    sitting in sparse neighborhoods. Requires a connected graph. Returns at
    most k (node, score) pairs, score descending, ties by node id. A
    single-node graph scores its node 0.0.
    """
    _require_kind(g, directed=False, weighted=False)
    if not is_connected(g):
        raise Disconnected("bridge hubs need a connected graph")
    if k < 1:
        raise GraphError(f"k must be positive: {k!r}")
    n = g.num_nodes
    G = to_networkx(g)
    scored = []
    for v in sorted(g.nodes):
        if n == 1:
            scored.append((v, 0.0))
            continue
        hops = nx.single_source_shortest_path_length(G, v)
        total = sum(d for u, d in hops.items() if u != v)
        mean_dist = total / (n - 1)
        scored.append((v, (1.0 - local_clustering(g, v)) / mean_dist))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[: min(k, n)]


def endpoint_aware_flow(g: GraphInstance, s, t) -> float:
    """Maximum s-t flow scaled up by the endpoints' mean clustering:
    S = F * (1 + (C(s)+C(t))/2), clustering taken on the undirected skeleton.
    """
    _require_kind(g, directed=True, weighted=True)
    flow = max_flow_value(g, s, t)
    skel = undirected_view(g)
    cs = local_clustering(skel, s)
    ct = local_clustering(skel, t)
    return float(flow * (1.0 + (cs + ct) / 2.0))


def eulerian_or_clustering(g: GraphInstance, s, t) -> float:
    """Diameter when an Eulerian path exists, otherwise the larger of the
    two endpoints' clustering coefficients.
    """
    _require_kind(g, directed=False, weighted=False)
    if has_eulerian_path(g):
        return float(diameter(g))
    return float(max(local_clustering(g, s), local_clustering(g, t)))


def connectivity_component_diameter(g: GraphInstance) -> int:
    """Diameter of the whole graph when connected, else of its largest
    component (ties broken by smallest minimum node id).
    """
    _require_kind(g, directed=False, weighted=False)
    if is_connected(g):
        return diameter(g)
    G = to_networkx(g)
    comps = [sorted(c) for c in nx.connected_components(G)]
    comps.sort(key=lambda c: (-len(c), c[0]))
    members = set(comps[0])
    sub_edges = tuple(e for e in g.edges if e[0] in members and e[1] in members)
    sub = GraphInstance(
        directed=False, weighted=False, nodes=frozenset(members), edges=sub_edges
    )
    return diameter(sub)


def scc_eulerian_score(g: GraphInstance) -> int:
    """Size of the largest SCC when a (directed) Eulerian path exists,
    otherwise the number of SCCs.
    """
    _require_kind(g, directed=True, weighted=False)
    parts = scc_partition(g)
    if has_eulerian_path(g):
        return max(len(c) for c in parts)
    return len(parts)

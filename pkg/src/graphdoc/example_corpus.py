"""A small bundled documentation tree over common graph-library functions.

Three layers: a root, topical chapters, and function-entry leaves. The task
registry's required_docs point at these leaf ids, which makes the bundle a
ready-made corpus for demos, retrieval evaluation, and the offline mock.
"""
from __future__ import annotations

from .doctree import DocTree, build_tree

_SIG = "Signature"

# chapter id -> (title, summary, {leaf suffix: (title, summary, body)})
_CHAPTERS = {
    "connectivity": (
        "Connectivity and components",
        "Whether a graph holds together: connectivity tests, connected and "
        "strongly connected components, and component counting.",
        {
            "is_connected": (
                "is_connected",
                "Test whether an undirected graph is connected.",
                "is_connected(G)\n\nReturns True when every node of the "
                "undirected graph G can reach every other node, False "
                "otherwise. Raises an error on the null graph.\n\nExample:\n"
                "  G = nx.path_graph(4)\n  nx.is_connected(G)  # True",
            ),
            "number_connected_components": (
                "number_connected_components",
                "Count the connected components of an undirected graph.",
                "number_connected_components(G)\n\nReturns the number of "
                "connected components of G. Isolated nodes each form their "
                "own component.\n\nExample:\n  G = nx.Graph([(0, 1), (2, 3)])\n"
                "  nx.number_connected_components(G)  # 2",
            ),
            "connected_components": (
                "connected_components",
                "Iterate over the node sets of each connected component.",
                "connected_components(G)\n\nYields one set of nodes per "
                "connected component of the undirected graph G, largest "
                "cheapest to find first is not guaranteed; sort the output "
                "when order matters.\n\nExample:\n"
                "  comps = sorted(nx.connected_components(G), key=len)",
            ),
            "strongly_connected_components": (
                "strongly_connected_components",
                "Iterate over the strongly connected components of a digraph.",
                "strongly_connected_components(G)\n\nYields the node set of "
                "each strongly connected component of the directed graph G: "
                "maximal sets in which every node reaches every other along "
                "directed edges.\n\nExample:\n"
                "  sccs = list(nx.strongly_connected_components(G))",
            ),
            "number_strongly_connected_components": (
                "number_strongly_connected_components",
                "Count the strongly connected components of a digraph.",
                "number_strongly_connected_components(G)\n\nReturns how many "
                "strongly connected components the directed graph G has. "
                "Every node belongs to exactly one.\n\nExample:\n"
                "  nx.number_strongly_connected_components(G)",
            ),
        },
    ),
    "shortest_paths": (
        "Shortest paths",
        "Finding shortest routes: path reconstruction, weighted and "
        "unweighted distances, single-source sweeps.",
        {
            "shortest_path": (
                "shortest_path",
                "Compute one shortest path between two nodes.",
                "shortest_path(G, source, target, weight=None)\n\nReturns a "
                "list of nodes along one shortest path from source to "
                "target. With weight=None the path minimizes hop count; "
                "pass weight='weight' to minimize total edge weight. Raises "
                "NetworkXNoPath when target is unreachable.",
            ),
            "dijkstra_path_length": (
                "dijkstra_path_length",
                "Weighted shortest-path distance between two nodes.",
                "dijkstra_path_length(G, source, target, weight='weight')\n\n"
                "Returns the minimum total edge weight over paths from "
                "source to target, using Dijkstra's algorithm; weights must "
                "be non-negative. Works on directed and undirected graphs. "
                "Raises NetworkXNoPath when no path exists.\n\nExample:\n"
                "  nx.dijkstra_path_length(G, 0, 5)",
            ),
            "single_source_shortest_path_length": (
                "single_source_shortest_path_length",
                "Hop distances from one node to every reachable node.",
                "single_source_shortest_path_length(G, source)\n\nReturns a "
                "mapping node -> distance in hops from the source, covering "
                "every reachable node. Handy for eccentricity and averaged "
                "distance computations.",
            ),
            "average_shortest_path_length": (
                "average_shortest_path_length",
                "Mean shortest-path distance over all node pairs.",
                "average_shortest_path_length(G, weight=None)\n\nReturns the "
                "average of shortest-path distances over all ordered node "
                "pairs of a connected graph. Raises an error when G is "
                "disconnected.",
            ),
        },
    ),
    "flow": (
        "Network flow",
        "Pushing flow through capacitated networks: maximum flow values, "
        "flow dictionaries, and minimum cuts.",
        {
            "maximum_flow_value": (
                "maximum_flow_value",
                "Value of a maximum source-to-sink flow.",
                "maximum_flow_value(G, s, t, capacity='capacity')\n\nReturns "
                "the value of a maximum flow from s to t, reading each "
                "edge's capacity from the given attribute. The graph should "
                "be directed; model an undirected edge as two opposite arcs "
                "of equal capacity.\n\nExample:\n"
                "  nx.maximum_flow_value(G, 0, 7)",
            ),
            "maximum_flow": (
                "maximum_flow",
                "Maximum flow value plus the per-edge flow assignment.",
                "maximum_flow(G, s, t, capacity='capacity')\n\nReturns a pair "
                "(flow_value, flow_dict) where flow_dict[u][v] gives the "
                "flow routed along edge (u, v).",
            ),
            "minimum_cut": (
                "minimum_cut",
                "Minimum s-t cut value and the partition achieving it.",
                "minimum_cut(G, s, t, capacity='capacity')\n\nReturns "
                "(cut_value, (reachable, non_reachable)). By max-flow "
                "min-cut duality the cut value equals the maximum flow.",
            ),
        },
    ),
    "cliques": (
        "Cliques and independent sets",
        "Dense and sparse node subsets: maximum cliques, independent sets, "
        "and the complement trick linking the two.",
        {
            "max_weight_clique": (
                "max_weight_clique",
                "Exact maximum clique via branch and bound.",
                "max_weight_clique(G, weight=None)\n\nReturns (clique, "
                "weight) for a maximum-weight clique. With weight=None every "
                "node counts 1, so the result is a maximum-cardinality "
                "clique and its size. Exact, exponential in the worst case.",
            ),
            "find_cliques": (
                "find_cliques",
                "Enumerate all maximal cliques.",
                "find_cliques(G)\n\nYields each maximal clique of the "
                "undirected graph as a node list. The largest of them is a "
                "maximum clique, but enumeration can be expensive on dense "
                "graphs.",
            ),
            "complement": (
                "complement",
                "Graph complement: edges become non-edges and vice versa.",
                "complement(G)\n\nReturns a new graph on the same nodes in "
                "which two nodes are adjacent exactly when they were not "
                "adjacent in G. An independent set of G is a clique of the "
                "complement, so maximum independent set reduces to maximum "
                "clique on complement(G).",
            ),
            "maximal_independent_set": (
                "maximal_independent_set",
                "One maximal (not maximum) independent set, randomized.",
                "maximal_independent_set(G, seed=None)\n\nReturns an "
                "independent set that cannot be extended, which may be far "
                "smaller than the maximum one. For exact maximum size use "
                "the complement plus an exact clique routine.",
            ),
        },
    ),
    "clustering": (
        "Clustering and neighborhoods",
        "Local neighborhood structure: clustering coefficients, triangle "
        "counts, and shared neighbors of node pairs.",
        {
            "clustering": (
                "clustering",
                "Local clustering coefficient of nodes.",
                "clustering(G, nodes=None, weight=None)\n\nFor one node, "
                "returns the fraction of its neighbor pairs that are "
                "themselves adjacent; nodes with fewer than two neighbors "
                "score 0. With weight=None edge weights are ignored.\n\n"
                "Example:\n  nx.clustering(G, 3)  # a float in [0, 1]",
            ),
            "average_clustering": (
                "average_clustering",
                "Mean clustering coefficient over all nodes.",
                "average_clustering(G)\n\nReturns the average of the local "
                "clustering coefficients of every node in G.",
            ),
            "triangles": (
                "triangles",
                "Number of triangles through each node.",
                "triangles(G, nodes=None)\n\nReturns the number of triangles "
                "that include each queried node of an undirected graph. "
                "Divide by the number of neighbor pairs to recover the "
                "clustering coefficient.",
            ),
            "common_neighbors": (
                "common_neighbors",
                "Nodes adjacent to both of two given nodes.",
                "common_neighbors(G, u, v)\n\nReturns an iterator over the "
                "nodes adjacent to both u and v in an undirected graph; u "
                "and v must be distinct. Wrap in list() or sum 1s to "
                "count.\n\nExample:\n  len(list(nx.common_neighbors(G, 0, 1)))",
            ),
        },
    ),
    "euler": (
        "Eulerian walks",
        "Trails that use every edge exactly once: existence tests and "
        "construction for Eulerian paths and circuits.",
        {
            "has_eulerian_path": (
                "has_eulerian_path",
                "Test whether a graph has an Eulerian path.",
                "has_eulerian_path(G)\n\nReturns True when G contains a "
                "trail using every edge exactly once. Undirected graphs "
                "qualify when they have at most two odd-degree nodes and "
                "the edges sit in one component; digraphs have analogous "
                "in/out-degree conditions.",
            ),
            "is_eulerian": (
                "is_eulerian",
                "Test whether a graph has a closed Eulerian circuit.",
                "is_eulerian(G)\n\nReturns True when G has a closed walk "
                "using every edge exactly once: connected with all degrees "
                "even (undirected), or in-degree equal to out-degree "
                "everywhere (directed).",
            ),
            "eulerian_path": (
                "eulerian_path",
                "Construct an Eulerian path edge by edge.",
                "eulerian_path(G)\n\nYields the edges of one Eulerian path "
                "of G. Raises an error when no such path exists, so test "
                "with has_eulerian_path first.",
            ),
        },
    ),
    "bipartite": (
        "Bipartite structure",
        "Two-colorable graphs: bipartiteness tests and the node sets "
        "realizing a bipartition.",
        {
            "is_bipartite": (
                "is_bipartite",
                "Test whether a graph is two-colorable.",
                "is_bipartite(G)\n\nReturns True when the nodes of G can be "
                "split into two sets with every edge running between the "
                "sets, equivalently when G has no odd cycle.\n\nExample:\n"
                "  nx.is_bipartite(nx.cycle_graph(4))  # True",
            ),
            "bipartite_sets": (
                "bipartite_sets",
                "The two color classes of a connected bipartite graph.",
                "bipartite.sets(G)\n\nReturns the pair of node sets forming "
                "a bipartition of G. Raises an error when G is not "
                "bipartite or is ambiguous due to disconnection.",
            ),
        },
    ),
    "distance": (
        "Distance measures",
        "Global distance statistics: eccentricity, diameter, and "
        "distance-regularity of graphs.",
        {
            "diameter": (
                "diameter",
                "Greatest shortest-path distance in the graph.",
                "diameter(G)\n\nReturns the maximum eccentricity over nodes: "
                "the largest hop-count shortest-path distance between any "
                "two nodes. Raises an error when G is disconnected.\n\n"
                "Example:\n  nx.diameter(nx.path_graph(4))  # 3",
            ),
            "eccentricity": (
                "eccentricity",
                "Farthest-node distance for each node.",
                "eccentricity(G, v=None)\n\nReturns the maximum distance "
                "from v to any other node, or a dict of eccentricities for "
                "all nodes when v is None. The diameter is the maximum "
                "eccentricity; the radius is the minimum.",
            ),
            "is_distance_regular": (
                "is_distance_regular",
                "Test for distance-regularity.",
                "is_distance_regular(G)\n\nReturns True when G is "
                "distance-regular: connected, regular, and with intersection "
                "numbers depending only on distance, not on the node pair "
                "chosen. Cycles and complete graphs qualify.",
            ),
            "intersection_array": (
                "intersection_array",
                "Intersection numbers of a distance-regular graph.",
                "intersection_array(G)\n\nReturns the arrays (b, c) of "
                "forward and backward intersection numbers. Only defined "
                "for distance-regular graphs.",
            ),
        },
    ),
    "properties": (
        "Degree-based properties",
        "Quick structural predicates and statistics driven by node degrees: "
        "regularity, degree histograms, density.",
        {
            "is_regular": (
                "is_regular",
                "Test whether every node has the same degree.",
                "is_regular(G)\n\nReturns True when all nodes of G share one "
                "degree (for digraphs: equal in-degree and out-degree "
                "everywhere). A single isolated node is 0-regular.",
            ),
            "degree_histogram": (
                "degree_histogram",
                "Count of nodes per degree value.",
                "degree_histogram(G)\n\nReturns a list whose i-th entry is "
                "the number of nodes of degree i.",
            ),
            "density": (
                "density",
                "Ratio of present edges to possible edges.",
                "density(G)\n\nReturns m / (n*(n-1)/2) for undirected graphs "
                "and m / (n*(n-1)) for directed ones; 0 for edgeless "
                "graphs.",
            ),
        },
    ),
}


def example_tree() -> DocTree:
    """Build the bundled documentation tree."""
    raw = {
        "root": {
            "title": "Graph library reference",
            "summary": "Function-level documentation for graph algorithms.",
            "body": "",
            "children": list(_CHAPTERS.keys()),
        }
    }
    for chap_id, (title, summary, leaves) in _CHAPTERS.items():
        raw[chap_id] = {
            "title": title,
            "summary": summary,
            "body": "",
            "children": [f"{chap_id}.{leaf}" for leaf in leaves],
        }
        for leaf, (ltitle, lsummary, lbody) in leaves.items():
            raw[f"{chap_id}.{leaf}"] = {
                "title": ltitle,
                "summary": lsummary,
                "body": lbody,
                "children": [],
            }
    return build_tree("root", raw)

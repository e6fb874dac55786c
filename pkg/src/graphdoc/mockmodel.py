"""A deterministic offline stand-in for the chat model.

RuleBackend answers every prompt purpose by rule: keyword overlap for the
two retrieval judgments, canned labeled cases for test generation, and
canned solution programs for code generation. It lets the whole pipeline
run end to end with no network, and the transcripts it produces replay
byte for byte.
"""
from __future__ import annotations

import json
import re

from .agent import balanced_span
from .gateway import ChatRequest, ChatResponse, TransportError
from .graphs import from_edges
from .tasks import REGISTRY, TaskSpec, UnknownTask

_WORD = re.compile(r"[a-z0-9]+")

_STOP = frozenset(
    "a an and are as at be by every for from graph has in is it its node "
    "nodes of on or return that the their them to two when whether with "
    "number".split()
)


def _tokens(text: str) -> set:
    out = set()
    for tok in _WORD.findall(text.lower()):
        if tok in _STOP:
            continue
        if len(tok) > 3 and tok.endswith("s"):
            tok = tok[:-1]
        out.add(tok)
    return out


def _between(text: str, start: str, end: str) -> str:
    i = text.find(start)
    if i < 0:
        return ""
    i += len(start)
    j = text.find(end, i)
    return text[i:j] if j >= 0 else text[i:]


def _find_task(text: str) -> TaskSpec:
    for spec in REGISTRY.values():
        if spec.description in text:
            return spec
    raise UnknownTask("prompt does not quote a known task description")


# ---------------------------------------------------------------------------
# Canned test cases: (edges, args) per task; expected values are computed
# from the task oracle when the response is rendered, so they stay in sync.

_CASES = {
    "connectivity": [
        ([[0, 1], [1, 2], [2, 3]], {"num_nodes": 4}),
        ([[0, 1], [2, 3]], {"num_nodes": 5}),
    ],
    "component_count": [
        ([[0, 1], [2, 3]], {"num_nodes": 5}),
        ([[0, 1], [1, 2]], {"num_nodes": 3}),
    ],
    "scc_count": [
        ([[0, 1], [1, 0], [1, 2]], {"num_nodes": 4}),
        ([[0, 1], [1, 2], [2, 0]], {"num_nodes": 4}),
    ],
    "shortest_path": [
        ([[0, 1, 2.5], [1, 2, 4.8], [0, 2, 9.0]],
         {"source": 0, "target": 2, "num_nodes": 3}),
        ([[0, 1, 1.0], [1, 2, 1.0], [0, 2, 1.5]],
         {"source": 0, "target": 2, "num_nodes": 3}),
    ],
    "eulerian_path": [
        ([[0, 1], [1, 2]], {"num_nodes": 3}),
        ([[0, 1], [2, 3]], {"num_nodes": 4}),
    ],
    "bipartite_check": [
        ([[0, 1], [1, 2], [2, 3], [3, 0]], {"num_nodes": 4}),
        ([[0, 1], [1, 2], [2, 0]], {"num_nodes": 3}),
    ],
    "graph_diameter": [
        ([[0, 1], [1, 2], [2, 3]], {"num_nodes": 4}),
        ([[0, 1], [1, 2], [2, 0]], {"num_nodes": 3}),
    ],
    "regular_check": [
        ([[0, 1], [1, 2], [2, 3], [3, 0]], {"num_nodes": 4}),
        ([[0, 1], [1, 2]], {"num_nodes": 3}),
    ],
    "distance_regular": [
        ([[0, 1], [1, 2], [2, 3], [3, 4], [4, 0]], {"num_nodes": 5}),
        ([[0, 1], [1, 2], [2, 3]], {"num_nodes": 4}),
    ],
    "max_flow": [
        ([[0, 1, 3.0], [1, 2, 2.0], [0, 2, 1.5]],
         {"source": 0, "target": 2, "num_nodes": 3}),
        ([[0, 1, 2.0]], {"source": 0, "target": 1, "num_nodes": 2}),
    ],
    "max_clique": [
        ([[0, 1], [0, 2], [1, 2], [2, 3]], {"num_nodes": 4}),
        ([[0, 1], [2, 3]], {"num_nodes": 4}),
    ],
    "max_independent_set": [
        ([[0, 1], [1, 2], [2, 3]], {"num_nodes": 4}),
        ([[0, 1], [0, 2], [1, 2]], {"num_nodes": 4}),
    ],
    "clustering_coefficient": [
        ([[0, 1, 1.0], [0, 2, 2.0], [1, 2, 3.0], [0, 3, 1.0]],
         {"node": 0, "num_nodes": 4}),
        ([[0, 1, 1.0], [0, 2, 1.0]], {"node": 0, "num_nodes": 3}),
    ],
    "common_neighbors": [
        ([[0, 2], [1, 2], [0, 3], [1, 3]],
         {"node_u": 0, "node_v": 1, "num_nodes": 4}),
        ([[0, 1], [1, 2]], {"node_u": 0, "node_v": 2, "num_nodes": 3}),
    ],
    "clustering_on_path": [
        ([[0, 1], [1, 2], [1, 3], [2, 3]],
         {"source": 0, "target": 3, "num_nodes": 4}),
        ([[0, 1], [1, 2]], {"source": 0, "target": 2, "num_nodes": 3}),
    ],
    "scc_diameters": [
        ([[0, 1], [1, 0], [2, 3], [3, 2], [1, 2]], {"num_nodes": 4}),
        ([[0, 1], [1, 2], [2, 0]], {"num_nodes": 4}),
    ],
    "scc_flow_best": [
        ([[0, 1, 2.0], [1, 0, 2.0], [1, 2, 5.0]],
         {"target": 2, "num_nodes": 3}),
        ([[0, 1, 1.0], [1, 2, 3.0], [2, 1, 3.0]],
         {"target": 0, "num_nodes": 3}),
    ],
    "pair_tightness": [
        ([[0, 1, 1.0], [0, 2, 1.0], [1, 2, 1.0]],
         {"source": 0, "target": 1, "num_nodes": 3}),
        ([[0, 1, 2.0], [1, 2, 2.0]],
         {"source": 0, "target": 2, "num_nodes": 3}),
    ],
    "bridge_hubs": [
        ([[0, 1], [1, 2]], {"k": 2, "num_nodes": 3}),
        ([[0, 1], [0, 2], [1, 2]], {"k": 1, "num_nodes": 3}),
    ],
    "endpoint_flow": [
        ([[0, 1, 2.0], [1, 2, 2.0]],
         {"source": 0, "target": 2, "num_nodes": 3}),
        ([[0, 1, 1.0], [1, 2, 1.0], [0, 2, 1.0], [2, 0, 1.0]],
         {"source": 0, "target": 2, "num_nodes": 3}),
    ],
    "euler_or_clustering": [
        ([[0, 1], [1, 2]], {"source": 0, "target": 2, "num_nodes": 3}),
        ([[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]],
         {"source": 0, "target": 1, "num_nodes": 4}),
    ],
    "largest_component_diameter": [
        ([[0, 1], [1, 2], [3, 4]], {"num_nodes": 5}),
        ([[0, 1], [1, 2], [2, 3]], {"num_nodes": 4}),
    ],
    "scc_euler_score": [
        ([[0, 1], [1, 2], [2, 0]], {"num_nodes": 3}),
        ([[0, 1], [2, 3]], {"num_nodes": 4}),
    ],
}


# ---------------------------------------------------------------------------
# Canned solution programs. Each is a plain standalone script; the marker
# comment on the first line lets OracleStubExecutor shortcut execution.


def _program(task_id: str, params: str, body: str, *, directed: bool,
             weighted: bool) -> str:
    cls = "DiGraph" if directed else "Graph"
    if weighted:
        build = "            g.add_edge(int(e[0]), int(e[1]), weight=float(e[2]))\n"
    else:
        build = "            g.add_edge(int(e[0]), int(e[1]))\n"
    return (
        f"# solver: {task_id}\n"
        "import networkx as nx\n"
        "\n"
        "\n"
        f"def solve(edge_list, {params}):\n"
        "    try:\n"
        f"        g = nx.{cls}()\n"
        "        if num_nodes is not None:\n"
        "            g.add_nodes_from(range(int(num_nodes)))\n"
        "        for e in edge_list:\n"
        f"{build}"
        f"{body}"
        "    except Exception:\n"
        "        return None\n"
    )


# shared fragments for the flow-style rebuild and the unweighted skeleton
_FLOW_GRAPH = """\
        h = nx.DiGraph()
        h.add_nodes_from(g.nodes())
        for u, v, data in g.edges(data=True):
            if u == v:
                continue
            w = float(data.get("weight", 1.0))
            if h.has_edge(u, v):
                h[u][v]["capacity"] += w
            else:
                h.add_edge(u, v, capacity=w)
"""

_SKELETON = """\
        skel = nx.Graph()
        skel.add_nodes_from(g.nodes())
        skel.add_edges_from((u, v) for u, v in g.edges() if u != v)
"""

_CANONICAL_PATH = """\
        adj = {v: set() for v in g.nodes()}
        for u, v in g.edges():
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        dist = {source: 0}
        frontier = [source]
        while frontier and target not in dist:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        if target not in dist:
            return None
        path = [target]
        while path[-1] != source:
            cur = path[-1]
            path.append(min(u for u in adj[cur] if dist.get(u) == dist[cur] - 1))
        path.reverse()
"""

_SCC_SORTED = """\
        comps = sorted((sorted(c) for c in nx.strongly_connected_components(g)),
                       key=lambda c: c[0])
"""


def _make_solutions() -> dict:
    sols = {}

    def add(task_id, params, body):
        spec = REGISTRY[task_id]
        sols[task_id] = _program(
            task_id, params, body,
            directed=spec.directed, weighted=spec.weighted,
        )

    add("connectivity", "num_nodes=None",
        "        return nx.is_connected(g)\n")
    add("component_count", "num_nodes=None",
        "        return int(nx.number_connected_components(g))\n")
    add("scc_count", "num_nodes=None",
        "        return int(nx.number_strongly_connected_components(g))\n")
    add("shortest_path", "source=None, target=None, num_nodes=None",
        "        if source == target:\n"
        "            return 0.0\n"
        "        return float(nx.dijkstra_path_length(g, source, target))\n")
    add("eulerian_path", "num_nodes=None",
        "        if g.number_of_edges() == 0:\n"
        "            return True\n"
        "        return bool(nx.has_eulerian_path(g))\n")
    add("bipartite_check", "num_nodes=None",
        "        return bool(nx.is_bipartite(g))\n")
    add("graph_diameter", "num_nodes=None",
        "        return int(nx.diameter(g))\n")
    add("regular_check", "num_nodes=None",
        "        degs = {d for _, d in g.degree()}\n"
        "        return len(degs) <= 1\n")
    add("distance_regular", "num_nodes=None",
        "        g.remove_edges_from(list(nx.selfloop_edges(g)))\n"
        "        if g.number_of_nodes() == 1:\n"
        "            return True\n"
        "        if not nx.is_connected(g):\n"
        "            return False\n"
        "        return bool(nx.is_distance_regular(g))\n")
    add("max_flow", "source=None, target=None, num_nodes=None",
        "        if source == target:\n"
        "            return 0.0\n"
        + _FLOW_GRAPH +
        "        return float(nx.maximum_flow_value(h, source, target))\n")
    add("max_clique", "num_nodes=None",
        "        g.remove_edges_from(list(nx.selfloop_edges(g)))\n"
        "        return int(nx.max_weight_clique(g, weight=None)[1])\n")
    add("max_independent_set", "num_nodes=None",
        "        g.remove_edges_from(list(nx.selfloop_edges(g)))\n"
        "        return int(nx.max_weight_clique(nx.complement(g), weight=None)[1])\n")
    add("clustering_coefficient", "node=None, num_nodes=None",
        "        return float(nx.clustering(g, node))\n")
    add("common_neighbors", "node_u=None, node_v=None, num_nodes=None",
        "        if node_u == node_v:\n"
        "            return None\n"
        "        return len(list(nx.common_neighbors(g, node_u, node_v)))\n")

    add("clustering_on_path", "source=None, target=None, num_nodes=None",
        _CANONICAL_PATH +
        "        coeffs = [float(nx.clustering(g, v)) for v in path]\n"
        "        best = 0\n"
        "        for i in range(1, len(path)):\n"
        "            if coeffs[i] > coeffs[best]:\n"
        "                best = i\n"
        "        return {\"node\": path[best], \"coefficients\": coeffs}\n")
    add("scc_diameters", "num_nodes=None",
        _SCC_SORTED +
        "        out = []\n"
        "        for comp in comps:\n"
        "            members = set(comp)\n"
        "            sub = nx.Graph()\n"
        "            sub.add_nodes_from(comp)\n"
        "            for u, v in g.edges():\n"
        "                if u != v and u in members and v in members:\n"
        "                    sub.add_edge(u, v)\n"
        "            out.append(int(nx.diameter(sub)))\n"
        "        return out\n")
    add("scc_flow_best", "target=None, num_nodes=None",
        _FLOW_GRAPH + _SKELETON + _SCC_SORTED +
        "        best_comp = None\n"
        "        best_score = None\n"
        "        for comp in comps:\n"
        "            rep = comp[0]\n"
        "            if rep == target:\n"
        "                flow = 0.0\n"
        "            else:\n"
        "                flow = float(nx.maximum_flow_value(h, rep, target))\n"
        "            score = flow * (1.0 + float(nx.clustering(skel, rep)))\n"
        "            if best_score is None or score > best_score:\n"
        "                best_comp, best_score = comp, score\n"
        "        return best_comp\n")
    add("pair_tightness", "source=None, target=None, num_nodes=None",
        _SKELETON +
        "        cs = float(nx.clustering(skel, source))\n"
        "        if source == target:\n"
        "            return float(skel.degree(source) + cs)\n"
        "        ct = float(nx.clustering(skel, target))\n"
        "        d = float(nx.dijkstra_path_length(g, source, target))\n"
        "        shared = len(list(nx.common_neighbors(skel, source, target)))\n"
        "        return (shared + (cs + ct) / 2.0) / (1.0 + d)\n")
    add("bridge_hubs", "k=None, num_nodes=None",
        "        if not nx.is_connected(g):\n"
        "            return None\n"
        "        n = g.number_of_nodes()\n"
        "        scored = []\n"
        "        for v in sorted(g.nodes()):\n"
        "            if n == 1:\n"
        "                scored.append((v, 0.0))\n"
        "                continue\n"
        "            dist = nx.single_source_shortest_path_length(g, v)\n"
        "            mean_dist = sum(d for u, d in dist.items() if u != v) / (n - 1)\n"
        "            scored.append((v, (1.0 - float(nx.clustering(g, v))) / mean_dist))\n"
        "        scored.sort(key=lambda p: (-p[1], p[0]))\n"
        "        top = scored[: min(int(k), n)]\n"
        "        return {\"nodes\": [v for v, _ in top],\n"
        "                \"scores\": [s for _, s in top]}\n")
    add("endpoint_flow", "source=None, target=None, num_nodes=None",
        _FLOW_GRAPH + _SKELETON +
        "        if source == target:\n"
        "            f = 0.0\n"
        "        else:\n"
        "            f = float(nx.maximum_flow_value(h, source, target))\n"
        "        cs = float(nx.clustering(skel, source))\n"
        "        ct = float(nx.clustering(skel, target))\n"
        "        return f * (1.0 + (cs + ct) / 2.0)\n")
    add("euler_or_clustering", "source=None, target=None, num_nodes=None",
        "        if g.number_of_edges() == 0 or nx.has_eulerian_path(g):\n"
        "            return float(nx.diameter(g))\n"
        "        return float(max(nx.clustering(g, source), nx.clustering(g, target)))\n")
    add("largest_component_diameter", "num_nodes=None",
        "        if nx.is_connected(g):\n"
        "            return int(nx.diameter(g))\n"
        "        comps = [sorted(c) for c in nx.connected_components(g)]\n"
        "        comps.sort(key=lambda c: (-len(c), c[0]))\n"
        "        return int(nx.diameter(g.subgraph(comps[0])))\n")
    add("scc_euler_score", "num_nodes=None",
        "        comps = list(nx.strongly_connected_components(g))\n"
        "        if g.number_of_edges() == 0 or nx.has_eulerian_path(g):\n"
        "            return max(len(c) for c in comps)\n"
        "        return len(comps)\n")
    return sols


_SOLUTIONS = _make_solutions()


def canned_solution(task_id: str) -> str:
    """The mock's solution program for a task (a standalone script)."""
    try:
        return _SOLUTIONS[task_id]
    except KeyError:
        raise UnknownTask(f"no canned solution for {task_id!r}") from None


class RuleBackend:
    """Offline chat backend driven by the prompt's purpose tag.

    solutions / cases override or extend the canned tables; values in
    `solutions` may also be callables of the request for fault injection.
    """

    def __init__(self, solutions: dict | None = None, cases: dict | None = None):
        self.solutions = dict(_SOLUTIONS)
        self.solutions.update(solutions or {})
        self.cases = dict(_CASES)
        self.cases.update(cases or {})
        self.calls: list = []

    def __call__(self, req: ChatRequest) -> ChatResponse:
        self.calls.append(req)
        handler = {
            "relevance": self._relevance,
            "global_filter": self._global_filter,
            "testgen": self._testgen,
            "codegen": self._solution,
            "refine": self._solution,
        }.get(req.purpose_tag)
        if handler is None:
            raise TransportError(f"no rule for purpose tag {req.purpose_tag!r}")
        text = handler(req)
        return ChatResponse(
            text=text,
            prompt_tokens=max(1, len(req.system_text + req.user_text) // 4),
            completion_tokens=max(1, len(text) // 4),
            latency=0.0,
        )

    # -- per-purpose rules --------------------------------------------------

    def _relevance(self, req: ChatRequest) -> str:
        text = req.user_text
        query = _between(text, "Question:\n", "\n\nAvailable chapters")
        brace = text.find("{", text.find("key to its description:"))
        span = balanced_span(text, brace) if brace >= 0 else None
        if span is None:
            return "[]"
        mapping = json.loads(span)
        qtok = _tokens(query)
        scored = []
        for key, desc in mapping.items():
            overlap = len(qtok & (_tokens(key) | _tokens(str(desc))))
            if overlap:
                scored.append((-overlap, key))
        scored.sort()
        return json.dumps([key for _, key in scored])

    def _global_filter(self, req: ChatRequest) -> str:
        text = req.user_text
        query = _between(text, "Question:\n", "\n\nDocumentation entry")
        title = _between(text, 'Documentation entry "', '":')
        body = _between(text, '":\n', "\n\nWould this entry")
        qtok = _tokens(query)
        title_hit = len(qtok & _tokens(title))
        body_hit = len(qtok & _tokens(body))
        return "Yes" if title_hit >= 1 or body_hit >= 3 else "No"

    def _testgen(self, req: ChatRequest) -> str:
        spec = _find_task(req.user_text)
        cases = []
        for edges, args in self.cases.get(spec.task_id, []):
            graph = from_edges(
                edges,
                directed=spec.directed,
                weighted=spec.weighted,
                num_nodes=args.get("num_nodes"),
            )
            inp = {"edge_list": [list(e) for e in edges]}
            inp.update(args)
            cases.append({"input": inp, "expected_output": spec.label(graph, args)})
        return repr(cases)

    def _solution(self, req: ChatRequest) -> str:
        spec = _find_task(req.user_text)
        source = self.solutions.get(spec.task_id)
        if callable(source):
            # a scripted override may bow out with None once exhausted
            reply = source(req)
            if reply is not None:
                return reply
            source = _SOLUTIONS.get(spec.task_id)
        if source is None:
            raise TransportError(f"no canned solution for {spec.task_id!r}")
        return f"```python\n{source}```\n"

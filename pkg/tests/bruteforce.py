"""Hand-written exponential reference checkers for tiny graphs.

Everything here works from first principles on explicit node/edge lists:
reachability closures, exhaustive path and trail search, subset
enumeration, cut enumeration. No graph library involved, so these are an
independent side against which the production oracles are battled.
Intended for graphs of at most ~7 nodes (12 edges for trail search).
"""
from __future__ import annotations

import itertools


def norm_edges(edges, weighted):
    """[(u, v, w)] with w defaulting to 1.0."""
    out = []
    for e in edges:
        if weighted and len(e) >= 3:
            out.append((e[0], e[1], float(e[2])))
        else:
            out.append((e[0], e[1], 1.0))
    return out


def adjacency(nodes, edges, directed):
    adj = {v: set() for v in nodes}
    for u, v, _ in edges:
        adj[u].add(v)
        if not directed:
            adj[v].add(u)
    return adj


def reach(nodes, edges, directed, start):
    """Transitive closure from start by plain worklist."""
    adj = adjacency(nodes, edges, directed)
    seen = {start}
    work = [start]
    while work:
        u = work.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                work.append(v)
    return seen


def is_connected(nodes, edges):
    nodes = list(nodes)
    if not nodes:
        raise ValueError("empty graph")
    return reach(nodes, edges, False, nodes[0]) == set(nodes)


def components(nodes, edges):
    """Sorted list of sorted component node lists (undirected)."""
    left = set(nodes)
    out = []
    while left:
        start = min(left)
        comp = reach(nodes, edges, False, start)
        out.append(sorted(comp))
        left -= comp
    out.sort(key=lambda c: c[0])
    return out


def scc_sets(nodes, edges):
    """SCCs via mutual reachability, ordered by smallest member."""
    closure = {v: reach(nodes, edges, True, v) for v in nodes}
    left = set(nodes)
    out = []
    while left:
        v = min(left)
        comp = {u for u in left if u in closure[v] and v in closure[u]}
        out.append(sorted(comp))
        left -= comp
    out.sort(key=lambda c: c[0])
    return out


def simple_paths(nodes, edges, directed, s, t):
    """Every simple path s..t as a node list, found by DFS."""
    adj = adjacency(nodes, edges, directed)
    out = []

    def walk(path):
        u = path[-1]
        if u == t:
            out.append(list(path))
            return
        for v in sorted(adj[u]):
            if v not in path:
                path.append(v)
                walk(path)
                path.pop()

    walk([s])
    return out


def shortest_path_weight(nodes, edges, directed, weighted, s, t):
    """Minimum-total-weight over exhaustively enumerated simple paths.
    Returns None when t is unreachable. s == t gives 0.0."""
    if s == t:
        return 0.0
    weight = {}
    for u, v, w in edges:
        keys = [(u, v)] if directed else [(u, v), (v, u)]
        for key in keys:
            weight[key] = min(weight.get(key, float("inf")), w if weighted else 1.0)
    best = None
    for path in simple_paths(nodes, edges, directed, s, t):
        total = sum(weight[(path[i], path[i + 1])] for i in range(len(path) - 1))
        if best is None or total < best:
            best = total
    return best


def hop_matrix(nodes, edges):
    """All-pairs hop distances (undirected); inf where unreachable."""
    inf = float("inf")
    dist = {u: {v: (0 if u == v else inf) for v in nodes} for u in nodes}
    for u, v, _ in edges:
        if u != v:
            dist[u][v] = 1
            dist[v][u] = 1
    for k in nodes:
        for i in nodes:
            for j in nodes:
                alt = dist[i][k] + dist[k][j]
                if alt < dist[i][j]:
                    dist[i][j] = alt
    return dist


def diameter(nodes, edges):
    """Max finite hop distance; None when disconnected."""
    dist = hop_matrix(nodes, edges)
    best = 0
    for u in nodes:
        for v in nodes:
            if dist[u][v] == float("inf"):
                return None
            best = max(best, dist[u][v])
    return best


def has_trail_all_edges(nodes, edges, directed):
    """Exhaustive search for a trail using every edge exactly once.
    Edge count must stay small: the state space is 2^m per start node."""
    m = len(edges)
    if m == 0:
        return True
    if m > 14:
        raise ValueError("trail search capped at 14 edges")
    starts = set()
    for u, v, _ in edges:
        starts.add(u)
        starts.add(v)

    def walk(at, used):
        if used == (1 << m) - 1:
            return True
        for i, (u, v, _) in enumerate(edges):
            if used & (1 << i):
                continue
            if u == at:
                if walk(v, used | (1 << i)):
                    return True
            elif not directed and v == at:
                if walk(u, used | (1 << i)):
                    return True
        return False

    return any(walk(s, 0) for s in sorted(starts))


def is_bipartite(nodes, edges):
    """Try every 2-coloring; fine for n <= ~16."""
    if any(u == v for u, v, _ in edges):
        return False  # a self loop is an odd cycle
    nodes = sorted(nodes)
    for bits in range(1 << len(nodes)):
        color = {v: (bits >> i) & 1 for i, v in enumerate(nodes)}
        if all(color[u] != color[v] for u, v, _ in edges):
            return True
    return False


def max_flow(nodes, edges, directed, s, t):
    """Min cut over all vertex bipartitions = max flow, by duality.

    Parallel edges stack; self loops carry nothing.
    """
    if s == t:
        return 0.0
    cap = {}
    for u, v, w in edges:
        if u == v:
            continue
        pairs = [(u, v)] if directed else [(u, v), (v, u)]
        for key in pairs:
            cap[key] = cap.get(key, 0.0) + w
    others = [v for v in nodes if v not in (s, t)]
    best = None
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            side = {s, *extra}
            cut = sum(
                c for (u, v), c in cap.items() if u in side and v not in side
            )
            if best is None or cut < best:
                best = cut
    return best


def max_clique(nodes, edges):
    """Largest all-adjacent subset, by enumeration."""
    nodes = sorted(nodes)
    adj = {v: set() for v in nodes}
    for u, v, _ in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    best = 0
    for r in range(len(nodes), 0, -1):
        if r <= best:
            break
        for sub in itertools.combinations(nodes, r):
            if all(b in adj[a] for a, b in itertools.combinations(sub, 2)):
                best = r
                break
    return best


def max_independent_set(nodes, edges):
    nodes = sorted(nodes)
    adj = {v: set() for v in nodes}
    for u, v, _ in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    best = 0
    for r in range(len(nodes), 0, -1):
        if r <= best:
            break
        for sub in itertools.combinations(nodes, r):
            if all(b not in adj[a] for a, b in itertools.combinations(sub, 2)):
                best = r
                break
    return best


def clustering(nodes, edges, v):
    adj = adjacency(nodes, edges, False)
    nbrs = sorted(adj[v] - {v})
    if len(nbrs) < 2:
        return 0.0
    closed = sum(
        1 for a, b in itertools.combinations(nbrs, 2) if b in adj[a]
    )
    possible = len(nbrs) * (len(nbrs) - 1) / 2
    return closed / possible


def common_neighbors(nodes, edges, u, v):
    adj = adjacency(nodes, edges, False)
    return len((adj[u] - {u, v}) & (adj[v] - {u, v}))


def is_regular(nodes, edges):
    deg = {v: 0 for v in nodes}
    for u, v, _ in edges:  # a self loop lands here twice, degree +2
        deg[u] += 1
        deg[v] += 1
    return len(set(deg.values())) <= 1


def is_distance_regular(nodes, edges):
    """Check intersection numbers straight from the distance matrix.

    Distance-regular: connected, regular, and for every distance h the
    counts |N(v) at distance h-1 / h / h+1 from u| depend only on h, over
    all pairs u, v at distance h.
    """
    nodes = sorted(set(nodes))
    edges = [(u, v, w) for u, v, w in edges if u != v]
    if len(nodes) == 1:
        return True
    if not is_connected(nodes, edges):
        return False
    if not is_regular(nodes, edges):
        return False
    dist = hop_matrix(nodes, edges)
    adj = adjacency(nodes, edges, False)
    seen = {}  # h -> (c, a, b)
    for u in nodes:
        for v in nodes:
            h = dist[u][v]
            if h == float("inf"):
                return False
            counts = [0, 0, 0]  # at h-1, h, h+1 from u
            for w in adj[v]:
                delta = dist[u][w] - h
                if delta in (-1, 0, 1):
                    counts[int(delta) + 1] += 1
            key = tuple(counts)
            if h in seen and seen[h] != key:
                return False
            seen[h] = key
    return True

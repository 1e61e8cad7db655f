"""Independent oracles shared by the test modules.

Everything here deliberately avoids the library's own algorithms:
spanning trees are counted by scanning edge subsets, isomorphism is
checked by trying vertex permutations, and random trees come from
uniform parent-sequence decoding.
"""

from __future__ import annotations

from itertools import combinations, permutations

from spanlab import Graph, build_graph


def brute_count_spanning_trees(g: Graph) -> int:
    """Count spanning trees by testing every (n-1)-edge subset."""
    n = g.n
    if n == 0:
        return 0
    if n == 1:
        return 1
    count = 0
    for subset in combinations(g.edges(), n - 1):
        if _is_tree(subset, n):
            count += 1
    return count


def brute_spanning_tree_edge_sets(g: Graph) -> set[tuple]:
    n = g.n
    out = set()
    for subset in combinations(g.edges(), n - 1):
        if _is_tree(subset, n):
            out.add(tuple(sorted(subset)))
    return out


def _is_tree(edges, n) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merged = 0
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
        merged += 1
    return merged == n - 1


def brute_isomorphic(edges_a, edges_b, n: int) -> bool:
    """Tree isomorphism by exhausting vertex permutations (bitmask adjacency)."""
    if len(edges_a) != len(edges_b):
        return False
    adj_b = [0] * n
    for u, v in edges_b:
        adj_b[u] |= 1 << v
        adj_b[v] |= 1 << u
    pairs = list(edges_a)
    for perm in permutations(range(n)):
        for u, v in pairs:
            if not adj_b[perm[u]] >> perm[v] & 1:
                break
        else:
            return True
    return False


def random_tree_edges(n: int, rng) -> list[tuple[int, int]]:
    """Uniform random labeled tree from a random parent sequence."""
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [int(x) for x in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaf_heap = sorted(v for v in range(n) if degree[v] == 1)
    import heapq

    heapq.heapify(leaf_heap)
    for v in seq:
        u = heapq.heappop(leaf_heap)
        edges.append((u, v) if u < v else (v, u))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaf_heap, v)
    u = heapq.heappop(leaf_heap)
    v = heapq.heappop(leaf_heap)
    edges.append((u, v) if u < v else (v, u))
    return edges


def random_connected_graph(n: int, rng, p: float = 0.5) -> Graph:
    """Rejection-sample a connected G(n,p); p defaults generously dense."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    while True:
        mask = rng.random(len(pairs)) < p
        edges = [pairs[i] for i in range(len(pairs)) if mask[i]]
        g = build_graph(edges, n)
        if g.is_connected():
            return g


def relabel_edges(edges, perm) -> list[tuple[int, int]]:
    out = []
    for u, v in edges:
        a, b = perm[u], perm[v]
        out.append((a, b) if a < b else (b, a))
    return out

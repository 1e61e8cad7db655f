"""Uniform spanning-tree samplers and one-out-digraph statistics.

Three independent samplers (loop-erased walk, first-entry walk, one-out
rejection) produce exactly uniform spanning trees; keeping all three lets
distributional claims be cross-validated against sampler bias.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import CapExceededError
from .graphs import Graph
from .trees import SpanningTree

_CHUNK = 65536


class AttemptsExhaustedError(RuntimeError):
    """Rejection sampling ran out of attempts (acceptance rate too low)."""

    code = "AttemptsExhausted"


def sample_wilson(g: Graph, rng) -> SpanningTree:
    """Uniform spanning tree via loop-erased random walks to a growing tree."""
    if not g.is_connected():
        raise ValueError("sampler requires a connected graph")
    n = g.n
    adj = g.neighbors
    nxt = [0] * n
    in_tree = bytearray(n)
    in_tree[0] = 1
    # Buffers start near the typical draw count and grow on refill, so
    # tiny graphs are not charged for a huge batch each sample.
    chunk = 2 * n + 8
    buf = rng.random(chunk).tolist()
    pos = 0
    for i in range(n):
        u = i
        while not in_tree[u]:
            nbrs = adj[u]
            if pos == len(buf):
                chunk = min(4 * chunk, _CHUNK)
                buf = rng.random(chunk).tolist()
                pos = 0
            # Overwriting nxt[u] on revisit erases loops in place.
            v = nbrs[int(buf[pos] * len(nbrs))]
            pos += 1
            nxt[u] = v
            u = v
        u = i
        while not in_tree[u]:
            in_tree[u] = 1
            u = nxt[u]
    return SpanningTree.from_parents(g, nxt, root=0)


def sample_aldous_broder(g: Graph, rng) -> SpanningTree:
    """Uniform spanning tree from the first-entry edges of a covering walk."""
    if not g.is_connected():
        raise ValueError("sampler requires a connected graph")
    n = g.n
    adj = g.neighbors
    parent = [0] * n
    visited = bytearray(n)
    visited[0] = 1
    remaining = n - 1
    u = 0
    chunk = 2 * n + 8
    buf = rng.random(chunk).tolist()
    pos = 0
    while remaining:
        nbrs = adj[u]
        if pos == len(buf):
            chunk = min(4 * chunk, _CHUNK)
            buf = rng.random(chunk).tolist()
            pos = 0
        v = nbrs[int(buf[pos] * len(nbrs))]
        pos += 1
        if not visited[v]:
            visited[v] = 1
            parent[v] = u
            remaining -= 1
        u = v
    return SpanningTree.from_parents(g, parent, root=0)


@dataclass(frozen=True)
class OneOutDigraph:
    """One chosen out-neighbour per vertex of the host graph."""

    graph: Graph
    out: tuple[int, ...]

    def __post_init__(self):
        g = self.graph
        if len(self.out) != g.n:
            raise ValueError("out-map must cover every vertex")
        for v, u in enumerate(self.out):
            if not g.has_edge(v, u):
                raise ValueError(f"out({v})={u} is not a graph neighbour")


def sample_one_out(g: Graph, rng) -> OneOutDigraph:
    """Each vertex independently picks a uniform neighbour as its out-arc."""
    adj = g.neighbors
    buf = rng.random(max(g.n, 1)).tolist()
    out = tuple(adj[v][int(buf[v] * len(adj[v]))] for v in range(g.n))
    return OneOutDigraph(g, out)


def support(dg: OneOutDigraph) -> tuple[list[tuple[int, int]], bool]:
    """Undirected support of the arcs, plus whether it is a spanning tree."""
    edges = _support_edges(dg.graph.n, dg.out)
    return edges, _edges_are_tree(dg.graph.n, edges)


def _support_edges(n: int, out) -> list[tuple[int, int]]:
    seen = set()
    for v in range(n):
        u = out[v]
        seen.add((v, u) if v < u else (u, v))
    return sorted(seen)


def _edges_are_tree(n: int, edges) -> bool:
    if len(edges) != n - 1:
        return False
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


def sample_rejection_one_out(
    g: Graph, rng, max_attempts: int = 10**6
) -> tuple[SpanningTree, int]:
    """Resample one-out digraphs until the support is a tree.

    The accepted support is an exactly uniform spanning tree; the attempt
    count exposes the acceptance rate (degree-product / tree-count effect).
    """
    if not g.is_connected():
        raise ValueError("sampler requires a connected graph")
    n = g.n
    adj = g.neighbors
    chunk = 2 * n + 8
    buf = rng.random(chunk).tolist()
    pos = 0
    for attempt in range(1, max_attempts + 1):
        out = [0] * n
        for v in range(n):
            nbrs = adj[v]
            if pos == len(buf):
                chunk = min(4 * chunk, _CHUNK)
                buf = rng.random(chunk).tolist()
                pos = 0
            out[v] = nbrs[int(buf[pos] * len(nbrs))]
            pos += 1
        edges = _support_edges(n, out)
        if _edges_are_tree(n, edges):
            return SpanningTree.from_edges(g, edges, validate=False), attempt
    raise AttemptsExhaustedError(
        f"no tree support in {max_attempts} one-out samples; "
        "acceptance probability is too low for this graph"
    )


def one_out_census(g: Graph, cap: int = 10**6) -> dict[tuple, int]:
    """Exhaustively enumerate all one-out digraphs, grouped by tree support.

    Returns {tree edge-tuple: number of digraphs whose support is that
    tree}.  The number of digraphs is the degree product; a cap guards
    against accidental exponential sweeps.
    """
    n = g.n
    total = 1
    for d in g.degrees:
        total *= d
    if total > cap:
        raise CapExceededError(f"{total} one-out digraphs exceed the cap of {cap}")
    adj = g.neighbors
    degs = g.degrees
    counts: dict[tuple, int] = {}
    idx = [0] * n
    while True:
        out = [adj[v][idx[v]] for v in range(n)]
        edges = _support_edges(n, out)
        if _edges_are_tree(n, edges):
            key = tuple(edges)
            counts[key] = counts.get(key, 0) + 1
        # Odometer increment over the product of neighbour choices.
        v = 0
        while v < n:
            idx[v] += 1
            if idx[v] < degs[v]:
                break
            idx[v] = 0
            v += 1
        if v == n:
            return counts


# ---------------------------------------------------------------------------
# Leaf statistics
# ---------------------------------------------------------------------------


def neighbour_degree_sum(g: Graph, v: int) -> Fraction:
    """Sum of 1/degree over the neighbours of v (sums to n over all v)."""
    return sum((Fraction(1, g.degrees[u]) for u in g.neighbors[v]), Fraction(0))


def one_out_leaf_probability(g: Graph, v: int) -> Fraction:
    """Exact probability that v has in-degree 0 in a uniform one-out digraph.

    Each neighbour u independently avoids pointing at v with probability
    1 - 1/deg(u); the product is exact in rational arithmetic.
    """
    prob = Fraction(1)
    for u in g.neighbors[v]:
        prob *= 1 - Fraction(1, g.degrees[u])
    return prob


@dataclass
class LeafStatsReport:
    """Exact one-out leaf probabilities plus sampled tree leaf counts."""

    graph_n: int
    trials: int
    sampler: str
    leaf_probabilities: list[Fraction]
    s_values: list[Fraction]
    expected_one_out_leaves: Fraction  # sum of the exact probabilities
    histogram: dict[int, int]  # leaf count -> frequency over sampled trees
    mean_leaves: float
    min_leaves: int
    max_leaves: int


def leaf_stats(g: Graph, trials: int, sampler: str, rng) -> LeafStatsReport:
    """Exact per-vertex one-out leaf probabilities plus a sampled histogram."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    draw = SAMPLERS[sampler]
    probs = [one_out_leaf_probability(g, v) for v in range(g.n)]
    svals = [neighbour_degree_sum(g, v) for v in range(g.n)]
    hist: dict[int, int] = {}
    total = 0
    low = g.n
    high = 0
    for _ in range(trials):
        tree = draw(g, rng)
        k = len(tree.leaves())
        hist[k] = hist.get(k, 0) + 1
        total += k
        low = min(low, k)
        high = max(high, k)
    return LeafStatsReport(
        graph_n=g.n,
        trials=trials,
        sampler=sampler,
        leaf_probabilities=probs,
        s_values=svals,
        expected_one_out_leaves=sum(probs, Fraction(0)),
        histogram=dict(sorted(hist.items())),
        mean_leaves=total / trials,
        min_leaves=low,
        max_leaves=high,
    )


def _rejection_tree(g: Graph, rng) -> SpanningTree:
    return sample_rejection_one_out(g, rng)[0]


SAMPLERS = {
    "wilson": sample_wilson,
    "ab": sample_aldous_broder,
    "reject": _rejection_tree,
}

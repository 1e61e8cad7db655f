"""Immutable simple undirected graphs, family generators, and text I/O.

Vertices are dense integer ids ``0..n-1``.  Adjacency lists are kept
sorted so that every seeded run iterates neighbours in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as rnglib


class GraphError(ValueError):
    """Invalid graph construction or generation input."""

    code = "GraphError"


class SelfLoopError(GraphError):
    code = "SelfLoop"


class DuplicateEdgeError(GraphError):
    code = "DuplicateEdge"


class VertexOutOfRangeError(GraphError):
    code = "VertexOutOfRange"


class InfeasibleSpecError(GraphError):
    code = "InfeasibleSpec"


class GenerationRetriesExhaustedError(GraphError):
    code = "GenerationRetriesExhausted"


class Graph:
    """Simple undirected graph; immutable after construction.

    Safe to share read-only across parallel workers.
    """

    __slots__ = ("n", "m", "neighbors", "degrees", "_edge_set", "_connected")

    def __init__(self, n: int, neighbors: tuple[tuple[int, ...], ...], m: int):
        self.n = n
        self.m = m
        self.neighbors = neighbors
        self.degrees = tuple(len(nbrs) for nbrs in neighbors)
        self._edge_set = frozenset(
            (u, v) for u in range(n) for v in neighbors[u] if u < v
        )
        self._connected: bool | None = None

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted (u, v) pairs with u < v."""
        return sorted(self._edge_set)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def min_degree(self) -> int:
        return min(self.degrees) if self.n else 0

    def is_connected(self) -> bool:
        # Immutable graph: compute once, reuse (samplers check this per call).
        if self._connected is None:
            self._connected = self._compute_connected()
        return self._connected

    def _compute_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = bytearray(self.n)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for v in self.neighbors[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    stack.append(v)
        return count == self.n

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(edges, n: int) -> Graph:
    """Validate an edge list and build a Graph.

    Rejects self-loops, duplicate edges (in either orientation), and
    endpoints outside ``0..n-1``.
    """
    if n < 0:
        raise VertexOutOfRangeError("vertex count must be non-negative")
    adj: list[list[int]] = [[] for _ in range(n)]
    seen: set[tuple[int, int]] = set()
    m = 0
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRangeError(f"edge ({u},{v}) outside 0..{n - 1}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge ({key[0]},{key[1]})")
        seen.add(key)
        adj[u].append(v)
        adj[v].append(u)
        m += 1
    return Graph(n, tuple(tuple(sorted(nbrs)) for nbrs in adj), m)


def check_connected_min_degree(g: Graph, d: int) -> bool:
    """True iff ``g`` is connected and every degree is at least ``d``."""
    return g.is_connected() and g.min_degree() >= d


# ---------------------------------------------------------------------------
# Deterministic family constructors
# ---------------------------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return build_graph([(u, v) for u in range(n) for v in range(u + 1, n)], n)


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}: side A is 0..a-1, side B is a..a+b-1."""
    if a < 1 or b < 1:
        raise InfeasibleSpecError("both bipartition sides need at least one vertex")
    return build_graph([(u, a + v) for u in range(a) for v in range(b)], a + b)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InfeasibleSpecError("a cycle needs at least 3 vertices")
    return build_graph([(i, (i + 1) % n) for i in range(n)], n)


def path_graph(n: int) -> Graph:
    if n < 1:
        raise InfeasibleSpecError("a path needs at least 1 vertex")
    return build_graph([(i, i + 1) for i in range(n - 1)], n)


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------


def random_regular(d: int, n: int, rng, retries: int = 1000) -> Graph:
    """Random simple d-regular graph: configuration model, then edge switches.

    Stub pairing is repaired NetworkX-style (conflicting stubs go back in
    the pool); 100*m random double-edge switches mix the result.  Exact
    uniformity over d-regular graphs is not required by anything built on
    top; connectivity is, so disconnected outcomes are regenerated.
    """
    if d < 0 or n < 1 or d >= n or (d * n) % 2 != 0:
        raise InfeasibleSpecError(f"no simple {d}-regular graph on {n} vertices")
    for _ in range(retries):
        edges = _pair_stubs(d, n, rng)
        if edges is None:
            continue
        edges = _double_edge_switches(edges, rng)
        g = build_graph(sorted(edges), n)
        if g.is_connected():
            return g
    raise GenerationRetriesExhaustedError(
        f"no connected {d}-regular graph on {n} vertices after {retries} attempts"
    )


def _pair_stubs(d: int, n: int, rng) -> set[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = list(range(n)) * d
    while stubs:
        rng.shuffle(stubs)
        leftover: list[int] = []
        it = iter(stubs)
        for s1, s2 in zip(it, it):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                leftover.append(s1)
                leftover.append(s2)
        if len(leftover) == len(stubs):
            # No progress is possible for this pairing; start over.
            return None
        stubs = leftover
    return edges


def _double_edge_switches(edges: set[tuple[int, int]], rng) -> set[tuple[int, int]]:
    edge_list = list(edges)
    m = len(edge_list)
    if m < 2:
        return edges
    attempts = 100 * m
    pair_idx = rng.integers(0, m, size=2 * attempts)
    flips = rng.random(attempts)
    for t in range(attempts):
        i = pair_idx[2 * t]
        j = pair_idx[2 * t + 1]
        if i == j:
            continue
        a, b = edge_list[i]
        c, e = edge_list[j]
        if flips[t] < 0.5:
            c, e = e, c
        # Rewire {a,b},{c,e} -> {a,c},{b,e} when both new edges are fresh.
        if a == c or a == e or b == c or b == e:
            continue
        new1 = (a, c) if a < c else (c, a)
        new2 = (b, e) if b < e else (e, b)
        if new1 in edges or new2 in edges:
            continue
        edges.remove(edge_list[i])
        edges.remove(edge_list[j])
        edges.add(new1)
        edges.add(new2)
        edge_list[i] = new1
        edge_list[j] = new2
    return edges


def gnp_min_degree(n: int, p: float, d: int, rng, retries: int = 1000) -> Graph:
    """G(n,p) resampled until connected with min degree >= d.

    Bounded retries keep experiment inputs guaranteed-valid rather than
    silently conditioning on rare events.
    """
    if n < 1 or not 0.0 <= p <= 1.0 or d < 0:
        raise InfeasibleSpecError(f"bad G(n,p) parameters n={n}, p={p}, d={d}")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for _ in range(retries):
        mask = rng.random(len(pairs)) < p
        edges = [pairs[i] for i in np.flatnonzero(mask)]
        g = build_graph(edges, n)
        if g.min_degree() >= d and g.is_connected():
            return g
    raise GenerationRetriesExhaustedError(
        f"G({n},{p}) with min degree {d} not hit in {retries} attempts"
    )


# ---------------------------------------------------------------------------
# Graph specs (CLI / experiment input descriptions)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphSpec:
    """A named graph family plus parameters, or a file reference.

    Families: ``complete:n``, ``bipartite:a,b``, ``regular:d,n``,
    ``gnp:n,p,d`` (min-degree-conditioned G(n,p)), ``file:path``.
    """

    family: str
    params: tuple

    @classmethod
    def parse(cls, text: str) -> "GraphSpec":
        family, _, rest = text.partition(":")
        family = family.strip().lower()
        try:
            if family == "complete":
                (n,) = _ints(rest, 1)
                if n < 1:
                    raise InfeasibleSpecError("complete:n needs n >= 1")
                return cls("complete", (n,))
            if family == "bipartite":
                a, b = _ints(rest, 2)
                if a < 1 or b < 1:
                    raise InfeasibleSpecError("bipartite:a,b needs a,b >= 1")
                return cls("bipartite", (a, b))
            if family == "regular":
                d, n = _ints(rest, 2)
                if d < 0 or n < 1 or d >= n or (d * n) % 2 != 0:
                    raise InfeasibleSpecError(
                        f"no simple {d}-regular graph on {n} vertices"
                    )
                return cls("regular", (d, n))
            if family == "gnp":
                parts = [s.strip() for s in rest.split(",")]
                if len(parts) != 3:
                    raise ValueError
                n, p, d = int(parts[0]), float(parts[1]), int(parts[2])
                if n < 1 or not 0.0 <= p <= 1.0 or d < 0:
                    raise InfeasibleSpecError(f"bad gnp parameters {rest!r}")
                return cls("gnp", (n, p, d))
            if family == "file":
                if not rest:
                    raise ValueError
                return cls("file", (rest,))
        except InfeasibleSpecError:
            raise
        except ValueError:
            pass
        raise InfeasibleSpecError(
            f"cannot parse graph spec {text!r}; expected "
            "complete:n | bipartite:a,b | regular:d,n | gnp:n,p,d | file:path"
        )

    def describe(self) -> str:
        return f"{self.family}:{','.join(str(p) for p in self.params)}"


def _ints(text: str, k: int) -> list[int]:
    parts = [int(s.strip()) for s in text.split(",")]
    if len(parts) != k:
        raise ValueError
    return parts


def generate(spec: GraphSpec, seed: int) -> Graph:
    """Build the graph described by ``spec``, deterministically in ``seed``."""
    if spec.family == "complete":
        return complete_graph(*spec.params)
    if spec.family == "bipartite":
        return complete_bipartite(*spec.params)
    if spec.family == "file":
        return read_graph_file(spec.params[0])
    rng = rnglib.stream(seed, rnglib.GENERATE)
    if spec.family == "regular":
        d, n = spec.params
        return random_regular(d, n, rng)
    if spec.family == "gnp":
        n, p, d = spec.params
        return gnp_min_degree(n, p, d, rng)
    raise InfeasibleSpecError(f"unknown graph family {spec.family!r}")


# ---------------------------------------------------------------------------
# Text file format: first line "n m", then m lines "u v"; '#' comments.
# ---------------------------------------------------------------------------


def read_graph_file(path) -> Graph:
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = [
                ln.strip()
                for ln in fh
                if ln.strip() and not ln.lstrip().startswith("#")
            ]
    except OSError as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from exc
    if not lines:
        raise GraphError(f"{path}: empty graph file")
    try:
        n, m = (int(s) for s in lines[0].split())
    except ValueError:
        raise GraphError(f"{path}: header must be 'n m'") from None
    if len(lines) - 1 != m:
        raise GraphError(f"{path}: expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        try:
            u, v = (int(s) for s in ln.split())
        except ValueError:
            raise GraphError(f"{path}: bad edge line {ln!r}") from None
        edges.append((u, v))
    return build_graph(edges, n)


def write_graph_file(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")

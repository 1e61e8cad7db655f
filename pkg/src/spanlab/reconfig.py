"""Reversible leaf reconfiguration of spanning trees.

A random vertex subset R marks leaves eligible for reconfiguration.  The
selection rule splits on vertex degree (cube-root-of-n threshold): low-
degree leaves may reattach anywhere outside R or at high-degree vertices;
high-degree leaves may reattach outside R or at vertices keeping at least
two tree neighbours outside R.  The rule is reversible: recomputing it on
any reachable reconfigured tree reproduces the same selection, which is
what makes the reconfigured tree uniform again.

All threshold comparisons are exact integer comparisons (d > n**(1/3) is
evaluated as d**3 > n, and so on); floating-point rounding here could
silently break reversibility.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph
from .trees import SpanningTree

LOW_BRANCH = "low-degree"
HIGH_BRANCH = "high-degree"

# A selection is taken from the low-degree rule when it captures at least
# n/256 leaves; otherwise the high-degree rule is used.
SELECTION_DENOMINATOR = 256


@dataclass(frozen=True)
class VertexSubset:
    """A subset of vertex ids plus how it was generated."""

    vertices: frozenset[int]
    probability: float = 0.5
    seed: int | None = None

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)


def sample_vertex_subset(n: int, rng, seed: int | None = None) -> VertexSubset:
    """Include each vertex independently with one fair bit."""
    mask = rng.random(n) < 0.5
    members = frozenset(int(v) for v in mask.nonzero()[0])
    return VertexSubset(members, probability=0.5, seed=seed)


@dataclass(frozen=True)
class LeafSelection:
    """Reconfigurable leaves plus their candidate parent sets.

    Invariants: every selected vertex is a leaf of the tree; its current
    parent is among its candidates; candidates never include selected
    leaves.
    """

    leaves: tuple[int, ...]
    parents: dict[int, tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.leaves)


@dataclass(frozen=True)
class StrategyOutcome:
    branch: str
    selection: LeafSelection
    low_count: int
    high_count: int | None  # None when the low branch was taken


def parents_low_degree(g: Graph, subset: VertexSubset, v: int) -> tuple[int, ...]:
    """Candidate parents for a low-degree leaf: outside the subset, or of
    degree above the cube root of n (those are never selected as leaves)."""
    n = g.n
    degs = g.degrees
    members = subset.vertices
    return tuple(
        u for u in g.neighbors[v] if u not in members or degs[u] ** 3 > n
    )


def parents_high_degree(
    g: Graph, tree: SpanningTree, subset: VertexSubset, v: int
) -> tuple[int, ...]:
    """Candidate parents for a high-degree leaf: outside the subset, or
    keeping at least two tree neighbours outside it."""
    members = subset.vertices
    tn = tree.neighbors
    out = []
    for u in g.neighbors[v]:
        if u not in members:
            out.append(u)
        else:
            outside = 0
            for w in tn[u]:
                if w not in members:
                    outside += 1
                    if outside == 2:
                        out.append(u)
                        break
    return tuple(out)


def select_leaves(g: Graph, tree: SpanningTree, subset: VertexSubset) -> StrategyOutcome:
    """Pick the reconfigurable leaves of ``tree`` for the given subset.

    First pass collects low-degree leaves in the subset whose parent stays
    a candidate and that keep at least half their neighbourhood as
    candidates.  If that captures at least n/256 leaves it wins; otherwise
    the high-degree pass (quarter-neighbourhood threshold) is used.
    """
    n = g.n
    degs = g.degrees
    members = subset.vertices
    tree_nbrs = tree.neighbors
    leaf_list = tree.leaves()

    low: list[int] = []
    low_parents: dict[int, tuple[int, ...]] = {}
    for v in leaf_list:
        if v not in members or degs[v] ** 3 > n:
            continue
        parent = tree_nbrs[v][0]
        if parent in members and degs[parent] ** 3 <= n:
            continue  # parent not a candidate
        cands = parents_low_degree(g, subset, v)
        if 2 * len(cands) >= degs[v]:
            low.append(v)
            low_parents[v] = cands

    if SELECTION_DENOMINATOR * len(low) >= n:
        selection = LeafSelection(tuple(low), low_parents)
        _assert_selection(g, tree, selection)
        return StrategyOutcome(LOW_BRANCH, selection, len(low), None)

    # Candidate test for the high branch needs, per vertex, how many tree
    # neighbours lie outside the subset.
    outside_count = [0] * n
    for u in range(n):
        cnt = 0
        for w in tree_nbrs[u]:
            if w not in members:
                cnt += 1
        outside_count[u] = cnt

    high: list[int] = []
    high_parents: dict[int, tuple[int, ...]] = {}
    gn = g.neighbors
    for v in leaf_list:
        if v not in members or degs[v] ** 3 <= n:
            continue
        parent = tree_nbrs[v][0]
        if parent in members and outside_count[parent] < 2:
            continue
        cands = tuple(
            u for u in gn[v] if u not in members or outside_count[u] >= 2
        )
        if 4 * len(cands) >= degs[v]:
            high.append(v)
            high_parents[v] = cands

    selection = LeafSelection(tuple(high), high_parents)
    _assert_selection(g, tree, selection)
    return StrategyOutcome(HIGH_BRANCH, selection, len(low), len(high))


def _assert_selection(g: Graph, tree: SpanningTree, selection: LeafSelection):
    if __debug__:
        chosen = set(selection.leaves)
        for v in selection.leaves:
            cands = selection.parents[v]
            assert tree.degrees[v] == 1
            assert tree.neighbors[v][0] in cands
            assert not chosen.intersection(cands)


def validate_selection(g: Graph, tree: SpanningTree, selection: LeafSelection) -> None:
    """Raise ValueError unless the selection is valid for (g, tree)."""
    chosen = set(selection.leaves)
    if len(chosen) != len(selection.leaves):
        raise ValueError("selection lists a leaf twice")
    for v in selection.leaves:
        if tree.degrees[v] != 1:
            raise ValueError(f"vertex {v} is not a leaf of the tree")
        cands = selection.parents.get(v, ())
        if tree.neighbors[v][0] not in cands:
            raise ValueError(f"current parent of {v} missing from its candidates")
        nbrs = set(g.neighbors[v])
        for u in cands:
            if u not in nbrs:
                raise ValueError(f"candidate {u} is not a graph neighbour of {v}")
            if u in chosen:
                raise ValueError(f"candidate {u} of {v} is itself selected")


def reconfigure(
    g: Graph,
    tree: SpanningTree,
    selection: LeafSelection,
    rng,
    validate: bool = True,
) -> SpanningTree:
    """Detach each selected leaf and reattach it to a uniform candidate.

    Always returns a fresh tree (auditing needs both).  The result is a
    spanning tree by construction: candidates exclude selected leaves, so
    the unselected core stays a tree and each leaf hangs off it.
    """
    if validate:
        validate_selection(g, tree, selection)
    chosen = selection.leaves
    if not chosen:
        return SpanningTree(
            g, [nbrs[:] for nbrs in tree.neighbors], list(tree.degrees)
        )
    buf = rng.random(len(chosen)).tolist()
    new_parent = {}
    for i, v in enumerate(chosen):
        cands = selection.parents[v]
        new_parent[v] = cands[int(buf[i] * len(cands))]
    n = g.n
    in_l = bytearray(n)
    for v in chosen:
        in_l[v] = 1
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        if in_l[u]:
            continue
        for w in tree.neighbors[u]:
            if u < w and not in_l[w]:
                nbrs[u].append(w)
                nbrs[w].append(u)
    for v, p in new_parent.items():
        nbrs[v].append(p)
        nbrs[p].append(v)
    return SpanningTree(g, nbrs, [len(x) for x in nbrs])


@dataclass
class AuditReport:
    trials: int
    violations: list[dict]

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_reversibility(
    g: Graph,
    tree: SpanningTree,
    subset: VertexSubset,
    trials: int,
    rng,
    strategy=select_leaves,
) -> AuditReport:
    """Sample reconfigurations and recompute the selection from scratch.

    Any difference between the original outcome and the outcome computed
    on a reconfigured tree (branch tag, leaf set, or any candidate set) is
    recorded as a violation.  The production rule should never produce
    one; the ``strategy`` hook lets tests audit deliberately broken rules.
    """
    base = strategy(g, tree, subset)
    violations: list[dict] = []
    for t in range(trials):
        redone = reconfigure(g, tree, base.selection, rng, validate=False)
        again = strategy(g, redone, subset)
        diff = _outcome_diff(base, again)
        if diff:
            violations.append({"trial": t, **diff})
    return AuditReport(trials=trials, violations=violations)


def _outcome_diff(a: StrategyOutcome, b: StrategyOutcome) -> dict | None:
    if a.branch != b.branch:
        return {"field": "branch", "before": a.branch, "after": b.branch}
    if set(a.selection.leaves) != set(b.selection.leaves):
        return {
            "field": "leaves",
            "before": sorted(a.selection.leaves),
            "after": sorted(b.selection.leaves),
        }
    for v in a.selection.leaves:
        if a.selection.parents[v] != b.selection.parents[v]:
            return {
                "field": f"parents[{v}]",
                "before": list(a.selection.parents[v]),
                "after": list(b.selection.parents[v]),
            }
    return None

"""Merge hierarchy of MST components and its size-based simplification.

Sweeping the tree edges in ascending order is a single-linkage pass: every
edge joins two live components, so the history forms a binary tree whose
leaves are points and whose internal nodes are merge events. Birth/death
values of the nodes double as the zero-dimensional persistence pairing, and
collapsing undersized sibling leaves yields the components of interest.
"""

import heapq
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mst import SpanningTree, WeightedEdge


@dataclass
class MergeNode:
    """Read-only view of one hierarchy node."""

    id: int
    size: int
    birth: float
    death: float
    children: tuple
    merge_edge: Optional[WeightedEdge]


@dataclass
class MergeTree:
    """Binary merge hierarchy over n points.

    Nodes 0..n-1 are the point leaves; node n+k is the component created by
    edge k of the ascending edge list. The root is the last node. All fields
    are parallel arrays indexed by node id.
    """

    n: int
    size: np.ndarray
    birth: np.ndarray
    death: np.ndarray
    child_a: np.ndarray
    child_b: np.ndarray
    parent: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray

    @property
    def n_nodes(self) -> int:
        return 2 * self.n - 1

    @property
    def root(self) -> int:
        return self.n_nodes - 1

    def is_leaf(self, node: int) -> bool:
        return self.child_a[node] < 0

    def node(self, node: int) -> MergeNode:
        node = int(node)
        if self.is_leaf(node):
            children, edge = (), None
        else:
            children = (int(self.child_a[node]), int(self.child_b[node]))
            edge = WeightedEdge(int(self.edge_u[node - self.n]),
                                int(self.edge_v[node - self.n]),
                                float(self.birth[node]))
        return MergeNode(node, int(self.size[node]), float(self.birth[node]),
                         float(self.death[node]), children, edge)

    def members(self, node: int) -> np.ndarray:
        """Point ids under a node, ascending."""
        out = []
        stack = [int(node)]
        while stack:
            x = stack.pop()
            if self.child_a[x] < 0:
                out.append(x)
            else:
                stack.append(int(self.child_a[x]))
                stack.append(int(self.child_b[x]))
        return np.array(sorted(out), np.int64)


@dataclass
class SimplifiedTree:
    """Result of size-threshold simplification.

    retained marks nodes that survived collapsing (a connected subtree
    containing the root); leaf marks which retained nodes are leaves of the
    simplified tree; components_of_interest are the retained leaves whose
    size meets the threshold.
    """

    eta: int
    retained: np.ndarray
    leaf: np.ndarray
    components_of_interest: np.ndarray


@dataclass
class PersistenceDiagram:
    """Multiset of (birth, death) pairs; death may be +inf."""

    births: np.ndarray
    deaths: np.ndarray

    def __post_init__(self):
        self.births = np.asarray(self.births, np.float64)
        self.deaths = np.asarray(self.deaths, np.float64)
        if self.births.shape != self.deaths.shape or self.births.ndim != 1:
            raise ValueError("births and deaths must be 1-D arrays of equal length")
        if np.any(np.isinf(self.births)):
            raise ValueError("births must be finite")
        if np.any(self.deaths < self.births):
            raise ValueError("death earlier than birth")

    @property
    def pairs(self) -> list:
        return [(float(b), float(d)) for b, d in zip(self.births, self.deaths)]

    def finite(self) -> tuple:
        keep = np.isfinite(self.deaths)
        return self.births[keep], self.deaths[keep]

    @property
    def n_infinite(self) -> int:
        return int(np.sum(np.isinf(self.deaths)))

    def to_json(self) -> dict:
        return {"pairs": [[b, None if math.isinf(d) else d] for b, d in self.pairs]}


def build_merge_tree(tree: SpanningTree) -> MergeTree:
    """Run the ascending union sweep and record every merge as a node.

    Each edge must join two distinct live components; a repeated component
    pair means the input had a cycle.
    """
    n = tree.n
    total = 2 * n - 1
    size = np.ones(total, np.int64)
    birth = np.zeros(total, np.float64)
    death = np.full(total, np.inf)
    child_a = np.full(total, -1, np.int64)
    child_b = np.full(total, -1, np.int64)
    parent = np.full(total, -1, np.int64)

    uf = list(range(n))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    comp_node = list(range(n))  # current hierarchy node per set root
    for k in range(n - 1):
        u, v, w = int(tree.us[k]), int(tree.vs[k]), float(tree.ws[k])
        ra, rb = find(u), find(v)
        if ra == rb:
            raise ValueError(f"edge {k} ({u},{v}) closes a cycle; not a spanning tree")
        node = n + k
        na, nb = comp_node[ra], comp_node[rb]
        child_a[node] = na
        child_b[node] = nb
        parent[na] = node
        parent[nb] = node
        birth[node] = w
        death[na] = w
        death[nb] = w
        size[node] = size[na] + size[nb]
        uf[rb] = ra
        comp_node[ra] = node
    return MergeTree(n, size, birth, death, child_a, child_b, parent,
                     tree.us.copy(), tree.vs.copy())


def persistence_diagram(tree: SpanningTree) -> PersistenceDiagram:
    """Zero-dimensional diagram of the distance filtration.

    Every component is born at 0; one dies per edge weight, and one survives
    forever.
    """
    deaths = np.concatenate([tree.ws, [np.inf]])
    return PersistenceDiagram(np.zeros(tree.n), deaths)


def default_eta(n: int) -> int:
    # 1% of the dataset, never below one point
    return max(1, round(0.01 * n))


def resolve_eta(value, n: int) -> int:
    """Accept an absolute count or a percentage string like "1%".

    Percentages resolve as round(pct * n), never below one point; values over
    100% are rejected. Absolute counts may exceed n (everything collapses).
    """
    if isinstance(value, str):
        text = value.strip()
        if text.endswith("%"):
            try:
                pct = float(text[:-1])
            except ValueError:
                raise ValueError(f"invalid eta percentage: {value!r}") from None
            if not 0.0 < pct <= 100.0:
                raise ValueError(f"eta percentage must be in (0, 100], got {value!r}")
            return max(1, round(pct / 100.0 * n))
        try:
            value = int(text)
        except ValueError:
            raise ValueError(f"invalid eta: {value!r}") from None
    eta = int(value)
    if eta < 1:
        raise ValueError(f"eta must be at least 1, got {eta}")
    return eta


def simplify(tree: MergeTree, eta: int) -> SimplifiedTree:
    """Collapse undersized sibling-leaf pairs until a fixpoint.

    A leaf with size < eta whose sibling is currently also a leaf merges with
    that sibling into their parent, which becomes a leaf of the working tree;
    candidates are processed in (parent birth, node id) order. Leaves whose
    sibling is internal wait until the sibling has itself collapsed into a
    leaf, and may never qualify.
    """
    if eta < 1:
        raise ValueError(f"eta must be >= 1, got {eta}")
    total = tree.n_nodes
    alive = np.ones(total, bool)
    leaf = tree.child_a < 0
    parent = tree.parent
    size = tree.size

    def sibling(x):
        p = parent[x]
        a = tree.child_a[p]
        return int(tree.child_b[p]) if a == x else int(a)

    heap = []
    for x in range(total):
        if leaf[x] and size[x] < eta and parent[x] >= 0 and leaf[sibling(x)]:
            heapq.heappush(heap, (float(tree.birth[parent[x]]), x))
    while heap:
        _, x = heapq.heappop(heap)
        if not alive[x]:
            continue
        s = sibling(x)
        if not leaf[s]:
            continue
        p = int(parent[x])
        alive[x] = False
        alive[s] = False
        leaf[p] = True
        if parent[p] >= 0:
            t = sibling(p)
            gb = float(tree.birth[parent[p]])
            if size[p] < eta and leaf[t]:
                heapq.heappush(heap, (gb, p))
            if leaf[t] and size[t] < eta:
                heapq.heappush(heap, (gb, t))
    components = np.flatnonzero(alive & leaf & (size >= eta)).astype(np.int64)
    return SimplifiedTree(eta, alive, alive & leaf, components)


def components_point_map(simplified: SimplifiedTree, tree: MergeTree) -> np.ndarray:
    """Per-point component assignment: the owning component node id, -1 outside."""
    out = np.full(tree.n, -1, np.int64)
    for c in simplified.components_of_interest:
        out[tree.members(int(c))] = c
    return out


def hierarchy_json(tree: MergeTree, simplified: SimplifiedTree) -> dict:
    """Wire form of the simplified hierarchy. Infinite deaths become null."""
    comps = set(int(c) for c in simplified.components_of_interest)
    nodes = []
    for i in range(tree.n_nodes):
        death = float(tree.death[i])
        children = [] if tree.is_leaf(i) else [int(tree.child_a[i]), int(tree.child_b[i])]
        nodes.append({
            "id": i,
            "size": int(tree.size[i]),
            "birth": float(tree.birth[i]),
            "death": None if math.isinf(death) else death,
            "children": children,
            "retained": bool(simplified.retained[i]),
            "component_of_interest": i in comps,
        })
    return {
        "n": tree.n,
        "root": tree.root,
        "eta": simplified.eta,
        "components_of_interest": [int(c) for c in simplified.components_of_interest],
        "nodes": nodes,
    }

"""Group Steiner Tree solvers over weighted undirected instances.

``solve_exact`` runs the classic dynamic program over (node, covered-group
subset) states with best-first settling: singleton base states, edge-growth
transitions and subset merges. ``solve_topk`` generalizes it to bounded
per-state label lists for k-best enumeration (exact for the top tree,
best-effort beyond). ``solve_greedy`` is the fallback past the exact group
budget, and ``brute_force`` is the testing oracle.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

EXACT_GROUP_BUDGET = 12
BRUTE_FORCE_NODE_BUDGET = 10

# safety valves for k-best enumeration on degenerate inputs
_MAX_STORED_LABELS = 250_000
_MAX_PUSHES = 1_000_000


class GstError(Exception):
    """Invalid instance or solver precondition failure."""


class DisconnectedInstanceError(GstError):
    pass


class GroupBudgetExceededError(GstError):
    pass


@dataclass(frozen=True)
class SteinerTree:
    """A connected acyclic subgraph touching every group."""

    nodes: frozenset[int]
    edges: frozenset[tuple[int, int]]
    cost: float

    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))


@dataclass(frozen=True)
class GstInstance:
    """Undirected graph with edge costs in [0, 1] and >= 2 terminal groups."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, float], ...]  # (u, v, cost), u < v, deduplicated
    groups: tuple[frozenset[int], ...]
    _adjacency: dict[int, tuple[tuple[int, int, float], ...]] = field(
        default_factory=dict, compare=False, repr=False
    )

    @classmethod
    def build(
        cls,
        nodes: list[int] | tuple[int, ...] | set[int],
        edges: list[tuple[int, int, float]],
        groups: list[frozenset[int] | set[int]],
    ) -> "GstInstance":
        node_tuple = tuple(sorted(set(nodes)))
        node_set = set(node_tuple)
        canonical: dict[tuple[int, int], float] = {}
        for u, v, cost in edges:
            if u == v:
                continue
            if u not in node_set or v not in node_set:
                raise GstError(f"edge ({u}, {v}) references unknown node")
            if not 0.0 <= cost <= 1.0:
                raise GstError(f"edge cost {cost} outside [0, 1]")
            key = (u, v) if u < v else (v, u)
            if key not in canonical or cost < canonical[key]:
                canonical[key] = cost
        edge_tuple = tuple((u, v, canonical[(u, v)]) for u, v in sorted(canonical))
        group_tuple = tuple(frozenset(g) for g in groups)
        if len(group_tuple) < 2:
            raise GstError("an instance needs at least 2 groups")
        for gi, group in enumerate(group_tuple):
            if not group:
                raise GstError(f"group {gi} is empty")
            if not group <= node_set:
                raise GstError(f"group {gi} references unknown nodes")
        instance = cls(nodes=node_tuple, edges=edge_tuple, groups=group_tuple)
        if not instance.is_connected():
            raise DisconnectedInstanceError("instance graph is not connected")
        return instance

    def adjacency(self) -> dict[int, tuple[tuple[int, int, float], ...]]:
        """node -> ((edge_id, neighbor, cost), ...)"""
        if not self._adjacency:
            adj: dict[int, list[tuple[int, int, float]]] = {n: [] for n in self.nodes}
            for eid, (u, v, cost) in enumerate(self.edges):
                adj[u].append((eid, v, cost))
                adj[v].append((eid, u, cost))
            object.__setattr__(
                self, "_adjacency", {n: tuple(lst) for n, lst in adj.items()}
            )
        return self._adjacency

    def is_connected(self) -> bool:
        if not self.nodes:
            return False
        adj = self.adjacency()
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            node = stack.pop()
            for _, other, _ in adj[node]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return len(seen) == len(self.nodes)

    def node_masks(self) -> dict[int, int]:
        masks = {n: 0 for n in self.nodes}
        for gi, group in enumerate(self.groups):
            for node in group:
                masks[node] |= 1 << gi
        return masks

    def edge_cost(self, u: int, v: int) -> float:
        key = (u, v) if u < v else (v, u)
        for eu, ev, cost in self.edges:
            if (eu, ev) == key:
                return cost
        raise GstError(f"no edge ({u}, {v})")


def is_feasible(inst: GstInstance, tree: SteinerTree) -> bool:
    """Tree-ness plus coverage: acyclic, connected, >= 1 node per group,
    cost equal to the edge-cost sum."""
    if not tree.nodes:
        return False
    for group in inst.groups:
        if not group & tree.nodes:
            return False
    edge_costs = {(u, v): c for u, v, c in inst.edges}
    total = 0.0
    adj: dict[int, set[int]] = {n: set() for n in tree.nodes}
    for u, v in tree.edges:
        if (u, v) not in edge_costs or u not in tree.nodes or v not in tree.nodes:
            return False
        total += edge_costs[(u, v)]
        adj[u].add(v)
        adj[v].add(u)
    if len(tree.edges) != len(tree.nodes) - 1:
        return False
    seen = set()
    stack = [next(iter(tree.nodes))]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(adj[node] - seen)
    return len(seen) == len(tree.nodes) and abs(total - tree.cost) < 1e-9


# ---------------------------------------------------------------------------
# Label materialization: turn a DP edge set into a valid, pruned tree
# ---------------------------------------------------------------------------


def _materialize(
    inst: GstInstance, edge_ids: tuple[int, ...], root: int, prune: bool = True
) -> SteinerTree:
    """Turn a DP label's edge set into a valid tree. ``prune`` removes
    leaves not needed for coverage (wanted for single-answer solvers, but
    not for k-best enumeration where the extra nodes are the point)."""
    if not edge_ids:
        return SteinerTree(nodes=frozenset({root}), edges=frozenset(), cost=0.0)
    chosen = [inst.edges[eid] for eid in edge_ids]
    nodes = {root}
    for u, v, _ in chosen:
        nodes.add(u)
        nodes.add(v)
    # spanning tree of the (connected) label subgraph; drops any cycles that
    # subset merges may have introduced
    if len(chosen) != len(nodes) - 1:
        parent = {n: n for n in nodes}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        kept = []
        for u, v, cost in sorted(chosen, key=lambda e: (e[2], e[0], e[1])):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                kept.append((u, v, cost))
        chosen = kept

    adj: dict[int, set[int]] = {n: set() for n in nodes}
    cost_of: dict[tuple[int, int], float] = {}
    for u, v, cost in chosen:
        adj[u].add(v)
        adj[v].add(u)
        cost_of[(u, v) if u < v else (v, u)] = cost

    masks = inst.node_masks()
    full_count = [0] * len(inst.groups)
    for node in nodes:
        for gi in range(len(inst.groups)):
            if masks[node] >> gi & 1:
                full_count[gi] += 1

    # iteratively drop leaves whose groups stay covered without them
    changed = prune
    while changed:
        changed = False
        for leaf in sorted(nodes):
            if len(adj[leaf]) != 1:
                continue
            removable = all(
                full_count[gi] > 1
                for gi in range(len(inst.groups))
                if masks[leaf] >> gi & 1
            )
            if removable:
                (neighbor,) = adj[leaf]
                adj[neighbor].discard(leaf)
                del adj[leaf]
                nodes.discard(leaf)
                cost_of.pop((leaf, neighbor) if leaf < neighbor else (neighbor, leaf))
                for gi in range(len(inst.groups)):
                    if masks[leaf] >> gi & 1:
                        full_count[gi] -= 1
                changed = True
    return SteinerTree(
        nodes=frozenset(nodes),
        edges=frozenset(cost_of),
        cost=sum(cost_of.values()),
    )


def _tree_sort_key(tree: SteinerTree) -> tuple[float, int, tuple[tuple[int, int], ...], tuple[int, ...]]:
    return (tree.cost, len(tree.edges), tree.sorted_edges(), tuple(sorted(tree.nodes)))


# ---------------------------------------------------------------------------
# Exact solver
# ---------------------------------------------------------------------------


def _merge_edge_sets(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(set(a) | set(b)))


def solve_exact(inst: GstInstance) -> SteinerTree:
    """Minimum-cost Group Steiner Tree by best-first dynamic programming.

    States are (node, covered-group bitmask); base states are the group
    members; transitions grow along an edge or merge two labels at the
    same node. Ties break toward the lexicographically smallest edge-id
    set among minimum-cost trees.
    """
    g = len(inst.groups)
    if g > EXACT_GROUP_BUDGET:
        raise GroupBudgetExceededError(
            f"{g} groups exceed the exact budget of {EXACT_GROUP_BUDGET}; use solve_greedy"
        )
    if not inst.is_connected():
        raise DisconnectedInstanceError("instance graph is not connected")
    full = (1 << g) - 1
    masks = inst.node_masks()
    adj = inst.adjacency()

    # state -> (cost, edge-id tuple); heap orders by cost then edge ids
    settled: dict[tuple[int, int], tuple[float, tuple[int, ...]]] = {}
    by_node: dict[int, list[tuple[int, float, tuple[int, ...]]]] = {n: [] for n in inst.nodes}
    heap: list[tuple[float, tuple[int, ...], int, int]] = []
    for gi, group in enumerate(inst.groups):
        for node in sorted(group):
            heapq.heappush(heap, (0.0, (), node, 1 << gi))

    while heap:
        cost, edges, node, mask = heapq.heappop(heap)
        mask |= masks[node]  # a tree containing the node covers its groups
        state = (node, mask)
        if state in settled:
            continue
        settled[state] = (cost, edges)
        by_node[node].append((mask, cost, edges))
        if mask == full:
            continue
        for eid, other, ecost in adj[node]:
            if (other, mask | masks[other]) not in settled:
                heapq.heappush(
                    heap, (cost + ecost, _merge_edge_sets(edges, (eid,)), other, mask)
                )
        for other_mask, other_cost, other_edges in by_node[node]:
            combined = mask | other_mask
            if combined in (mask, other_mask):
                continue
            if (node, combined) not in settled:
                heapq.heappush(
                    heap,
                    (cost + other_cost, _merge_edge_sets(edges, other_edges), node, combined),
                )

    candidates = [
        _materialize(inst, edges, node)
        for (node, mask), (cost, edges) in settled.items()
        if mask == full
    ]
    if not candidates:
        raise GstError("no feasible tree found (unreachable on a connected instance)")
    return min(candidates, key=_tree_sort_key)


# ---------------------------------------------------------------------------
# k-best enumeration
# ---------------------------------------------------------------------------


# label variety at full coverage comes from continuing to grow settled full
# labels, so partial states only need a short list to stay exact for top-1
_PARTIAL_STATE_CAP = 4


def solve_topk(inst: GstInstance, k: int) -> list[SteinerTree]:
    """Up to ``k`` trees of non-decreasing cost and pairwise distinct node
    sets, from the same DP as ``solve_exact`` but with bounded label lists
    per state and dominance pruning (a costlier superset of a stored label
    at the same partial state is dropped). The first tree matches
    ``solve_exact``'s cost; later trees are best-effort."""
    if k < 1:
        raise GstError("k must be >= 1")
    g = len(inst.groups)
    if g > EXACT_GROUP_BUDGET:
        raise GroupBudgetExceededError(
            f"{g} groups exceed the exact budget of {EXACT_GROUP_BUDGET}; use solve_greedy"
        )
    if not inst.is_connected():
        raise DisconnectedInstanceError("instance graph is not connected")
    full = (1 << g) - 1
    masks = inst.node_masks()
    adj = inst.adjacency()
    partial_cap = min(k, _PARTIAL_STATE_CAP)

    labels: dict[tuple[int, int], list[tuple[float, frozenset[int]]]] = {}
    by_node: dict[int, list[tuple[int, float, frozenset[int]]]] = {n: [] for n in inst.nodes}
    heap: list[tuple[float, int, int, int, frozenset[int]]] = []
    seq = itertools.count()
    pushes = 0
    stored = 0
    full_count = 0
    bound = float("inf")

    def cap_of(mask: int) -> int:
        return k if mask == full else partial_cap

    for gi, group in enumerate(inst.groups):
        for node in sorted(group):
            heapq.heappush(heap, (0.0, next(seq), node, 1 << gi, frozenset()))

    while heap:
        cost, _, node, mask, edge_set = heapq.heappop(heap)
        if cost > bound:
            break  # pops are monotone in cost; nothing better remains
        mask |= masks[node]
        state = (node, mask)
        stored_here = labels.setdefault(state, [])
        if len(stored_here) >= cap_of(mask):
            continue
        dominated = False
        for _, prev_edges in stored_here:
            if prev_edges == edge_set or (mask != full and prev_edges <= edge_set):
                dominated = True
                break
        if dominated:
            continue
        stored_here.append((cost, edge_set))
        by_node[node].append((mask, cost, edge_set))
        stored += 1
        if mask == full:
            full_count += 1
            if full_count >= k and bound == float("inf"):
                bound = cost
        if stored > _MAX_STORED_LABELS or pushes > _MAX_PUSHES:
            break
        for eid, other, ecost in adj[node]:
            new_cost = cost + ecost
            new_mask = mask | masks[other]
            if new_cost <= bound and len(labels.get((other, new_mask), ())) < cap_of(new_mask):
                heapq.heappush(
                    heap, (new_cost, next(seq), other, mask, edge_set | {eid})
                )
                pushes += 1
        for other_mask, other_cost, other_edges in by_node[node]:
            combined = mask | other_mask
            if combined in (mask, other_mask):
                continue
            new_cost = cost + other_cost
            if new_cost <= bound and len(labels.get((node, combined), ())) < cap_of(combined):
                heapq.heappush(
                    heap,
                    (new_cost, next(seq), node, combined, edge_set | other_edges),
                )
                pushes += 1

    by_nodeset: dict[frozenset[int], SteinerTree] = {}
    for (node, mask), stored_labels in labels.items():
        if mask != full:
            continue
        for cost, edge_set in stored_labels:
            tree = _materialize(inst, tuple(sorted(edge_set)), node, prune=False)
            prev = by_nodeset.get(tree.nodes)
            if prev is None or _tree_sort_key(tree) < _tree_sort_key(prev):
                by_nodeset[tree.nodes] = tree
    trees = sorted(by_nodeset.values(), key=_tree_sort_key)
    return trees[:k]


# ---------------------------------------------------------------------------
# Greedy fallback
# ---------------------------------------------------------------------------


def solve_greedy(inst: GstInstance) -> SteinerTree:
    """Feasible tree from iterative cheapest-path attachment: grow from the
    smallest group-member node, repeatedly connect the nearest node of an
    uncovered group via a multi-source shortest path, then prune leaves
    not needed for coverage."""
    if not inst.is_connected():
        raise DisconnectedInstanceError("instance graph is not connected")
    masks = inst.node_masks()
    adj = inst.adjacency()
    full = (1 << len(inst.groups)) - 1

    start = min(min(group) for group in inst.groups)
    tree_nodes: set[int] = {start}
    tree_edges: dict[tuple[int, int], float] = {}
    covered = masks[start]

    while covered != full:
        # multi-source Dijkstra from the current tree
        dist: dict[int, float] = {n: 0.0 for n in tree_nodes}
        prev: dict[int, tuple[int, int]] = {}
        heap = [(0.0, n) for n in sorted(tree_nodes)]
        heapq.heapify(heap)
        done: set[int] = set()
        target: int | None = None
        while heap:
            d, node = heapq.heappop(heap)
            if node in done:
                continue
            done.add(node)
            if masks[node] & ~covered:
                target = node
                break
            for eid, other, ecost in adj[node]:
                nd = d + ecost
                if nd < dist.get(other, float("inf")):
                    dist[other] = nd
                    prev[other] = (node, eid)
                    heapq.heappush(heap, (nd, other))
        if target is None:
            raise GstError("greedy attachment failed on a connected instance")
        node = target
        while node not in tree_nodes:
            parent, eid = prev[node]
            u, v, cost = inst.edges[eid]
            tree_edges[(u, v)] = cost
            tree_nodes.add(node)
            node = parent
        covered = 0
        for n in tree_nodes:
            covered |= masks[n]

    # prune leaves not needed for coverage
    edge_ids = tuple(
        eid
        for eid, (u, v, _) in enumerate(inst.edges)
        if (u, v) in tree_edges
    )
    root = min(tree_nodes)
    return _materialize(inst, edge_ids, root)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def brute_force(inst: GstInstance) -> SteinerTree:
    """Exhaustive minimum over the spanning trees of every connected node
    subset that covers all groups. Only for instances of <= 10 nodes."""
    n = len(inst.nodes)
    if n > BRUTE_FORCE_NODE_BUDGET:
        raise GstError(f"brute force limited to {BRUTE_FORCE_NODE_BUDGET} nodes, got {n}")
    masks = inst.node_masks()
    full = (1 << len(inst.groups)) - 1
    best: SteinerTree | None = None
    best_key = None
    for size in range(1, n + 1):
        for subset in itertools.combinations(inst.nodes, size):
            covered = 0
            for node in subset:
                covered |= masks[node]
            if covered != full:
                continue
            subset_set = set(subset)
            sub_edges = [
                (cost, u, v)
                for u, v, cost in inst.edges
                if u in subset_set and v in subset_set
            ]
            # minimum spanning tree of the induced subgraph, if spanning
            parent = {x: x for x in subset}

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            chosen: list[tuple[int, int]] = []
            total = 0.0
            for cost, u, v in sorted(sub_edges):
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
                    chosen.append((u, v))
                    total += cost
            if len(chosen) != size - 1:
                continue  # induced subgraph not connected
            tree = SteinerTree(
                nodes=frozenset(subset), edges=frozenset(chosen), cost=total
            )
            key = _tree_sort_key(tree)
            if best_key is None or key < best_key:
                best, best_key = tree, key
    if best is None:
        raise GstError("no covering connected subset exists")
    return best

"""Architecture graphs, all-pairs shortest paths, and reduction trees.

An architecture is an undirected connected graph of physical qubits.
Distance and successor tables are built once per graph; Steiner-style
reduction trees are grown on demand and memoized per terminal set, since
cost-table construction re-roots the same grown tree at every node.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

INF = 10**9
ADD_OP = "ADD"
SWAP_OP = "SWAP"


class DisconnectedGraphError(ValueError):
    """Raised when a graph that must be connected is not."""


class ArchFileError(ValueError):
    """Raised for malformed architecture files."""


def floyd_warshall_with_path(n: int, edges) -> Tuple[list, list]:
    """Hop-count shortest distances plus successor table.

    Edges are symmetrized; unit weights.  succ[i][j] is a neighbour of i
    on a shortest i->j path (succ[i][i] = i).  Raises
    DisconnectedGraphError naming an unreachable pair.
    """
    dist = [[INF] * n for _ in range(n)]
    succ: List[List[Optional[int]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0
        succ[i][i] = i
    for u, v in edges:
        dist[u][v] = 1
        dist[v][u] = 1
        succ[u][v] = v
        succ[v][u] = u
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            di = dist[i]
            dik = di[k]
            if dik == INF:
                continue
            si = succ[i]
            sik = si[k]
            for j in range(n):
                alt = dik + dk[j]
                if di[j] > alt:
                    di[j] = alt
                    si[j] = sik
    for i in range(n):
        for j in range(n):
            if dist[i][j] >= INF:
                raise DisconnectedGraphError(
                    f"graph is disconnected: no path between {i} and {j}"
                )
    return dist, succ


def path_from_successors(succ, u: int, v: int) -> List[int]:
    """Path [u, ..., v] following the successor table; [] if no entry."""
    if succ[u][v] is None:
        return []
    path = [u]
    x = u
    while x != v:
        x = succ[x][v]
        path.append(x)
    return path


class ArchGraph:
    """Immutable connected architecture graph with distance tables."""

    def __init__(self, n: int, edges, names: Optional[Sequence[str]] = None,
                 name: str = ""):
        if n < 1:
            raise ValueError("graph needs at least one node")
        self.n = n
        self.name = name
        if names is None:
            names = [f"Q{i + 1}" for i in range(n)]
        if len(names) != n:
            raise ValueError("one display name per node required")
        self.names = tuple(names)
        seen = set()
        norm = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        self.edges: FrozenSet[Tuple[int, int]] = frozenset(norm)
        adj: List[List[int]] = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self.dist, self.succ = floyd_warshall_with_path(n, norm)
        self._grow_cache: Dict[FrozenSet[int], dict] = {}
        self._tree_cache: Dict[Tuple[FrozenSet[int], int], ReductionTree] = {}

    def is_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def node_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown node name {name!r}") from None

    def __repr__(self) -> str:
        return f"ArchGraph({self.name or self.n!r}, n={self.n}, edges={len(self.edges)})"


class ReductionTree:
    """Rooted tree inside an architecture graph with terminal bookkeeping.

    ``parent`` maps every non-root vertex to its parent; terminals and
    steiner_points partition the vertex set.  ``schedule`` is the
    post-order operation plan consumed by the row-graph reducers: one
    ("SWAP", child, parent) entry per Steiner parent's first-visited
    child, ("ADD", parent, child) everywhere else.
    """

    __slots__ = ("root", "parent", "terminals", "steiner_points", "vertices",
                 "post_order", "schedule", "schedule_cost")

    def __init__(self, root: int, parent: Dict[int, int], terminals):
        if root in parent:
            raise ValueError("root must not have a parent")
        children: Dict[int, List[int]] = {v: [] for v in parent}
        children[root] = []
        for c, p in parent.items():
            children.setdefault(p, []).append(c)
        for kids in children.values():
            kids.sort()
        _finish_tree(self, root, dict(parent), children, terminals)

    def edge_list(self) -> List[Tuple[int, int]]:
        return [(c, p) for c, p in self.parent.items()]

    def __repr__(self) -> str:
        return (f"ReductionTree(root={self.root}, vertices={sorted(self.vertices)}, "
                f"steiner={sorted(self.steiner_points)})")


def _finish_tree(tree: ReductionTree, root: int, parent: Dict[int, int],
                 children: Dict[int, List[int]], terminals) -> None:
    """Fill a ReductionTree's slots from parent/children maps.

    Children lists must already be in ascending node order; the schedule
    swaps each Steiner parent with its first-visited child and adds
    everywhere else.
    """
    tree.root = root
    tree.parent = parent
    vertices = frozenset(children)
    tree.vertices = vertices
    term = frozenset(terminals) & vertices
    tree.terminals = term
    steiner = vertices - term
    tree.steiner_points = steiner
    if root not in term:
        raise ValueError("root must be a terminal")
    # Post-order with ascending children == reversed pre-order with
    # descending children, which needs only one plain stack.
    pre: List[int] = []
    stack = [root]
    pop = stack.pop
    push = stack.extend
    add = pre.append
    while stack:
        node = pop()
        add(node)
        push(children[node])
    pre.reverse()
    tree.post_order = tuple(pre)
    sched = []
    cost = 0
    for u in pre:
        if u == root:
            break
        p = parent[u]
        if p in steiner and children[p][0] == u:
            sched.append((SWAP_OP, u, p))
            cost += 3
        else:
            sched.append((ADD_OP, p, u))
            cost += 1
    tree.schedule = tuple(sched)
    tree.schedule_cost = cost


def nearest_neighbours(first, second, dist) -> Tuple[int, int]:
    """Pair (u, v), u in first, v in second, minimizing dist[u][v].

    Pairs with u == v are skipped; ties break to the smallest (u, v).
    """
    best = None
    for u in sorted(first):
        du = dist[u]
        for v in sorted(second):
            if u == v:
                continue
            d = du[v]
            if best is None or d < best[0]:
                best = (d, u, v)
    if best is None:
        raise ValueError("no candidate pair")
    return best[1], best[2]


def _add_path(adjacency: dict, path: Sequence[int]) -> None:
    for node in path:
        adjacency.setdefault(node, set())
    for a, b in zip(path, path[1:]):
        adjacency[a].add(b)
        adjacency[b].add(a)


def _grow_steiner_graph(g: ArchGraph, terminals: FrozenSet[int]) -> dict:
    """Grow a tree-like graph spanning the terminals from shortest paths.

    Returns an adjacency map node -> sorted neighbour tuple, ready for
    deterministic BFS rooting.
    """
    adjacency: dict = {}
    remaining = set(terminals)
    if len(terminals) == 1:
        (only,) = terminals
        return {only: ()}
    u, v = nearest_neighbours(terminals, terminals, g.dist)
    _add_path(adjacency, path_from_successors(g.succ, u, v))
    remaining -= adjacency.keys()
    while remaining:
        u, v = nearest_neighbours(remaining, adjacency.keys(), g.dist)
        _add_path(adjacency, path_from_successors(g.succ, u, v))
        remaining -= adjacency.keys()
    return {node: tuple(sorted(nbs)) for node, nbs in adjacency.items()}


def _treefy(adjacency: dict, terminals: FrozenSet[int], root: int) -> ReductionTree:
    """Root the grown graph at ``root`` by BFS, then prune useless leaves.

    BFS drops any cycle-closing edge picked up by overlapping shortest
    paths.  Branches ending in non-terminal leaves contribute nothing to
    a reduction and would corrupt it, so they are removed.
    """
    parent: Dict[int, int] = {root: root}
    order = [root]
    for node in order:  # grows during iteration: FIFO BFS
        for nb in adjacency[node]:
            if nb not in parent:
                parent[nb] = node
                order.append(nb)
    del parent[root]
    nchild = dict.fromkeys(order, 0)
    for p in parent.values():
        nchild[p] += 1
    prune = [v for v in order if nchild[v] == 0 and v not in terminals]
    removed = set()
    while prune:
        leaf = prune.pop()
        removed.add(leaf)
        p = parent.pop(leaf)
        nchild[p] -= 1
        if nchild[p] == 0 and p not in terminals:
            prune.append(p)
    if removed:
        order = [v for v in order if v not in removed]
    children: Dict[int, List[int]] = {v: [] for v in order}
    for v in order:
        if v != root:
            children[parent[v]].append(v)
    # BFS discovers each node's children consecutively in ascending
    # order, so the lists are already sorted.
    tree = ReductionTree.__new__(ReductionTree)
    _finish_tree(tree, root, parent, children, terminals)
    return tree


_TREE_CACHE_CAP = 20000
_GROW_CACHE_CAP = 4000


def gen_steiner(g: ArchGraph, terminals, root: int) -> ReductionTree:
    """Approximate Steiner tree spanning ``terminals``, rooted at ``root``.

    Grows a tree-like graph by repeatedly joining the nearest remaining
    terminal to the partial tree along a shortest path, then converts it
    to a rooted tree by BFS.  Results are memoized per (terminals, root):
    the grown graph is root-independent, and the cost table re-roots the
    same terminal set at every candidate node.  Caches are dropped
    wholesale past a size cap; sustained benchmark runs would otherwise
    accumulate trees without bound.
    """
    key = frozenset(terminals)
    if root not in key:
        raise ValueError(f"root {root} not in terminal set")
    tree = g._tree_cache.get((key, root))
    if tree is None:
        grown = g._grow_cache.get(key)
        if grown is None:
            if len(g._grow_cache) >= _GROW_CACHE_CAP:
                g._grow_cache.clear()
            grown = _grow_steiner_graph(g, key)
            g._grow_cache[key] = grown
        if len(g._tree_cache) >= _TREE_CACHE_CAP:
            g._tree_cache.clear()
        tree = _treefy(grown, key, root)
        g._tree_cache[(key, root)] = tree
    return tree


# ---------------------------------------------------------------------------
# Architecture files and the built-in registry.

_BUILTIN = ("9-square", "16-square", "ibm-qx5", "rigetti-16q-aspen",
            "ibm-q20-tokyo")


def parse_arch_json(text: str, source: str = "<arch>") -> Tuple[ArchGraph, Optional[List[int]]]:
    """Parse an architecture file.

    Schema: an object with fields ``name`` (str), ``nodes`` (list of
    display names), ``edges`` (list of [name, name] pairs) and optional
    ``initial_mapping`` (list of [wire, name] pairs, wires "w1".."wn").
    Returns the graph and the initial mapping as a wire->node list.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArchFileError(f"{source}: not valid JSON: {exc}") from exc
    for field in ("name", "nodes", "edges"):
        if field not in data:
            raise ArchFileError(f"{source}: missing field {field!r}")
    names = list(data["nodes"])
    if len(set(names)) != len(names):
        raise ArchFileError(f"{source}: duplicate node names")
    index = {nm: i for i, nm in enumerate(names)}
    edges = []
    for pair in data["edges"]:
        if len(pair) != 2:
            raise ArchFileError(f"{source}: malformed edge {pair!r}")
        a, b = pair
        if a not in index or b not in index:
            raise ArchFileError(f"{source}: edge {pair!r} names unknown node")
        edges.append((index[a], index[b]))
    try:
        graph = ArchGraph(len(names), edges, names, name=data["name"])
    except (ValueError, DisconnectedGraphError) as exc:
        raise ArchFileError(f"{source}: {exc}") from exc
    mapping = None
    if "initial_mapping" in data:
        n = len(names)
        mapping = [-1] * n
        for pair in data["initial_mapping"]:
            if len(pair) != 2:
                raise ArchFileError(f"{source}: malformed mapping entry {pair!r}")
            wire, node = pair
            if not (isinstance(wire, str) and wire.startswith("w")):
                raise ArchFileError(f"{source}: wire label {wire!r} must look like 'w3'")
            try:
                w = int(wire[1:]) - 1
            except ValueError:
                raise ArchFileError(f"{source}: wire label {wire!r} must look like 'w3'")
            if not 0 <= w < n:
                raise ArchFileError(f"{source}: wire {wire!r} out of range")
            if node not in index:
                raise ArchFileError(f"{source}: mapping names unknown node {node!r}")
            if mapping[w] != -1:
                raise ArchFileError(f"{source}: wire {wire!r} mapped twice")
            mapping[w] = index[node]
        if -1 in mapping or len(set(mapping)) != n:
            raise ArchFileError(f"{source}: initial_mapping is not a bijection")
    return graph, mapping


def load_arch_file(path: str) -> Tuple[ArchGraph, Optional[List[int]]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_arch_json(fh.read(), source=path)


def list_architectures() -> Tuple[str, ...]:
    return _BUILTIN


def get_architecture(name: str) -> Tuple[ArchGraph, List[int]]:
    """Load a built-in architecture and its stock initial mapping."""
    if name not in _BUILTIN:
        raise KeyError(f"unknown architecture {name!r}; known: {', '.join(_BUILTIN)}")
    text = resources.files("cnotroute").joinpath(f"archs/{name}.json").read_text("utf-8")
    graph, mapping = parse_arch_json(text, source=name)
    if mapping is None:
        raise ArchFileError(f"{name}: built-in file lacks initial_mapping")
    return graph, mapping


def resolve_architecture(name_or_path: str) -> Tuple[ArchGraph, Optional[List[int]]]:
    """Accept either a registry name or a path to an architecture file."""
    if name_or_path in _BUILTIN:
        return get_architecture(name_or_path)
    return load_arch_file(name_or_path)

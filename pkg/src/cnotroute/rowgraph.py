"""Row-graph state and its reduction primitives.

A row graph pairs an architecture graph with one matrix row per node.
Node addition XORs an adjacent row in (one CNOT); a swap exchanges two
adjacent rows (three CNOTs).  The reducers below rewrite the state until
every node holds a standard basis vector ("basic" form), logging the
operations so they can be emitted as a circuit.

The tuple-level ``apply_*``/``undo_operations`` helpers mutate a raw row
list without touching the op log; cost evaluation calls them thousands
of times per synthesis and rolls every mutation back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Set, Tuple

from .arch import ArchGraph, ReductionTree, gen_steiner
from .gf2 import (BitMatrix, SingularMatrixError, invert, is_unit,
                  solve_unit_combinations)

ADD = "ADD"
SWAP = "SWAP"


class ReductionError(ValueError):
    """Raised when a reduction precondition does not hold."""


@dataclass(frozen=True)
class RowOp:
    """One logged row operation.

    ADD(a, b) means row a ^= row b (a is the target).  SWAP(a, b)
    exchanges the rows; a is the tree child and b its parent in the
    traversal that produced the op.
    """

    kind: str
    a: int
    b: int


class RowGraph:
    """Mutable synthesis state: one packed row per architecture node."""

    __slots__ = ("graph", "rows", "op_log")

    def __init__(self, graph: ArchGraph, rows: Sequence[int]):
        if len(rows) != graph.n:
            raise ValueError("need exactly one row per node")
        self.graph = graph
        self.rows: List[int] = list(rows)
        self.op_log: List[RowOp] = []

    @classmethod
    def from_matrix(cls, graph: ArchGraph, mat: BitMatrix) -> "RowGraph":
        if mat.n != graph.n:
            raise ValueError(f"matrix is {mat.n}x{mat.n}, graph has {graph.n} nodes")
        return cls(graph, mat.rows)

    def matrix(self) -> BitMatrix:
        return BitMatrix(self.graph.n, self.rows)

    def is_basic(self) -> bool:
        return all(is_unit(r) for r in self.rows)

    def non_unit_nodes(self) -> List[int]:
        return [u for u, r in enumerate(self.rows) if not is_unit(r)]

    def clone(self) -> "RowGraph":
        twin = RowGraph(self.graph, self.rows)
        twin.op_log = list(self.op_log)
        return twin

    def _check_edge(self, u: int, v: int) -> None:
        if not self.graph.is_edge(u, v):
            raise ReductionError(f"nodes {u} and {v} are not adjacent")

    def node_add(self, u: int, v: int) -> None:
        """f(u) ^= f(v) for adjacent u, v; logged as ADD(u, v)."""
        self._check_edge(u, v)
        self.rows[u] ^= self.rows[v]
        self.op_log.append(RowOp(ADD, u, v))

    def swap_nodes(self, u: int, v: int) -> None:
        """Exchange f(u) and f(v) for adjacent u, v; logged atomically."""
        self._check_edge(u, v)
        self.rows[u], self.rows[v] = self.rows[v], self.rows[u]
        self.op_log.append(RowOp(SWAP, u, v))

    def mark(self) -> int:
        return len(self.op_log)

    def undo_to(self, mark: int) -> None:
        """Roll state and log back to a mark (ops are self-inverse)."""
        rows = self.rows
        log = self.op_log
        while len(log) > mark:
            op = log.pop()
            if op.kind == ADD:
                rows[op.a] ^= rows[op.b]
            else:
                rows[op.a], rows[op.b] = rows[op.b], rows[op.a]


def apply_schedule_tracked(rows: List[int], schedule,
                           root: int) -> Tuple[tuple, Set[int]]:
    """Run a reduction tree's op schedule on a raw row list.

    Returns the executed operations (the schedule itself) and the set of
    nodes whose standard basis vectors were disturbed and still need
    recovery.  SWAP entries migrate membership from the child to the
    parent, following the payload.  The root is never tracked: its row
    may pass through a unit vector while the terminal contributions
    accumulate, and recovery must not undo the reduction it serves.
    """
    tracked: Set[int] = set()
    for kind, a, b in schedule:
        if kind == ADD:
            r = rows[a]
            if a != root and r and r & (r - 1) == 0:
                tracked.add(a)
            rows[a] = r ^ rows[b]
        else:
            if a in tracked:
                tracked.add(b)
                tracked.discard(a)
            rows[a], rows[b] = rows[b], rows[a]
    return schedule, tracked


def apply_recovery(rows: List[int], operations, tracked: Set[int]) -> list:
    """Replay, in reverse, just the ops needed to restore tracked nodes."""
    recover = []
    for kind, n1, n2 in reversed(operations):
        if kind == ADD:
            if n1 in tracked:
                r = rows[n1] ^ rows[n2]
                rows[n1] = r
                recover.append((ADD, n1, n2))
                if r and r & (r - 1) == 0:
                    tracked.discard(n1)
        else:
            if n2 in tracked:
                rows[n1], rows[n2] = rows[n2], rows[n1]
                tracked.add(n1)
                tracked.discard(n2)
                recover.append((SWAP, n1, n2))
    return recover


def undo_operations(rows: List[int], operations) -> None:
    """Invert a run of operations (each op is its own inverse)."""
    for kind, a, b in reversed(operations):
        if kind == ADD:
            rows[a] ^= rows[b]
        else:
            rows[a], rows[b] = rows[b], rows[a]


def _check_tree(rg: RowGraph, tree: ReductionTree) -> int:
    """Validate the reduction precondition; returns the target unit row."""
    acc = 0
    for t in tree.terminals:
        acc ^= rg.rows[t]
    if not is_unit(acc):
        raise ReductionError(
            "terminal rows do not XOR to a standard basis vector"
        )
    return acc


def tree_reduce(rg: RowGraph, tree: ReductionTree) -> None:
    """Post-order tree reduction; leaves f(root) holding the unit vector."""
    _check_tree(rg, tree)
    ops, _ = apply_schedule_tracked(rg.rows, tree.schedule, tree.root)
    rg.op_log.extend(RowOp(*op) for op in ops)


def tree_reduce_tracked(rg: RowGraph, tree: ReductionTree) -> Tuple[List[RowOp], Set[int]]:
    """tree_reduce plus the set of disturbed unit-vector holders."""
    _check_tree(rg, tree)
    ops, tracked = apply_schedule_tracked(rg.rows, tree.schedule, tree.root)
    logged = [RowOp(*op) for op in ops]
    rg.op_log.extend(logged)
    return logged, tracked


def reduction_recovery(rg: RowGraph, operations: Sequence[RowOp],
                       tracked: Set[int], tree: ReductionTree) -> List[RowOp]:
    """Restore every tracked node to a unit vector; returns the ops used."""
    n = rg.graph.n
    for op in operations:
        if not (0 <= op.a < n and 0 <= op.b < n):
            raise ReductionError(f"operation {op} targets a node outside the graph")
    raw = [(op.kind, op.a, op.b) for op in operations]
    recover = apply_recovery(rg.rows, raw, tracked)
    logged = [RowOp(*op) for op in recover]
    rg.op_log.extend(logged)
    return logged


def simple_token_reduction(rg: RowGraph) -> List[RowOp]:
    """Reduce to basic form with full reversal after each node.

    For each node still holding a non-unit row: pick the first basis
    vector reachable by a row combination containing the node, reduce
    along a Steiner tree rooted there, then replay every op that does
    not involve the root in reverse so all other nodes regain the rows
    they started the pass with.  Total op weight stays within the
    n(6(n-2)+1) quadratic bound.
    """
    start = len(rg.op_log)
    g = rg.graph
    if invert(rg.matrix()) is None:
        raise SingularMatrixError("row graph is not reversible")
    for u in range(g.n):
        if is_unit(rg.rows[u]):
            continue
        solutions = solve_unit_combinations(rg.matrix(), u)
        e, nodes = solutions[0]
        tree = gen_steiner(g, nodes, u)
        mark = rg.mark()
        tree_reduce(rg, tree)
        done = list(rg.op_log[mark:])
        for op in reversed(done):
            if op.b == u:
                raise ReductionError(f"root {u} appeared as an op source: {op}")
            if op.a == u:
                continue
            if op.kind == ADD:
                rg.node_add(op.a, op.b)
            else:
                rg.swap_nodes(op.a, op.b)
    return list(rg.op_log[start:])

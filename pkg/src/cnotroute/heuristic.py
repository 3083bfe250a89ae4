"""Cost table, assignment loss, and the greedy token-reduction synthesizer.

Every iteration of the synthesizer prices each remaining reduction
(node, basis vector) by actually running it -- tracked reduction plus
recovery -- and rolling it back, then commits the candidate whose
resulting state has the cheapest perfect node-to-basis assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

from scipy.optimize import linear_sum_assignment

from .arch import gen_steiner
from .gf2 import SingularMatrixError, invert, vec_support
from .rowgraph import (RowGraph, RowOp, apply_recovery, apply_schedule_tracked,
                       reduction_recovery, tree_reduce_tracked, undo_operations)


class AssignmentError(ValueError):
    """Raised when no finite perfect assignment exists."""


def max_tree_cost(n: int) -> int:
    """Worst-case op weight of reducing one node on an n-node graph."""
    return 6 * (n - 2) + 1 if n >= 2 else 1


def infinite_cost(n: int) -> int:
    """Sentinel for unreachable (node, basis) pairs.

    Set to n * (n * max_tree_cost) + 1 so a full assignment of finite
    entries is always cheaper than touching a single sentinel.
    """
    return n * (n * max_tree_cost(n)) + 1


@dataclass(frozen=True)
class CostTable:
    """entries[u][e] = op weight to reduce node u to basis vector e."""

    n: int
    entries: Tuple[Tuple[int, ...], ...]
    infinite: int
    supports: Tuple[Tuple[int, ...], ...]  # reachable terminal set per e


@dataclass(frozen=True)
class Assignment:
    by_node: Tuple[int, ...]
    total: int


def _pair_cost(rows: List[int], graph, u: int, e: int,
               terminals: FrozenSet[int]) -> int:
    """Price reducing u to e, leaving the rows untouched."""
    tree = gen_steiner(graph, terminals, u)
    ops, tracked = apply_schedule_tracked(rows, tree.schedule, u)
    recover = apply_recovery(rows, ops, tracked)
    total = tree.schedule_cost
    for kind, _, _ in recover:
        total += 3 if kind == "SWAP" else 1
    undo_operations(rows, recover)
    undo_operations(rows, ops)
    return total


def cost(rg: RowGraph, u: int, e: int) -> int:
    """Reduction cost for one (node, basis vector) pair.

    Runs the tracked reduction and recovery, counts op weight (SWAP
    counts as 3), and rolls the state back bit-for-bit.  Returns the
    table's infinite sentinel when no row combination containing u
    yields e.
    """
    n = rg.graph.n
    inv = invert(rg.matrix())
    if inv is None:
        raise SingularMatrixError("row graph is not reversible")
    if not (inv.rows[e] >> u) & 1:
        return infinite_cost(n)
    if rg.rows[u] == 1 << e:
        return 0
    terminals = frozenset(vec_support(inv.rows[e]))
    return _pair_cost(rg.rows, rg.graph, u, e, terminals)


def build_cost_table(rg: RowGraph) -> CostTable:
    """All n^2 reduction costs; the row graph is left unchanged."""
    graph = rg.graph
    n = graph.n
    inv = invert(rg.matrix())
    if inv is None:
        raise SingularMatrixError("row graph is not reversible")
    sentinel = infinite_cost(n)
    entries = [[sentinel] * n for _ in range(n)]
    supports = []
    rows = rg.rows
    for e in range(n):
        sup = vec_support(inv.rows[e])
        supports.append(sup)
        terminals = frozenset(sup)
        ebit = 1 << e
        for u in sup:
            if rows[u] == ebit:
                entries[u][e] = 0
            else:
                entries[u][e] = _pair_cost(rows, graph, u, e, terminals)
    return CostTable(n, tuple(tuple(r) for r in entries), sentinel,
                     tuple(supports))


def hungarian_assign(table: CostTable) -> Assignment:
    """Minimum-total bijection node -> basis index over the cost table."""
    row_ind, col_ind = linear_sum_assignment(table.entries)
    by_node = [0] * table.n
    total = 0
    for r, c in zip(row_ind, col_ind):
        value = table.entries[r][c]
        if value >= table.infinite:
            raise AssignmentError("no finite perfect assignment exists")
        by_node[r] = int(c)
        total += value
    return Assignment(tuple(by_node), total)


def loss(rg: RowGraph) -> int:
    """Total cost of the cheapest node-to-basis assignment."""
    return hungarian_assign(build_cost_table(rg)).total


def _reduce_pair(rg: RowGraph, u: int, e: int,
                 terminals: FrozenSet[int]) -> None:
    tree = gen_steiner(rg.graph, terminals, u)
    ops, tracked = tree_reduce_tracked(rg, tree)
    reduction_recovery(rg, ops, tracked, tree)


def heuristic_token_reduction(rg: RowGraph) -> List[RowOp]:
    """Reduce the row graph to basic form, greedily and with look-ahead.

    Loop until basic: price every reduction of a node still holding a
    non-unit row, shortlist the cheapest ones, trial-run each (reduce,
    recover, score the resulting state's loss, roll back) and commit the
    one with the smallest loss.  Ties break to the lowest (node, basis)
    pair.  Each commit makes at least one more node basic, so the loop
    runs at most n times.
    """
    n = rg.graph.n
    if invert(rg.matrix()) is None:
        raise SingularMatrixError("row graph is not reversible")
    start = rg.mark()
    while True:
        rows = rg.rows
        non_unit = [u for u in range(n)
                    if not (rows[u] and rows[u] & (rows[u] - 1) == 0)]
        if not non_unit:
            break
        table = build_cost_table(rg)
        best_cost = min(table.entries[u][e] for u in non_unit for e in range(n))
        if best_cost >= table.infinite:
            raise AssignmentError("no reducible pair found; state corrupt")
        candidates = [(u, e) for u in non_unit for e in range(n)
                      if table.entries[u][e] == best_cost]
        if len(candidates) == 1:
            chosen = candidates[0]
        else:
            chosen = None
            best_loss = None
            for u, e in candidates:
                mark = rg.mark()
                _reduce_pair(rg, u, e, frozenset(table.supports[e]))
                trial_loss = loss(rg)
                rg.undo_to(mark)
                if best_loss is None or trial_loss < best_loss:
                    best_loss = trial_loss
                    chosen = (u, e)
        u, e = chosen
        _reduce_pair(rg, u, e, frozenset(table.supports[e]))
    return list(rg.op_log[start:])

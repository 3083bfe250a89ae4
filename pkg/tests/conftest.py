"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from cnotroute.arch import ArchGraph
from cnotroute.gf2 import BitMatrix, invert, is_unit, mat_mul
from cnotroute.rowgraph import RowGraph


def random_connected_graph(rng: random.Random, n: int, extra: int = 2) -> ArchGraph:
    """Random spanning tree plus a few extra edges."""
    edges = set()
    nodes = list(range(n))
    rng.shuffle(nodes)
    for i in range(1, n):
        a = nodes[i]
        b = nodes[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for _ in range(extra):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return ArchGraph(n, sorted(edges))


def grid_graph(rows: int, cols: int) -> ArchGraph:
    n = rows * cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return ArchGraph(n, edges)


def random_reversible_rowgraph(rng: random.Random, graph: ArchGraph,
                               n_ops: int) -> RowGraph:
    """Identity state scrambled by random adjacent row additions."""
    rg = RowGraph.from_matrix(graph, BitMatrix.identity(graph.n))
    edges = sorted(graph.edges)
    for _ in range(n_ops):
        u, v = rng.choice(edges)
        if rng.random() < 0.5:
            u, v = v, u
        rg.node_add(u, v)
    rg.op_log.clear()
    return rg


def random_invertible_matrix(rng: random.Random, n: int) -> BitMatrix:
    """Random invertible matrix built from random row operations."""
    m = BitMatrix.identity(n)
    if n == 1:
        return m
    for _ in range(n * n):
        a, b = rng.sample(range(n), 2)
        m.rows[a] ^= m.rows[b]
    if rng.random() < 0.5:
        rng.shuffle(m.rows)
    assert invert(m) is not None
    return m


def brute_force_unit_combinations(m: BitMatrix, u: int):
    """Subset-enumeration oracle for solve_unit_combinations.

    Enumerates every subset of rows containing u and keeps those whose
    XOR is a standard basis vector.  Exponential; for small n only.
    """
    n = m.n
    others = [i for i in range(n) if i != u]
    found = []
    for k in range(len(others) + 1):
        for combo in combinations(others, k):
            acc = m.rows[u]
            for i in combo:
                acc ^= m.rows[i]
            if is_unit(acc):
                found.append((acc.bit_length() - 1, frozenset((u,) + combo)))
    found.sort(key=lambda t: t[0])
    return found


def bfs_distances(n: int, edges) -> list:
    """Breadth-first-search all-pairs hop counts; oracle for Floyd-Warshall."""
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    out = []
    for s in range(n):
        dist = [None] * n
        dist[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if dist[y] is None:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        out.append(dist)
    return out


def ops_to_matrix(ops, n: int) -> BitMatrix:
    """Compose logged row ops into the matrix they apply from the left."""
    m = BitMatrix.identity(n)
    for op in ops:
        if op.kind == "ADD":
            step = BitMatrix.identity(n)
            step.rows[op.a] ^= 1 << op.b
        else:
            step = BitMatrix.identity(n)
            step.rows[op.a], step.rows[op.b] = step.rows[op.b], step.rows[op.a]
        m = mat_mul(step, m)
    return m


@pytest.fixture
def path4() -> ArchGraph:
    """The A-B-C-D line used by the worked four-qubit example."""
    return ArchGraph(4, [(0, 1), (1, 2), (2, 3)], names=["A", "B", "C", "D"])


@pytest.fixture
def grid3() -> ArchGraph:
    return grid_graph(3, 3)


@pytest.fixture
def grid4() -> ArchGraph:
    return grid_graph(4, 4)

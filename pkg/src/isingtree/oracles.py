"""Exact brute-force oracles: spin sums, dimer sums, tree sums, determinants.

Everything here is deliberately elementary -- straight enumerations and
O(n^3) Gaussian elimination -- so results can serve as ground truth for the
structured constructions.  Enumerations guard against runaway inputs via two
caps, overridable through the environment:

* ``ISINGTREE_SPIN_CAP``  (default 2^24): max number of spin configurations;
* ``ISINGTREE_STATE_CAP`` (default 10^7): max partial states explored by the
  matching / tree backtracking.

Exceeding a cap raises :class:`TooLargeError` rather than silently grinding.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .maps import PlanarMap, dual_map


class TooLargeError(Exception):
    """Brute-force enumeration would exceed its configured cap."""


def spin_cap() -> int:
    return int(os.environ.get("ISINGTREE_SPIN_CAP", str(2 ** 24)))


def state_cap() -> int:
    return int(os.environ.get("ISINGTREE_STATE_CAP", str(10 ** 7)))


# ---------------------------------------------------------------------------
# Ising partition functions
# ---------------------------------------------------------------------------

def ising_Z(m: PlanarMap, J: Sequence[float]) -> float:
    """Free-boundary Ising partition function by full spin enumeration."""
    edges = [(*m.endpoints(e), J[e]) for e in range(m.n_edges)]
    return _spin_sum(m.n_vertices, edges, frozenset())


def ising_Z_plus(m: PlanarMap, J: Sequence[float]) -> float:
    """Partition function with every boundary vertex's spin fixed to +1."""
    fixed = frozenset(m.vertex_of(d) for d in m.outer_orbit)
    edges = [(*m.endpoints(e), J[e]) for e in range(m.n_edges)]
    return _spin_sum(m.n_vertices, edges, fixed)


def _spin_sum(n: int, edges: list[tuple[int, int, float]],
              fixed_plus: frozenset[int]) -> float:
    free = [v for v in range(n) if v not in fixed_plus]
    if 2 ** len(free) > spin_cap():
        raise TooLargeError("2^%d spin configurations exceed the cap" % len(free))
    pos = {v: i for i, v in enumerate(free)}
    total = 0.0
    for bits in range(2 ** len(free)):
        energy = 0.0
        for u, v, j in edges:
            su = 1 if (u in fixed_plus or not (bits >> pos[u]) & 1) else -1
            sv = 1 if (v in fixed_plus or not (bits >> pos[v]) & 1) else -1
            energy += j * su * sv
        total += math.exp(energy)
    return total


@dataclass(frozen=True)
class ReducedGraph:
    """Multigraph obtained by merging all boundary vertices into one hub.

    ``names[i]`` is the provenance of vertex i; vertex 0 is always the hub.
    Parallel edges are kept (they arise whenever an interior vertex has
    several boundary neighbours).
    """
    n_vertices: int
    edges: tuple[tuple[int, int, float], ...]
    names: tuple[Hashable, ...]


def plus_boundary_reduce(m: PlanarMap, J: Sequence[float]) -> tuple[ReducedGraph, float]:
    """Reduce the +boundary model to a free model on the merged graph.

    Returns (G', c) with  Z_plus(G, J) = c * Z(G', J restricted), where G'
    identifies all boundary vertices into a hub and drops each edge joining
    two boundary vertices, and c = (1/2) * prod of exp(J_e) over the dropped
    edges.  (For an all-boundary graph G' is a single vertex with Z = 2.)
    """
    boundary = frozenset(m.vertex_of(d) for d in m.outer_orbit)
    names: list[Hashable] = [tuple(sorted(boundary))]
    index = {}
    for v in range(m.n_vertices):
        if v not in boundary:
            index[v] = len(names)
            names.append(v)
    edges = []
    c = 0.5
    for e in range(m.n_edges):
        u, v = m.endpoints(e)
        bu, bv = u in boundary, v in boundary
        if bu and bv:
            c *= math.exp(J[e])
        else:
            edges.append((0 if bu else index[u], 0 if bv else index[v], J[e]))
    return ReducedGraph(len(names), tuple(edges), tuple(names)), c


def ising_Z_reduced(rg: ReducedGraph) -> float:
    return _spin_sum(rg.n_vertices, list(rg.edges), frozenset())


# ---------------------------------------------------------------------------
# dimer partition functions
# ---------------------------------------------------------------------------

def enumerate_matchings(m: PlanarMap,
                        skip_vertex: int | None = None) -> Iterator[tuple[int, ...]]:
    """All perfect matchings (as sorted edge-id tuples), optionally of the
    graph minus one vertex.  Yields nothing when no perfect matching exists
    (in particular for odd vertex counts)."""
    n = m.n_vertices
    active = [v for v in range(n) if v != skip_vertex]
    if len(active) % 2 or m.n_isolated:
        return
    incid = {v: [] for v in active}
    for e in range(m.n_edges):
        u, v = m.endpoints(e)
        if u in incid and v in incid and u != v:
            incid[u].append((e, v))
            incid[v].append((e, u))
    matched = {v: False for v in active}
    chosen: list[int] = []
    budget = [state_cap()]

    def rec(start: int) -> Iterator[tuple[int, ...]]:
        budget[0] -= 1
        if budget[0] < 0:
            raise TooLargeError("matching enumeration exceeded the state cap")
        v = None
        for cand in active[start:]:
            if not matched[cand]:
                v = cand
                break
        if v is None:
            yield tuple(sorted(chosen))
            return
        matched[v] = True
        for e, other in incid[v]:
            if not matched[other]:
                matched[other] = True
                chosen.append(e)
                yield from rec(start + 1)
                chosen.pop()
                matched[other] = False
        matched[v] = False

    yield from rec(0)


def dimer_Z(m: PlanarMap, weights: Mapping, skip_vertex: int | None = None) -> complex:
    """Weighted dimer partition function: sum over perfect matchings of the
    product of edge weights.  `weights` is keyed by edge key when the map
    carries edge keys, else by edge id."""
    total = 0j
    for match in enumerate_matchings(m, skip_vertex):
        p = 1.0 + 0j
        for e in match:
            p *= weights[m.edge_key(e)]
        total += p
    return total


def permanent01(rows: Sequence[Sequence[int]]) -> int:
    """Permanent of a small 0/1 matrix (matching-count oracle, n <= 10)."""
    n = len(rows)
    if n > 10:
        raise TooLargeError("permanent oracle limited to n <= 10")
    used = [False] * n

    def rec(i: int) -> int:
        if i == n:
            return 1
        s = 0
        for j in range(n):
            if rows[i][j] and not used[j]:
                used[j] = True
                s += rec(i + 1)
                used[j] = False
        return s

    return rec(0)


# ---------------------------------------------------------------------------
# weighted digraphs and oriented spanning trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    tail: Hashable
    head: Hashable
    weight: complex
    kind: str = ""


@dataclass(frozen=True)
class WeightedDigraph:
    nodes: tuple[Hashable, ...]
    arcs: tuple[Arc, ...]

    def out_map(self) -> dict[Hashable, list[int]]:
        out: dict[Hashable, list[int]] = {v: [] for v in self.nodes}
        for i, a in enumerate(self.arcs):
            out[a.tail].append(i)
        return out


def enumerate_osts(g: WeightedDigraph, root: Hashable) -> Iterator[tuple[int, ...]]:
    """All spanning trees oriented towards `root`: every non-root node keeps
    exactly one out-arc and following out-arcs always reaches the root.
    Yields tuples of arc indices, one per non-root node in node order."""
    others = [v for v in g.nodes if v != root]
    out = g.out_map()
    parent_arc: dict[Hashable, int] = {}
    budget = [state_cap()]

    def acyclic_after(u: Hashable) -> bool:
        seen = {u}
        v = g.arcs[parent_arc[u]].head
        while v != root and v in parent_arc:
            if v in seen:
                return False
            seen.add(v)
            v = g.arcs[parent_arc[v]].head
        return v == root or v not in parent_arc

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        budget[0] -= 1
        if budget[0] < 0:
            raise TooLargeError("tree enumeration exceeded the state cap")
        if i == len(others):
            yield tuple(parent_arc[v] for v in others)
            return
        u = others[i]
        for ai in out[u]:
            parent_arc[u] = ai
            if acyclic_after(u):
                yield from rec(i + 1)
            del parent_arc[u]

    yield from rec(0)


def ost_Z(g: WeightedDigraph, root: Hashable) -> complex:
    """Partition function of oriented spanning trees rooted at `root`,
    by exhaustive enumeration."""
    total = 0j
    for tree in enumerate_osts(g, root):
        p = 1.0 + 0j
        for ai in tree:
            p *= g.arcs[ai].weight
        total += p
    return total


# ---------------------------------------------------------------------------
# Laplacians, determinants, the matrix-tree route
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexMatrix:
    row_labels: tuple[Hashable, ...]
    col_labels: tuple[Hashable, ...]
    rows: tuple[tuple[complex, ...], ...]

    def minor(self, drop_row: Hashable, drop_col: Hashable) -> "ComplexMatrix":
        ri = self.row_labels.index(drop_row)
        ci = self.col_labels.index(drop_col)
        return ComplexMatrix(
            self.row_labels[:ri] + self.row_labels[ri + 1:],
            self.col_labels[:ci] + self.col_labels[ci + 1:],
            tuple(tuple(x for j, x in enumerate(r) if j != ci)
                  for i, r in enumerate(self.rows) if i != ri))

    def scaled(self, c: complex) -> "ComplexMatrix":
        return ComplexMatrix(self.row_labels, self.col_labels,
                             tuple(tuple(c * x for x in r) for r in self.rows))


def laplacian(g: WeightedDigraph) -> ComplexMatrix:
    """Directed weighted Laplacian: entry (x, y) is the total arc weight
    x -> y for x != y, and -(total weight out of x) on the diagonal, so
    every row sums to zero."""
    idx = {v: i for i, v in enumerate(g.nodes)}
    n = len(g.nodes)
    rows = [[0j] * n for _ in range(n)]
    for a in g.arcs:
        i, j = idx[a.tail], idx[a.head]
        rows[i][j] += a.weight
        rows[i][i] -= a.weight
    return ComplexMatrix(tuple(g.nodes), tuple(g.nodes),
                         tuple(tuple(r) for r in rows))


def matrix_tree_Z(g: WeightedDigraph, root: Hashable) -> complex:
    """Oriented-spanning-tree partition function via the matrix-tree
    determinant: det(-Delta) after deleting the root row and column."""
    lap = laplacian(g).minor(root, root).scaled(-1.0)
    return complex_det(lap)


def complex_det(mat) -> complex:
    """Determinant by Gaussian elimination with partial pivoting (modulus).

    Accepts a ComplexMatrix or a plain sequence of row sequences.  The empty
    0x0 determinant is 1; a pivot below 1e-13 in modulus makes the result 0.
    """
    rows = mat.rows if isinstance(mat, ComplexMatrix) else mat
    a = [list(map(complex, r)) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    det = 1.0 + 0j
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(a[i][k]))
        if abs(a[piv][k]) < 1e-13:
            return 0j
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1.0 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f != 0:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def det_cofactor(rows: Sequence[Sequence[complex]]) -> complex:
    """Cofactor-expansion determinant (independent cross-check, n <= 7)."""
    n = len(rows)
    if n > 7:
        raise TooLargeError("cofactor oracle limited to n <= 7")
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(rows[0][0])
    total = 0j
    for j in range(n):
        sub = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        total += (-1) ** j * complex(rows[0][j]) * det_cofactor(sub)
    return total


# ---------------------------------------------------------------------------
# undirected spanning trees and tree duality
# ---------------------------------------------------------------------------

class _UnionFind:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[ra] = rb
        return True


def is_spanning_tree(n_vertices: int,
                     edges: Iterable[tuple[int, int]]) -> bool:
    uf = _UnionFind(n_vertices)
    count = 0
    for u, v in edges:
        if not uf.union(u, v):
            return False
        count += 1
    return count == n_vertices - 1


def enumerate_spanning_trees(m: PlanarMap) -> Iterator[tuple[int, ...]]:
    """All spanning trees of the underlying graph, as sorted edge-id tuples.

    Include/exclude backtracking with a connectivity feasibility prune, so
    the work stays proportional to the number of trees on corpus-sized
    graphs.  Subject to the state cap."""
    n, ne = m.n_vertices, m.n_edges
    ends = [m.endpoints(e) for e in range(ne)]
    budget = [state_cap()]
    chosen: list[int] = []

    def feasible(uf: _UnionFind, idx: int) -> bool:
        probe = _UnionFind(n)
        probe.p = list(uf.p)
        comps = n - len(chosen)
        for e in range(idx, ne):
            if probe.union(*ends[e]):
                comps -= 1
                if comps == 1:
                    return True
        return comps == 1

    def rec(idx: int, uf: _UnionFind) -> Iterator[tuple[int, ...]]:
        budget[0] -= 1
        if budget[0] < 0:
            raise TooLargeError("spanning-tree enumeration exceeded the state cap")
        if len(chosen) == n - 1:
            yield tuple(chosen)
            return
        if idx == ne or not feasible(uf, idx):
            return
        u, v = ends[idx]
        if uf.find(u) != uf.find(v):
            child = _UnionFind(n)
            child.p = list(uf.p)
            child.union(u, v)
            chosen.append(idx)
            yield from rec(idx + 1, child)
            chosen.pop()
        yield from rec(idx + 1, uf)

    yield from rec(0, _UnionFind(n))


def dual_tree(m: PlanarMap, tree_edges: Iterable[int]) -> tuple[int, ...]:
    """Complementary spanning tree of the dual map.

    Validates that `tree_edges` is a spanning tree of m, then returns the
    remaining edge ids, which always form a spanning tree of dual_map(m)
    (checked).  Raises ValueError on a non-tree input."""
    tset = frozenset(tree_edges)
    if not is_spanning_tree(m.n_vertices,
                            [m.endpoints(e) for e in sorted(tset)]):
        raise ValueError("input edges do not form a spanning tree")
    rest = tuple(e for e in range(m.n_edges) if e not in tset)
    dual = dual_map(m)
    if not is_spanning_tree(dual.n_vertices,
                            [dual.endpoints(e) for e in rest]):
        raise ValueError("complement fails to span the dual map")
    return rest

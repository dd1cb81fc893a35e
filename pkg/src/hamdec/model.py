"""Step-graphons and the combinatorial objects they induce.

A step-graphon is a symmetric [0,1]-valued function that is constant on the
rectangles of a grid partition of the unit square.  From it we derive the
concentration vector (block interval lengths), the skeleton graph (support
pattern, with self-loops), and the incidence matrix whose columns generate
the edge polytope.

All breakpoint and block-value arithmetic is exact (`fractions.Fraction`):
whether a vector sits on the boundary of a polytope is a measure-zero
distinction that floats would destroy.  Floats appear only in sampling
(see `sampling`).  Blocks and skeleton nodes are 0-indexed.

Edge ordering convention, used everywhere a coefficient vector refers to
edges: self-loops first in ascending node order, then distinct-node pairs
(i, j) with i < j in lexicographic order.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class DisconnectedSkeletonError(ValueError):
    """Raised when an analysis step requires a connected skeleton."""

    def __init__(self, components: Sequence[frozenset[int]]):
        self.components = tuple(components)
        parts = ", ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in self.components)
        super().__init__(f"skeleton graph is disconnected; components: {parts}")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        # exact value of the binary float, not a decimal re-reading
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class Partition:
    """Strictly increasing breakpoints 0 = s_0 < s_1 < ... < s_q = 1."""

    breakpoints: tuple[Fraction, ...]

    def __post_init__(self):
        bps = tuple(_as_fraction(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) < 2:
            raise ValueError("a partition needs at least two breakpoints")
        if bps[0] != 0 or bps[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @property
    def q(self) -> int:
        return len(self.breakpoints) - 1

    def interval(self, block: int) -> tuple[Fraction, Fraction]:
        return self.breakpoints[block], self.breakpoints[block + 1]

    def block_of(self, point) -> int:
        """Block whose half-open interval [s_i, s_{i+1}) contains the point."""
        p = _as_fraction(point)
        if not 0 <= p < 1:
            raise ValueError("point must lie in [0, 1)")
        return bisect_right(self.breakpoints, p) - 1


@dataclass(frozen=True)
class StepGraphon:
    """A partition plus the symmetric q x q matrix of block values."""

    partition: Partition
    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        q = self.partition.q
        vals = tuple(tuple(_as_fraction(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != q or any(len(row) != q for row in vals):
            raise ValueError(f"values must be a {q}x{q} matrix")
        for i in range(q):
            for j in range(q):
                if not 0 <= vals[i][j] <= 1:
                    raise ValueError(f"values[{i}][{j}] outside [0, 1]")
                if vals[i][j] != vals[j][i]:
                    raise ValueError("values matrix must be symmetric")

    @property
    def q(self) -> int:
        return self.partition.q

    def value_at(self, u, v) -> Fraction:
        """Function value at a point of [0,1) x [0,1)."""
        return self.values[self.partition.block_of(u)][self.partition.block_of(v)]


def step_graphon(breakpoints: Iterable, values: Iterable[Iterable]) -> StepGraphon:
    """Convenience constructor accepting ints, strings, and Fractions."""
    return StepGraphon(Partition(tuple(breakpoints)), tuple(tuple(row) for row in values))


@dataclass(frozen=True)
class SkeletonGraph:
    """Support graph of a step-graphon: loops F0 plus distinct-pair edges F1."""

    node_count: int
    loops: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "loops", frozenset(self.loops))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        if self.node_count < 1:
            raise ValueError("skeleton needs at least one node")
        for i in self.loops:
            if not 0 <= i < self.node_count:
                raise ValueError(f"loop node {i} out of range")
        for i, j in self.edges:
            if not (0 <= i < j < self.node_count):
                raise ValueError(f"edge ({i},{j}) must satisfy 0 <= i < j < q")

    @property
    def f2_edges(self) -> frozenset[tuple[int, int]]:
        """Edges not joining two looped nodes (the extremal pair edges)."""
        return frozenset(
            (i, j) for i, j in self.edges if not (i in self.loops and j in self.loops)
        )

    @property
    def edge_count(self) -> int:
        return len(self.loops) + len(self.edges)

    def neighbors(self, i: int) -> frozenset[int]:
        out = set()
        for a, b in self.edges:
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return frozenset(out)


@dataclass(frozen=True)
class IncidenceMatrix:
    """q x |F| matrix whose columns are probability vectors, one per edge.

    A loop column is the indicator of its node; a distinct-pair column puts
    1/2 on each endpoint.  `edge_order` fixes the column index set: entry
    (i, i) denotes the loop at i, entry (i, j) with i < j the pair edge.
    """

    entries: tuple[tuple[Fraction, ...], ...]
    edge_order: tuple[tuple[int, int], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.edge_order)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)


def edge_order(s: SkeletonGraph) -> tuple[tuple[int, int], ...]:
    """Canonical edge index set: loops first, then pairs, lexicographic."""
    loops = tuple((i, i) for i in sorted(s.loops))
    pairs = tuple(sorted(s.edges))
    return loops + pairs


def concentration(partition: Partition) -> tuple[Fraction, ...]:
    """Interval lengths s_i - s_{i-1}; the expected block proportions."""
    bps = partition.breakpoints
    return tuple(bps[i + 1] - bps[i] for i in range(partition.q))


def skeleton(graphon: StepGraphon) -> SkeletonGraph:
    """Support graph: loop at i iff the diagonal block is nonzero, edge
    (i, j) iff the off-diagonal block is."""
    q = graphon.q
    vals = graphon.values
    loops = frozenset(i for i in range(q) if vals[i][i] > 0)
    edges = frozenset((i, j) for i in range(q) for j in range(i + 1, q) if vals[i][j] > 0)
    return SkeletonGraph(q, loops, edges)


def saturate(graphon: StepGraphon) -> StepGraphon:
    """Binary step-graphon with the same support."""
    vals = tuple(
        tuple(Fraction(1) if v > 0 else Fraction(0) for v in row) for row in graphon.values
    )
    return StepGraphon(graphon.partition, vals)


def incidence(s: SkeletonGraph) -> IncidenceMatrix:
    order = edge_order(s)
    half = Fraction(1, 2)
    rows = []
    for i in range(s.node_count):
        row = []
        for a, b in order:
            if a == b:
                row.append(Fraction(1) if a == i else Fraction(0))
            else:
                row.append(half if i in (a, b) else Fraction(0))
        rows.append(tuple(row))
    return IncidenceMatrix(tuple(rows), order)


def loopless(s: SkeletonGraph) -> SkeletonGraph:
    """The subgraph keeping only distinct-pair edges."""
    return SkeletonGraph(s.node_count, frozenset(), s.edges)


def _adjacency(s: SkeletonGraph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(s.node_count)]
    for i, j in sorted(s.edges):
        adj[i].append(j)
        adj[j].append(i)
    return adj


def has_odd_cycle(s: SkeletonGraph) -> bool:
    """True iff the graph has a self-loop or a non-bipartite pair-edge part.

    Self-loops count as odd cycles.  The loopless part is checked by BFS
    2-coloring per component.
    """
    if s.loops:
        return True
    adj = _adjacency(s)
    color = [-1] * s.node_count
    for start in range(s.node_count):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if color[v] == -1:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return True
    return False


def connected_components(s: SkeletonGraph) -> list[frozenset[int]]:
    """Maximal connected node sets under pair edges (loops do not connect),
    ordered by smallest member."""
    adj = _adjacency(s)
    seen = [False] * s.node_count
    comps = []
    for start in range(s.node_count):
        if seen[start]:
            continue
        seen[start] = True
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.add(v)
                    queue.append(v)
        comps.append(frozenset(comp))
    return comps


def is_connected(s: SkeletonGraph) -> bool:
    return len(connected_components(s)) == 1

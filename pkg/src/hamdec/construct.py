"""Constructive pipeline: from an interior vector to a decomposition.

Given a connected skeleton and an interior point x with n x integral, the
pipeline builds a balanced integer tally matrix (the block-level plan) and
then an explicit Hamiltonian decomposition of the complete multipartite
graph over the skeleton:

  1. split x into its loop-generator and pair-generator mass,
  2. round the loop part to the nearest even-integer vector over n,
  3. re-solve the pair part against the loopless incidence columns,
  4. round the resulting fractional pair matrix to integers while
     preserving row and column sums exactly (flow-based rounding),
  5. pair off 2-cycles, peel the residual into simple block cycles, and
     instantiate everything with concrete nodes.

All steps are exact; failures at small n (where rounding can eat a block's
mass or zero out a support entry) surface as `ConstructionError` with the
violated properties named, never as silently wrong output.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    DisconnectedSkeletonError,
    SkeletonGraph,
    connected_components,
    edge_order,
    incidence,
    is_connected,
    loopless,
)
from .polytope import Membership, MembershipCertificate, positive_certificate
from .sampling import BalancedMatrix

ZERO = Fraction(0)
HALF = Fraction(1, 2)


class ConstructionError(Exception):
    """A pipeline stage could not meet its contract; lists what failed."""

    def __init__(self, stage: str, failures):
        self.stage = stage
        self.failures = tuple(failures)
        super().__init__(f"{stage}: " + "; ".join(self.failures))


@dataclass(frozen=True)
class MassSplit:
    """x decomposed as loop_part + edge_part along the certificate."""

    loop_part: tuple[Fraction, ...]
    edge_part: tuple[Fraction, ...]


@dataclass(frozen=True)
class BlockCycle:
    """A cyclic sequence of distinct block indices (a simple cycle plan)."""

    nodes: tuple[int, ...]

    def __post_init__(self):
        nodes = tuple(int(v) for v in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 2:
            raise ValueError("a block cycle visits at least two blocks")
        if len(set(nodes)) != len(nodes):
            raise ValueError("block cycle must not repeat blocks")

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class HamDecomposition:
    """A permutation of the nodes split into directed cycles of length >= 2."""

    successor: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.successor)
        seen = [False] * n
        for cycle in self.cycles:
            if len(cycle) < 2:
                raise ValueError("cycles must have length at least 2")
            for t, v in enumerate(cycle):
                if not 0 <= v < n or seen[v]:
                    raise ValueError("cycles must partition the node set")
                seen[v] = True
                if self.successor[v] != cycle[(t + 1) % len(cycle)]:
                    raise ValueError("successor mapping inconsistent with cycles")
        if not all(seen):
            raise ValueError("cycles must cover every node")

    @property
    def n(self) -> int:
        return len(self.successor)

    @classmethod
    def from_cycles(cls, cycles, n: int) -> "HamDecomposition":
        succ = [-1] * n
        cyc = tuple(tuple(int(v) for v in c) for c in cycles)
        for cycle in cyc:
            for t, v in enumerate(cycle):
                succ[v] = cycle[(t + 1) % len(cycle)]
        return cls(tuple(succ), cyc)

    def long_cycles(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c for c in self.cycles if len(c) >= 3)


# ---------------------------------------------------------------------------
# mass splitting and rounding
# ---------------------------------------------------------------------------

def split_mass(x, cert: MembershipCertificate, s: SkeletonGraph) -> MassSplit:
    """Split x into the mass carried by loop columns and the rest.

    The loop part is the certificate-weighted sum of loop columns; the edge
    part is the remainder and is supported on every node touched by a pair
    edge.
    """
    if cert.status is not Membership.INTERIOR:
        raise ValueError("mass splitting needs an interior certificate")
    xs = tuple(Fraction(v) for v in x)
    loop_part = [ZERO] * s.node_count
    for idx, (a, b) in enumerate(edge_order(s)):
        if a == b:
            loop_part[a] += cert.coefficients[idx]
    edge_part = tuple(xi - li for xi, li in zip(xs, loop_part))
    return MassSplit(tuple(loop_part), edge_part)


def round_even(vec, n: int) -> tuple[Fraction, ...]:
    """The vector with even entries (over denominator n) closest to n*vec,
    halves rounding down: entry i becomes (2/n) * [n*vec_i / 2]."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for v in vec:
        k = math.ceil(Fraction(v) * n / 2 - HALF)
        out.append(Fraction(2 * k, n))
    return tuple(out)


# ---------------------------------------------------------------------------
# flow-based matrix rounding
# ---------------------------------------------------------------------------

class _MaxFlow:
    def __init__(self, n: int):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> int:
        idx = len(self.to)
        self.to.append(v)
        self.cap.append(c)
        self.adj[u].append(idx)
        self.to.append(u)
        self.cap.append(0)
        self.adj[v].append(idx + 1)
        return idx

    def run(self, src: int, dst: int) -> int:
        flow = 0
        n = len(self.adj)
        while True:
            parent = [-1] * n
            parent[src] = -2
            queue = deque([src])
            while queue and parent[dst] == -1:
                u = queue.popleft()
                for ei in self.adj[u]:
                    v = self.to[ei]
                    if parent[v] == -1 and self.cap[ei] > 0:
                        parent[v] = ei
                        queue.append(v)
            if parent[dst] == -1:
                return flow
            aug = None
            v = dst
            while v != src:
                ei = parent[v]
                aug = self.cap[ei] if aug is None else min(aug, self.cap[ei])
                v = self.to[ei ^ 1]
            v = dst
            while v != src:
                ei = parent[v]
                self.cap[ei] -= aug
                self.cap[ei ^ 1] += aug
                v = self.to[ei ^ 1]
            flow += aug


def _check_support(matrix, s: SkeletonGraph, what: str):
    q = s.node_count
    for i in range(q):
        for j in range(q):
            if matrix[i][j] == 0:
                continue
            if i == j and i not in s.loops:
                raise ValueError(f"{what}[{i}][{i}] nonzero but block {i} has no loop")
            if i != j and (min(i, j), max(i, j)) not in s.edges:
                raise ValueError(f"{what}[{i}][{j}] nonzero but ({i},{j}) is not an edge")


def matrix_round(matrix, support: SkeletonGraph) -> tuple[tuple[int, ...], ...]:
    """Round each entry to its floor or ceiling, preserving all row and
    column sums exactly and never creating new support.

    Requires integer row and column sums.  Floors everything, then routes
    the per-row deficits to the per-column deficits as an integral flow
    through the fractional cells (each of capacity one); the fractional
    parts themselves are a feasible flow, so a saturating integral flow
    exists.
    """
    rows = [[Fraction(v) for v in row] for row in matrix]
    q = len(rows)
    if any(len(r) != q for r in rows):
        raise ValueError("matrix must be square")
    if q != support.node_count:
        raise ValueError("matrix size must match the support graph")
    if any(v < 0 for row in rows for v in row):
        raise ValueError("matrix entries must be nonnegative")
    _check_support(rows, support, "matrix")
    row_sums = [sum(r) for r in rows]
    col_sums = [sum(rows[i][j] for i in range(q)) for j in range(q)]
    for i, v in enumerate(row_sums):
        if v.denominator != 1:
            raise ValueError(f"row {i} sum {v} is not an integer")
    for j, v in enumerate(col_sums):
        if v.denominator != 1:
            raise ValueError(f"column {j} sum {v} is not an integer")

    floors = [[math.floor(v) for v in row] for row in rows]
    rdef = [int(row_sums[i]) - sum(floors[i]) for i in range(q)]
    cdef = [int(col_sums[j]) - sum(floors[i][j] for i in range(q)) for j in range(q)]
    need = sum(rdef)
    if need == 0:
        return tuple(tuple(row) for row in floors)

    src, dst = 2 * q, 2 * q + 1
    net = _MaxFlow(2 * q + 2)
    for i in range(q):
        if rdef[i]:
            net.add(src, i, rdef[i])
    cell_edges = {}
    for i in range(q):
        for j in range(q):
            if rows[i][j].denominator != 1:
                cell_edges[(i, j)] = net.add(i, q + j, 1)
    for j in range(q):
        if cdef[j]:
            net.add(q + j, dst, cdef[j])
    pushed = net.run(src, dst)
    if pushed != need:
        raise RuntimeError("rounding flow did not saturate; sums were inconsistent")
    for (i, j), ei in cell_edges.items():
        if net.cap[ei] == 0:
            floors[i][j] += 1
    return tuple(tuple(row) for row in floors)


# ---------------------------------------------------------------------------
# the balanced tally matrix for an interior point
# ---------------------------------------------------------------------------

def _property_failures(counts, n, x, loop_part, s: SkeletonGraph) -> list[str]:
    q = s.node_count
    fails = []
    for i in range(q):
        if sum(counts[i]) != n * x[i]:
            fails.append(f"row {i} sums to {sum(counts[i])}, expected {n * x[i]}")
    for i in range(q):
        if counts[i][i] % 2:
            fails.append(f"diagonal entry {i} is odd")
        if abs(counts[i][i] - n * loop_part[i]) > 1:
            fails.append(f"diagonal entry {i} strays more than 1 from the loop mass")
    for i in range(q):
        for j in range(i + 1, q):
            if abs(counts[i][j] - counts[j][i]) > 1:
                fails.append(f"asymmetry above 1 at ({i},{j})")
    # support compared undirected: rounding may zero one direction of an
    # edge (the tolerated asymmetry), never both
    for i in range(q):
        if (counts[i][i] > 0) != (i in s.loops):
            fails.append(f"diagonal support mismatch at {i}")
    for i in range(q):
        for j in range(i + 1, q):
            total = counts[i][j] + counts[j][i]
            if (total > 0) != ((i, j) in s.edges):
                fails.append(f"pair support mismatch at ({i},{j})")
    return fails


def build_balanced_matrix(x, n: int, s: SkeletonGraph) -> BalancedMatrix:
    """Integer tally matrix over n for an interior x with n x integral.

    The result A satisfies: A 1 = x; n A integer with even diagonal; the
    diagonal within 1/n of the loop mass; off-diagonal asymmetry at most
    1/n; support exactly the skeleton.  Violations (possible when n is too
    small for the rounding slack) raise `ConstructionError` naming every
    failed property.
    """
    xs = tuple(Fraction(v) for v in x)
    q = s.node_count
    if len(xs) != q:
        raise ValueError("x must have one entry per block")
    if n < 1:
        raise ValueError("n must be positive")
    bad = [i for i, v in enumerate(xs) if (v * n).denominator != 1]
    if bad:
        raise ConstructionError("preconditions", [f"n*x not integral at {bad}"])
    if not is_connected(s):
        raise DisconnectedSkeletonError(connected_components(s))

    cert = positive_certificate(incidence(s), xs)
    if cert.status is not Membership.INTERIOR:
        raise ConstructionError("membership", [f"x is {cert.status.value}, not interior"])

    split = split_mass(xs, cert, s)
    tau0p = round_even(split.loop_part, n)
    tau1p = tuple(xi - t for xi, t in zip(xs, tau0p))
    if any(t < 0 for t in tau1p):
        raise ConstructionError(
            "even-rounding", ["even rounding exceeded x on some block; n too small"]
        )
    n1 = n - int(n * sum(tau0p))

    counts = [[0] * q for _ in range(q)]
    for i in range(q):
        counts[i][i] = int(n * tau0p[i])

    if n1 > 0:
        target = tuple(t * n / n1 for t in tau1p)
        s1 = loopless(s)
        z1 = incidence(s1)
        if z1.shape[1] == 0:
            raise ConstructionError(
                "loopless-membership", ["pair mass left but the skeleton has no pair edges"]
            )
        cert1 = positive_certificate(z1, target)
        if cert1.status is Membership.EXTERIOR:
            raise ConstructionError(
                "loopless-membership",
                ["normalized pair mass fell outside the loopless polytope; n too small"],
            )
        scaled = [[ZERO] * q for _ in range(q)]
        for idx, (i, j) in enumerate(z1.edge_order):
            v = n1 * cert1.coefficients[idx] / 2
            scaled[i][j] = v
            scaled[j][i] = v
        if all(v.denominator == 1 for row in scaled for v in row):
            rounded = [[int(v) for v in row] for row in scaled]
        else:
            rounded = matrix_round(scaled, s1)
        for i in range(q):
            for j in range(q):
                if i != j:
                    counts[i][j] = rounded[i][j]

    fails = _property_failures(counts, n, xs, split.loop_part, s)
    if fails:
        raise ConstructionError("postconditions", fails)
    return BalancedMatrix(n, tuple(tuple(row) for row in counts))


# ---------------------------------------------------------------------------
# cycle peeling and decomposition assembly
# ---------------------------------------------------------------------------

def peel_cycles(residual: BalancedMatrix, s: SkeletonGraph) -> list[tuple[BlockCycle, int]]:
    """Decompose a balanced zero-diagonal tally into simple block cycles.

    Walk from the lowest-index node with positive out-degree, always taking
    the lowest-index positive out-edge; the first repeated node closes a
    cycle, which is subtracted at its bottleneck multiplicity.  Balance
    guarantees the walk never strands and the process ends at zero.
    """
    q = residual.q
    counts = [list(row) for row in residual.counts]
    for i in range(q):
        if counts[i][i]:
            raise ValueError("residual tally must have a zero diagonal")
    _check_support(counts, s, "residual")
    out: list[tuple[BlockCycle, int]] = []
    row_left = [sum(row) for row in counts]
    total = sum(row_left)
    while total > 0:
        start = next(i for i in range(q) if row_left[i] > 0)
        path = [start]
        pos = {start: 0}
        while True:
            cur = path[-1]
            nxt = next(j for j in range(q) if counts[cur][j] > 0)
            if nxt in pos:
                cycle = path[pos[nxt]:]
                k = len(cycle)
                mult = min(counts[cycle[t]][cycle[(t + 1) % k]] for t in range(k))
                for t in range(k):
                    a, b = cycle[t], cycle[(t + 1) % k]
                    counts[a][b] -= mult
                    row_left[a] -= mult
                total -= mult * k
                out.append((BlockCycle(tuple(cycle)), mult))
                break
            pos[nxt] = len(path)
            path.append(nxt)
    return out


def canonical_blocks(block_sizes) -> list[int]:
    """Block label per node when blocks occupy consecutive index ranges."""
    blocks = []
    for b, size in enumerate(block_sizes):
        blocks.extend([b] * int(size))
    return blocks


def build_decomposition(a: BalancedMatrix, block_sizes, s: SkeletonGraph) -> HamDecomposition:
    """Hamiltonian decomposition of the complete multipartite graph over the
    skeleton, with block-pair tallies exactly equal to the input.

    Nodes are numbered consecutively by block (see `canonical_blocks`) and
    consumed in ascending order.  First the pairwise minima become 2-cycles
    (within-block pairs on looped blocks, cross pairs per edge); the
    residual is peeled into simple block cycles and instantiated.
    """
    q = s.node_count
    n = a.scale
    sizes = tuple(int(v) for v in block_sizes)
    if len(sizes) != q:
        raise ValueError("block_sizes must have one entry per block")
    if sum(sizes) != n:
        raise ValueError("block sizes must sum to the tally scale")
    if a.row_sums() != sizes:
        raise ValueError("tally row sums must equal the block sizes")
    counts = a.counts
    _check_support(counts, s, "tally")

    offsets = [0] * q
    for b in range(1, q):
        offsets[b] = offsets[b - 1] + sizes[b - 1]
    cursor = list(offsets)

    def take(block: int) -> int:
        v = cursor[block]
        if v >= offsets[block] + sizes[block]:
            raise RuntimeError(f"block {block} exhausted while assembling")
        cursor[block] += 1
        return v

    cycles: list[tuple[int, ...]] = []
    for i in sorted(s.loops):
        mii = counts[i][i]
        if mii % 2:
            raise ValueError(f"diagonal tally at {i} must be even")
        for _ in range(mii // 2):
            cycles.append((take(i), take(i)))
    for i, j in sorted(s.edges):
        mij = min(counts[i][j], counts[j][i])
        for _ in range(mij):
            cycles.append((take(i), take(j)))

    resid = [
        [
            0 if i == j else counts[i][j] - min(counts[i][j], counts[j][i])
            for j in range(q)
        ]
        for i in range(q)
    ]
    left = sum(sum(row) for row in resid)
    for pattern, mult in peel_cycles(BalancedMatrix(left, resid), s):
        for _ in range(mult):
            cycles.append(tuple(take(b) for b in pattern.nodes))

    if cursor != [offsets[b] + sizes[b] for b in range(q)]:
        raise RuntimeError("node accounting failed while assembling")
    return HamDecomposition.from_cycles(cycles, n)

"""Shared independent oracles and random instance generators for the tests.

Everything here deliberately avoids the library's own algorithms: ranks by
Gaussian elimination over Fractions, odd cycles by exhaustive enumeration,
matchings and decompositions by brute force.  These are the reference
implementations the fast code is checked against.
"""

from fractions import Fraction
from itertools import permutations

import numpy as np

from hamdec.model import Partition, SkeletonGraph, StepGraphon, incidence
from hamdec.polytope import Membership, positive_certificate


def rational_rank(rows) -> int:
    """Rank over the rationals by exact Gaussian elimination."""
    m = [list(map(Fraction, row)) for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def exhaustive_has_odd_cycle(s: SkeletonGraph) -> bool:
    """Odd cycle by direct enumeration (loops count; cycles up to q nodes)."""
    if s.loops:
        return True
    q = s.node_count
    edges = s.edges

    def connected_pair(a, b):
        return (min(a, b), max(a, b)) in edges

    for k in range(3, q + 1, 2):
        for perm in permutations(range(q), k):
            if perm[0] != min(perm):
                continue  # canonical rotation, cuts duplicates
            if all(connected_pair(perm[t], perm[(t + 1) % k]) for t in range(k)):
                return True
    return False


def brute_max_matching(nl: int, nr: int, edges) -> int:
    """Maximum bipartite matching size by exhaustive recursion (<= 8 nodes)."""
    adj = [[] for _ in range(nl)]
    for u, v in edges:
        adj[u].append(v)

    def rec(u, used):
        if u == nl:
            return 0
        best = rec(u + 1, used)
        for v in adj[u]:
            if v not in used:
                used.add(v)
                best = max(best, 1 + rec(u + 1, used))
                used.discard(v)
        return best

    return rec(0, set())


def brute_decomposition_exists(n: int, arcs) -> bool:
    """Hamiltonian decomposition existence by trying all permutations."""
    arc_set = set(arcs)
    return any(
        all((v, perm[v]) in arc_set for v in range(n)) for perm in permutations(range(n))
    )


def random_connected_skeleton(rng, q_max=8, q_min=2, want_loopless_odd=False) -> SkeletonGraph:
    """Random connected skeleton: spanning tree, extra edges, random loops.

    With want_loopless_odd, an extra edge is added inside one BFS color
    class so the pair-edge part has an odd cycle (needs q >= 3).
    """
    q = int(rng.integers(max(q_min, 3 if want_loopless_odd else q_min), q_max + 1))
    edges = set()
    for v in range(1, q):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    for _ in range(int(rng.integers(0, q))):
        a, b = rng.choice(q, size=2, replace=False)
        edges.add((min(int(a), int(b)), max(int(a), int(b))))
    loops = {int(v) for v in range(q) if rng.random() < 0.4}
    if want_loopless_odd:
        color = _two_color(q, edges)
        if color is not None:  # bipartite: close an odd cycle inside a class
            cls = [v for v in range(q) if color[v] == 0]
            if len(cls) < 2:
                cls = [v for v in range(q) if color[v] == 1]
            a, b = cls[0], cls[1]
            edges.add((min(a, b), max(a, b)))
    return SkeletonGraph(q, frozenset(loops), frozenset(edges))


def _two_color(q, edges):
    adj = [[] for _ in range(q)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    color = [-1] * q
    for s in range(q):
        if color[s] != -1:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if color[v] == -1:
                    color[v] = color[u] ^ 1
                    stack.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def random_interior_instance(rng, s: SkeletonGraph, n: int, tries: int = 50):
    """An interior point with denominator n, or None.

    Draws positive weights on the generators, pushes through the incidence
    matrix, and rounds to counts over n (largest remainders take the
    leftover).  Rounding can spoil interiority for small n, hence retries.
    """
    z = incidence(s)
    q, nf = z.shape
    for _ in range(tries):
        weights = [Fraction(int(rng.integers(5, 25))) for _ in range(nf)]
        total = sum(weights)
        coeffs = [wgt / total for wgt in weights]
        x = [sum(z.entries[i][j] * coeffs[j] for j in range(nf)) for i in range(q)]
        scaled = [v * n for v in x]
        counts = [int(v) for v in scaled]
        fracs = sorted(
            range(q), key=lambda i: (scaled[i] - counts[i], i), reverse=True
        )
        for i in fracs[: n - sum(counts)]:
            counts[i] += 1
        xr = tuple(Fraction(c, n) for c in counts)
        cert = positive_certificate(z, xr)
        if cert.status is Membership.INTERIOR:
            return xr
    return None


def random_graphon(rng, q_max=5) -> StepGraphon:
    """Random step-graphon: random breakpoints, random symmetric support."""
    q = int(rng.integers(1, q_max + 1))
    cuts = sorted(int(v) for v in rng.choice(np.arange(1, 40), size=q - 1, replace=False))
    bps = [Fraction(0)] + [Fraction(c, 40) for c in cuts] + [Fraction(1)]
    vals = [[Fraction(0)] * q for _ in range(q)]
    for i in range(q):
        for j in range(i, q):
            if rng.random() < 0.6:
                v = Fraction(int(rng.integers(1, 9)), 9)
                vals[i][j] = vals[j][i] = v
    return StepGraphon(Partition(tuple(bps)), tuple(tuple(r) for r in vals))

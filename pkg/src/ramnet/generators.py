"""Topology generators: ring lattices, rewired and randomized variants, and LPS graphs.

Families
--------
rrl   regular ring lattice: vertex i is joined to i +/- j (mod n), j = 1..k/2
ws1   Watts-Strogatz style rewiring of the ring lattice (edge count preserved)
er    Erdos-Renyi G(n, m) with exactly m = n*k/2 distinct edges
lps1  Lubotzky-Phillips-Sarnak Cayley graph on PSL(2, Z/qZ), (p+1)-regular
lps2  LPS linear-fractional-action graph on the projective line P^1(F_q)
r3l   random degree-preserving rewiring of the ring lattice (double edge swaps)

All randomness comes from numpy's PCG64 generator seeded explicitly, with
fixed draw orders, so every family is reproducible from (parameters, seed).
The LPS families are deterministic.  Loops never survive construction;
parallel edges are kept (with multiplicity) for the LPS families only,
where the underlying group action can legitimately produce them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .graph import Graph
from .numtheory import (
    PslElement,
    is_prime,
    jacobi_solutions,
    legendre_symbol,
    lft_apply,
    mat_mul_mod,
    psl_canonicalize,
    psl_group_elements,
    sqrt_minus_one,
)

__all__ = [
    "GeneratorParams",
    "build_graph",
    "gen_rrl",
    "gen_ws1",
    "gen_er",
    "gen_r3l",
    "lps_parameter_check",
    "lps_generator_set",
    "LpsBuild",
    "lps1_build",
    "lps2_build",
    "gen_lps1",
    "gen_lps2",
    "R3L_DEFAULT_SWAP_FACTOR",
]

R3L_DEFAULT_SWAP_FACTOR = 10

_FAMILIES = ("rrl", "ws1", "er", "lps1", "lps2", "r3l")


@dataclass(frozen=True)
class GeneratorParams:
    """Declarative description of one graph build, used by the CLI and experiments."""

    family: str
    n: int | None = None
    k: int | None = None
    p_w: float | None = None
    p: int | None = None
    q: int | None = None
    swap_count: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {_FAMILIES}")

    def with_seed(self, seed: int | None) -> "GeneratorParams":
        return replace(self, seed=seed)


def build_graph(params: GeneratorParams) -> Graph:
    """Dispatch a :class:`GeneratorParams` to the matching generator."""
    f = params.family
    if f in ("lps1", "lps2"):
        if params.p is None or params.q is None:
            raise ValueError(f"family {f!r} requires primes p and q")
        build = lps1_build if f == "lps1" else lps2_build
        return build(params.p, params.q).graph
    if params.n is None or params.k is None:
        raise ValueError(f"family {f!r} requires n and k")
    if f == "rrl":
        return gen_rrl(params.n, params.k)
    if f == "ws1":
        if params.p_w is None:
            raise ValueError("family 'ws1' requires the rewiring probability p_w")
        return gen_ws1(params.n, params.k, params.p_w, params.seed)
    if f == "er":
        return gen_er(params.n, params.k, params.seed)
    return gen_r3l(params.n, params.k, params.swap_count, params.seed)


# -- ring lattice and its randomizations -------------------------------------


def _check_ring_params(n: int, k: int) -> None:
    if k < 2 or k % 2 != 0:
        raise ValueError(f"ring lattice degree must be even and >= 2, got k={k}")
    if n <= k:
        raise ValueError(f"ring lattice needs n > k, got n={n}, k={k}")


def gen_rrl(n: int, k: int) -> Graph:
    """Regular ring lattice: i ~ i +/- j (mod n) for j = 1..k/2."""
    _check_ring_params(n, k)
    edges = []
    for j in range(1, k // 2 + 1):
        for u in range(n):
            edges.append((u, (u + j) % n))
    return Graph.from_edges(n, edges)


def gen_ws1(n: int, k: int, p_w: float, seed: int | None = None) -> Graph:
    """Rewired ring lattice in the style of Watts and Strogatz.

    Lattice rings are swept in ascending order j = 1..k/2, nodes in index
    order within each ring.  The forward edge (u, u+j) is rewired with
    probability p_w: its far endpoint is replaced by a uniformly drawn
    node, redrawing on any draw that would create a loop or a duplicate
    edge (so the endpoint always actually changes).  A node already
    adjacent to everything keeps its edge.  Edge count stays n*k/2 and
    every node keeps at least its k/2 forward stubs.
    """
    _check_ring_params(n, k)
    if not 0.0 <= p_w <= 1.0:
        raise ValueError(f"rewiring probability must be in [0, 1], got {p_w}")
    rng = np.random.default_rng(seed)
    edge_set: set[tuple[int, int]] = set()
    nbrs: list[set[int]] = [set() for _ in range(n)]

    def add(u: int, v: int) -> None:
        edge_set.add((u, v) if u < v else (v, u))
        nbrs[u].add(v)
        nbrs[v].add(u)

    def remove(u: int, v: int) -> None:
        edge_set.discard((u, v) if u < v else (v, u))
        nbrs[u].discard(v)
        nbrs[v].discard(u)

    for j in range(1, k // 2 + 1):
        for u in range(n):
            add(u, (u + j) % n)

    for j in range(1, k // 2 + 1):
        for u in range(n):
            if rng.random() >= p_w:
                continue
            if len(nbrs[u]) >= n - 1:
                continue  # saturated node: no legal target exists
            v_old = (u + j) % n
            while True:
                w = int(rng.integers(n))
                if w != u and w not in nbrs[u]:
                    break
            remove(u, v_old)
            add(u, w)

    return Graph.from_edges(n, edge_set)


def gen_er(n: int, k: int, seed: int | None = None) -> Graph:
    """Erdos-Renyi G(n, m) with exactly m = n*k/2 distinct edges.

    Edges are drawn uniformly without replacement by rejection: each
    attempt draws an ordered pair of vertices and is discarded on a loop or
    an already-chosen pair.  Connectivity is *not* guaranteed.
    """
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got n={n}")
    if k < 1 or k >= n:
        raise ValueError(f"average degree must satisfy 1 <= k < n, got k={k}")
    if (n * k) % 2 != 0:
        raise ValueError(f"n*k must be even to place n*k/2 edges, got n={n}, k={k}")
    m = n * k // 2
    if m > n * (n - 1) // 2:
        raise ValueError(f"cannot place {m} distinct edges on {n} vertices")
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < m:
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v:
            continue
        e = (u, v) if u < v else (v, u)
        if e not in chosen:
            chosen.add(e)
    return Graph.from_edges(n, chosen)


def gen_r3l(
    n: int,
    k: int,
    swap_count: int | None = None,
    seed: int | None = None,
    reconnect_batches: int = 10,
) -> Graph:
    """Random regular graph via double edge swaps on the ring lattice.

    Starting from the k-regular ring lattice, performs ``swap_count``
    successful swaps (default 10 times the edge count): draw a vertex v1, a
    uniform neighbor v2, a uniform vertex v3 neither adjacent nor equal to
    v1, and a uniform neighbor v4 of v3; replace edges (v1, v2), (v3, v4)
    by (v1, v3), (v2, v4).  Proposals that would create a loop or duplicate
    edge are rejected and do not count.  Degrees are preserved exactly.

    If the result is disconnected, up to ``reconnect_batches`` further
    batches of ``swap_count`` swaps are run; if it still is, this raises.
    """
    _check_ring_params(n, k)
    if k >= n - 1:
        raise ValueError(f"no vertex pair is non-adjacent when k >= n - 1 (n={n}, k={k})")
    m = n * k // 2
    if swap_count is None:
        swap_count = R3L_DEFAULT_SWAP_FACTOR * m
    if swap_count < 0:
        raise ValueError(f"swap count must be non-negative, got {swap_count}")
    rng = np.random.default_rng(seed)

    edge_set: set[tuple[int, int]] = set()
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            edge_set.add((u, v) if u < v else (v, u))
            nbrs[u].add(v)
            nbrs[v].add(u)

    def do_swaps(count: int) -> None:
        done = 0
        attempts = 0
        budget = 100 * count + 1000
        while done < count:
            attempts += 1
            if attempts > budget:
                raise RuntimeError(
                    f"edge-swap proposals kept failing ({attempts} attempts for {count} swaps); "
                    f"the graph is too small or dense to rewire"
                )
            v1 = int(rng.integers(n))
            v2 = sorted(nbrs[v1])[int(rng.integers(len(nbrs[v1])))]
            while True:
                v3 = int(rng.integers(n))
                if v3 != v1 and v3 not in nbrs[v1]:
                    break
            v4 = sorted(nbrs[v3])[int(rng.integers(len(nbrs[v3])))]
            if v4 == v2 or v4 in nbrs[v2]:
                continue  # would create a loop or duplicate (v2, v4)
            for a, b in ((v1, v2), (v3, v4)):
                edge_set.discard((a, b) if a < b else (b, a))
                nbrs[a].discard(b)
                nbrs[b].discard(a)
            for a, b in ((v1, v3), (v2, v4)):
                edge_set.add((a, b) if a < b else (b, a))
                nbrs[a].add(b)
                nbrs[b].add(a)
            done += 1

    do_swaps(swap_count)
    g = Graph.from_edges(n, edge_set)
    batches_left = reconnect_batches
    while not g.is_connected():
        if batches_left == 0:
            raise RuntimeError(
                f"graph still disconnected after {reconnect_batches} extra swap batches"
            )
        batches_left -= 1
        do_swaps(max(swap_count, 1))
        g = Graph.from_edges(n, edge_set)
    return g


# -- LPS constructions --------------------------------------------------------


def lps_parameter_check(p: int, q: int) -> None:
    """Validate an LPS prime pair: p, q distinct primes = 1 (mod 4) with (p/q) = 1."""
    for name, value in (("p", p), ("q", q)):
        if not is_prime(value):
            raise ValueError(f"LPS parameter {name}={value} is not prime")
        if value % 4 != 1:
            raise ValueError(f"LPS parameter {name}={value} is not congruent to 1 mod 4")
    if p == q:
        raise ValueError(f"LPS parameters must be distinct primes, got p = q = {p}")
    if legendre_symbol(p, q) != 1:
        raise ValueError(
            f"p={p} is not a quadratic residue mod q={q} (Legendre symbol -1); "
            f"this pair would give the bipartite PGL variant, which is unsupported"
        )


def lps_generator_set(p: int, q: int) -> list[PslElement]:
    """The p + 1 canonical PSL(2, Z/qZ) generators of the LPS graphs.

    Each four-square solution (a0, a1, a2, a3) of p with a0 odd positive
    and the rest even maps, with i = sqrt(-1) mod q, to the matrix

        [[a0 + i*a1,  a2 + i*a3],
         [-a2 + i*a3, a0 - i*a1]]  (mod q),

    whose determinant is p, a quadratic residue mod q.  The set is closed
    under matrix inversion, so the graphs built from it are undirected.
    """
    lps_parameter_check(p, q)
    i = sqrt_minus_one(q)
    gens = []
    for a0, a1, a2, a3 in jacobi_solutions(p):
        gens.append(
            psl_canonicalize(a0 + i * a1, a2 + i * a3, -a2 + i * a3, a0 - i * a1, q)
        )
    gens.sort()
    return gens


@dataclass(frozen=True)
class LpsBuild:
    """An LPS graph plus the loop bookkeeping from its group action.

    ``loop_incidences[x]`` counts the generators fixing vertex x.  The
    action degree before loop removal is uniformly p + 1, i.e. the built
    graph's degree plus the loop incidences at each vertex.
    """

    graph: Graph
    loop_incidences: tuple[int, ...]

    @property
    def pre_removal_degrees(self) -> np.ndarray:
        return self.graph.degrees + np.asarray(self.loop_incidences, dtype=np.int64)


def _action_graph(n_vertices: int, images: list[list[int]]) -> LpsBuild:
    # images[x] lists the generator images of vertex x.  Because the
    # generator set is closed under inversion, every non-loop pair {x, y}
    # shows up with equal multiplicity from both sides; collecting only the
    # y > x side once yields the undirected multiplicity directly.
    edges = []
    loops = [0] * n_vertices
    for x, imgs in enumerate(images):
        for y in imgs:
            if y > x:
                edges.append((x, y))
            elif y == x:
                loops[x] += 1
    graph = Graph.from_edges(n_vertices, edges, allows_multi=True)
    return LpsBuild(graph=graph, loop_incidences=tuple(loops))


def lps1_build(p: int, q: int) -> LpsBuild:
    """Cayley-graph LPS construction on PSL(2, Z/qZ).

    Vertices are the q*(q*q-1)/2 canonical group elements in sorted order;
    x ~ s*x for each of the p + 1 generators s.  The graph is (p+1)-regular
    (minus any loop incidences), connected, and non-bipartite for valid
    parameters.
    """
    gens = lps_generator_set(p, q)
    elements = psl_group_elements(q)
    index = {e: i for i, e in enumerate(elements)}
    images = []
    for u in elements:
        row = []
        for s in gens:
            prod = mat_mul_mod(s, u, q)
            row.append(index[psl_canonicalize(*prod, q)])
        images.append(row)
    return _action_graph(len(elements), images)


def lps2_build(p: int, q: int) -> LpsBuild:
    """Projective-line LPS construction on the q + 1 points of P^1(F_q).

    Vertices 0..q-1 are the field elements and vertex q is the point at
    infinity; x ~ s(x) under the linear fractional action of each of the
    p + 1 generators.  Loops (fixed points of a generator) are dropped from
    the graph but reported in the build's ``loop_incidences``.
    """
    gens = lps_generator_set(p, q)
    images = []
    for x in range(q + 1):
        images.append([lft_apply(s, x, q) for s in gens])
    return _action_graph(q + 1, images)


def gen_lps1(p: int, q: int) -> Graph:
    return lps1_build(p, q).graph


def gen_lps2(p: int, q: int) -> Graph:
    return lps2_build(p, q).graph

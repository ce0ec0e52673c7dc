"""Undirected graph container and edge-list serialization.

A :class:`Graph` is an immutable vertex count plus a sorted tuple of
``(u, v)`` pairs with ``u < v``.  Self loops are dropped silently at
construction (they cancel out of the Laplacian, which is what everything
downstream consumes).  Parallel edges are kept when ``allows_multi`` is
true, in which case adjacency entries carry the multiplicity; simple
graphs reject duplicates loudly.

The interchange format is a plain text edge list: a header line ``N M``
followed by M lines ``u v`` (0-indexed, u <= v), LF line endings, UTF-8.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Graph",
    "DegreeProfile",
    "read_edge_list",
    "write_edge_list",
]


class DegreeProfile(NamedTuple):
    min_degree: int
    max_degree: int
    average_degree: float
    is_regular: bool


@dataclass(frozen=True)
class Graph:
    """Immutable undirected (multi)graph on vertices 0..n_vertices-1.

    Construct through :meth:`from_edges`, which normalizes endpoint order,
    drops loops, and enforces the duplicate policy.  Direct construction
    expects already-normalized data and validates it strictly.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    allows_multi: bool = False

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise ValueError(f"graph needs at least one vertex, got {self.n_vertices}")
        seen = set()
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < self.n_vertices):
                raise ValueError(f"edge {e} is not a normalized pair inside 0..{self.n_vertices - 1}")
            if not self.allows_multi:
                if e in seen:
                    raise ValueError(f"duplicate edge {e} in a simple graph")
                seen.add(e)

    @classmethod
    def from_edges(
        cls,
        n_vertices: int,
        edges: Iterable[tuple[int, int]],
        allows_multi: bool = False,
    ) -> "Graph":
        """Build a graph from raw endpoint pairs.

        Endpoints are sorted into (min, max) order and self loops are
        discarded.  Duplicate pairs raise ValueError unless
        ``allows_multi`` is set, in which case they are retained and count
        toward adjacency multiplicities.
        """
        norm = []
        for u, v in edges:
            if u == v:
                continue  # loops never survive construction
            norm.append((u, v) if u < v else (v, u))
        norm.sort()
        return cls(n_vertices, tuple(norm), allows_multi)

    # -- basic structure ---------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        """Vertex degrees counting edge multiplicity (read-only array)."""
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        deg.flags.writeable = False
        return deg

    @cached_property
    def neighbor_lists(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor tuple per vertex; parallel edges deduplicated."""
        nbrs: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(tuple(sorted(s)) for s in nbrs)

    def degree_profile(self) -> DegreeProfile:
        deg = self.degrees
        lo = int(deg.min())
        hi = int(deg.max())
        return DegreeProfile(lo, hi, float(deg.mean()), lo == hi)

    # -- matrices ----------------------------------------------------------

    @cached_property
    def _adjacency(self) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices), dtype=np.float64)
        for u, v in self.edges:
            a[u, v] += 1.0
            a[v, u] += 1.0
        a.flags.writeable = False
        return a

    def adjacency_matrix(self) -> np.ndarray:
        """Dense symmetric adjacency; entries are edge multiplicities."""
        return self._adjacency

    def laplacian(self) -> np.ndarray:
        """Dense combinatorial Laplacian D - A."""
        lap = -self._adjacency.copy()
        lap[np.diag_indices(self.n_vertices)] = self.degrees.astype(np.float64)
        lap.flags.writeable = False
        return lap

    def adjacency_csr(self) -> sp.csr_array:
        """Sparse adjacency, built straight from the edge list."""
        if self.edges:
            rows_half = np.fromiter((u for u, _ in self.edges), dtype=np.int64, count=self.n_edges)
            cols_half = np.fromiter((v for _, v in self.edges), dtype=np.int64, count=self.n_edges)
        else:
            rows_half = cols_half = np.zeros(0, dtype=np.int64)
        rows = np.concatenate([rows_half, cols_half])
        cols = np.concatenate([cols_half, rows_half])
        data = np.ones(rows.shape[0], dtype=np.float64)
        a = sp.coo_array((data, (rows, cols)), shape=(self.n_vertices, self.n_vertices))
        return a.tocsr()  # duplicate entries sum to the multiplicity

    def laplacian_csr(self) -> sp.csr_array:
        """Sparse combinatorial Laplacian D - A."""
        n = self.n_vertices
        deg = sp.dia_array((self.degrees.astype(np.float64)[np.newaxis, :], [0]), shape=(n, n))
        return (deg - self.adjacency_csr()).tocsr()

    # -- traversal predicates ------------------------------------------------

    def connected_components(self) -> list[list[int]]:
        """Vertex lists of the connected components, each sorted, by first vertex."""
        seen = [False] * self.n_vertices
        comps = []
        for start in range(self.n_vertices):
            if seen[start]:
                continue
            comp = []
            queue = deque([start])
            seen[start] = True
            while queue:
                u = queue.popleft()
                comp.append(u)
                for w in self.neighbor_lists[u]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.connected_components()) == 1

    def is_bipartite(self) -> bool:
        """True when every component admits a proper 2-coloring (BFS check)."""
        color = [-1] * self.n_vertices
        for start in range(self.n_vertices):
            if color[start] != -1:
                continue
            color[start] = 0
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in self.neighbor_lists[u]:
                    if color[w] == -1:
                        color[w] = 1 - color[u]
                        queue.append(w)
                    elif color[w] == color[u]:
                        return False
        return True


# -- edge-list interchange -------------------------------------------------


def write_edge_list(g: Graph, path: str) -> None:
    """Write ``g`` in the 'N M' + 'u v' text format (sorted, LF, UTF-8)."""
    lines = [f"{g.n_vertices} {g.n_edges}\n"]
    lines.extend(f"{u} {v}\n" for u, v in g.edges)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(lines)


def read_edge_list(path: str, allows_multi: bool | None = None) -> Graph:
    """Parse the edge-list format back into a :class:`Graph`.

    When ``allows_multi`` is None it is inferred: the graph is marked as a
    multigraph exactly when the file contains a repeated pair.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = [ln for ln in (line.strip() for line in fh) if ln]
    if not raw:
        raise ValueError(f"{path}: empty edge-list file")
    head = raw[0].split()
    if len(head) != 2:
        raise ValueError(f"{path}: header must be 'N M', got {raw[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValueError(f"{path}: non-integer header {raw[0]!r}") from exc
    if len(raw) - 1 != m:
        raise ValueError(f"{path}: header promises {m} edges, found {len(raw) - 1}")
    edges = []
    for ln in raw[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"{path}: malformed edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ValueError(f"{path}: non-integer edge line {ln!r}") from exc
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"{path}: edge ({u}, {v}) outside vertex range 0..{n - 1}")
        edges.append((u, v))
    if allows_multi is None:
        norm = [(min(u, v), max(u, v)) for u, v in edges if u != v]
        allows_multi = len(norm) != len(set(norm))
    return Graph.from_edges(n, edges, allows_multi=allows_multi)

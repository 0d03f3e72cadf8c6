"""
Undirected simple graphs with canonical arc indexing.

The walk lives on arcs (directed edges).  Arc ``(u, v)`` gets index
``offsets[u] + position of v in the sorted adjacency list of u``, so the arcs
leaving one vertex are contiguous, which is what the matrix-free coin relies on.

Also houses the structural queries used by the stationary-state constructors:
marked/unmarked component structure, bipartitions, shortest odd cycles and
distance-to-cycle.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GraphError",
    "Graph",
    "MarkedSet",
    "Bipartition",
    "OddCycle",
    "build_graph",
    "from_adjacency",
    "marked_structure",
    "bipartition",
    "find_odd_cycle",
    "eccentric_vertex_from_cycle",
    "induced_components",
    "is_connected",
    "torus",
    "complete",
    "path",
    "cycle",
    "simplex",
    "read_edge_list",
    "write_edge_list",
    "format_edge_list",
]


class GraphError(ValueError):
    """Invalid graph input or an impossible structural query."""


class Graph:
    """
    Immutable undirected simple graph over vertices ``0..N-1``.

    Attributes
    ----------
    n_vertices, n_edges, n_arcs : int
        ``N``, ``|E|`` and ``2|E|``.
    adjacency : tuple[tuple[int, ...], ...]
        Sorted neighbor lists.
    degrees : np.ndarray
        Vertex degrees, shape ``(N,)``.
    offsets : np.ndarray
        ``offsets[v]`` is the index of the first arc leaving ``v``; shape ``(N+1,)``.
    sources, targets : np.ndarray
        Tail and head of every arc, shape ``(2|E|,)``.
    reverse : np.ndarray
        ``reverse[a]`` is the index of the arc opposite to ``a``.
    """

    def __init__(self, adjacency: Sequence[Sequence[int]]):
        adj = tuple(tuple(sorted(int(w) for w in nbrs)) for nbrs in adjacency)
        n = len(adj)
        if n == 0:
            raise GraphError("graph has no vertices")
        for v, nbrs in enumerate(adj):
            if not nbrs:
                raise GraphError(f"isolated vertex {v}: every vertex needs degree >= 1")
            if len(set(nbrs)) != len(nbrs):
                raise GraphError(f"duplicate edge at vertex {v}")
            for w in nbrs:
                if w == v:
                    raise GraphError(f"self-loop at vertex {v}")
                if not 0 <= w < n:
                    raise GraphError(f"vertex {v} lists out-of-range neighbor {w}")
        for v, nbrs in enumerate(adj):
            for w in nbrs:
                if v not in adj[w]:
                    raise GraphError(f"adjacency is not symmetric on edge ({v}, {w})")

        self.adjacency = adj
        self.n_vertices = n
        degrees = np.array([len(nbrs) for nbrs in adj], dtype=np.int64)
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=offsets[1:])
        n_arcs = int(offsets[-1])
        self.n_arcs = n_arcs
        self.n_edges = n_arcs // 2

        sources = np.repeat(np.arange(n, dtype=np.int64), degrees)
        targets = np.fromiter((w for nbrs in adj for w in nbrs), dtype=np.int64, count=n_arcs)
        self._arc_of = {(int(u), int(v)): a for a, (u, v) in enumerate(zip(sources, targets))}
        reverse = np.fromiter(
            (self._arc_of[(int(v), int(u))] for u, v in zip(sources, targets)),
            dtype=np.int64,
            count=n_arcs,
        )
        forward = np.flatnonzero(sources < targets)

        self.degrees = degrees
        self.offsets = offsets
        self.sources = sources
        self.targets = targets
        self.reverse = reverse
        # one entry per undirected edge {u<v}: arc (u,v) and arc (v,u)
        self.edge_arcs = np.stack([forward, reverse[forward]], axis=1)
        for arr in (degrees, offsets, sources, targets, reverse, self.edge_arcs):
            arr.setflags(write=False)

    def __repr__(self) -> str:
        return f"Graph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash(self.adjacency)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def arc(self, u: int, v: int) -> int:
        """Index of arc ``(u, v)``; raises ``KeyError`` if ``u`` and ``v`` are not adjacent."""
        return self._arc_of[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._arc_of

    def arcs_of(self, v: int) -> range:
        """Indices of the arcs leaving ``v``."""
        return range(int(self.offsets[v]), int(self.offsets[v + 1]))

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as ``(u, v)`` with ``u < v``, in arc order."""
        return [(int(self.sources[a]), int(self.targets[a])) for a in self.edge_arcs[:, 0]]

    def fingerprint(self) -> str:
        """SHA-256 of the canonical edge list; stable across runs and platforms."""
        return hashlib.sha256(format_edge_list(self).encode()).hexdigest()

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return build_graph([(perm[u], perm[v]) for u, v in self.edges()], self.n_vertices)


@dataclass(frozen=True)
class MarkedSet:
    """
    Marked vertices together with the component structure they induce.

    ``marked_components`` are the connected components of the subgraph induced
    by the members; ``unmarked_components`` likewise for the complement. Both
    are sorted by smallest vertex and each component is a sorted tuple.
    """

    graph: Graph
    members: frozenset
    marked_components: tuple
    unmarked_components: tuple

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.graph.n_vertices, dtype=bool)
        m[list(self.members)] = True
        return m

    @property
    def arc_mask(self) -> np.ndarray:
        """True on arcs leaving a marked vertex."""
        return self.mask[self.graph.sources]

    def unmarked_component_of(self) -> np.ndarray:
        """Vertex -> index into ``unmarked_components`` (-1 for marked vertices)."""
        label = np.full(self.graph.n_vertices, -1, dtype=np.int64)
        for i, comp in enumerate(self.unmarked_components):
            label[list(comp)] = i
        return label

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class Bipartition:
    """Two-colouring of one connected vertex set; ``side_of`` maps vertex -> 'X' or 'Y'."""

    side_of: dict
    valid: bool

    @property
    def X(self) -> list[int]:
        return sorted(v for v, s in self.side_of.items() if s == "X")

    @property
    def Y(self) -> list[int]:
        return sorted(v for v, s in self.side_of.items() if s == "Y")


@dataclass(frozen=True)
class OddCycle:
    vertices: tuple

    def __post_init__(self):
        k = len(self.vertices)
        if k < 3 or k % 2 == 0 or len(set(self.vertices)) != k:
            raise GraphError(f"not an odd cycle: {self.vertices}")

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        """Cycle edges ``(v_i, v_{i+1})`` in cycle order (last one wraps around)."""
        k = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % k]) for i in range(k)]


# --------------------------------------------------------------------------- #
# construction
# --------------------------------------------------------------------------- #

def build_graph(edges: Iterable[tuple[int, int]], n_vertices: int | None = None) -> Graph:
    """
    Build a :class:`Graph` from unordered vertex pairs.

    Parameters
    ----------
    edges : iterable of (int, int)
        Each undirected edge exactly once.
    n_vertices : int, optional
        Vertex count; defaults to ``max id + 1``.

    Raises
    ------
    GraphError
        On self-loops, duplicate edges, negative/out-of-range ids, or
        isolated vertices. The message names the offending element.
    """
    pairs = []
    for e in edges:
        u, v = (int(x) for x in e)
        if u == v:
            raise GraphError(f"self-loop ({u}, {v})")
        if u < 0 or v < 0:
            raise GraphError(f"negative vertex id in edge ({u}, {v})")
        pairs.append((u, v))
    if n_vertices is None:
        if not pairs:
            raise GraphError("empty edge list")
        n_vertices = max(max(p) for p in pairs) + 1
    adj: list[list[int]] = [[] for _ in range(n_vertices)]
    seen = set()
    for u, v in pairs:
        if u >= n_vertices or v >= n_vertices:
            raise GraphError(f"edge ({u}, {v}) references a vertex >= N={n_vertices}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
        adj[u].append(v)
        adj[v].append(u)
    return Graph(adj)


def from_adjacency(adjacency: Sequence[Sequence[int]]) -> Graph:
    return Graph(adjacency)


def torus(rows: int, cols: int) -> Graph:
    """Periodic square lattice, row-major numbering ``v = r*cols + c``; needs rows, cols >= 3."""
    if rows < 3 or cols < 3:
        raise GraphError("torus needs rows >= 3 and cols >= 3 to be a simple graph")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            edges.append((v, r * cols + (c + 1) % cols))
            edges.append((v, ((r + 1) % rows) * cols + c))
    return build_graph(edges, rows * cols)


def complete(n: int) -> Graph:
    if n < 2:
        raise GraphError("complete graph needs n >= 2")
    return build_graph([(u, v) for u in range(n) for v in range(u + 1, n)], n)


def path(n: int) -> Graph:
    if n < 2:
        raise GraphError("path needs n >= 2")
    return build_graph([(i, i + 1) for i in range(n - 1)], n)


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return build_graph([(i, (i + 1) % n) for i in range(n)], n)


def simplex(k: int) -> Graph:
    """
    Simplex of complete graphs: ``k`` cliques of ``k - 1`` vertices each.

    Every vertex of clique ``c`` carries one extra edge to a distinct other
    clique, so every pair of cliques is joined by exactly one edge and every
    vertex has degree ``k - 1``. Clique ``c`` holds vertices
    ``c*(k-1) .. c*(k-1) + k-2``.
    """
    if k < 3:
        raise GraphError("simplex needs k >= 3")
    size = k - 1

    def slot(c: int, other: int) -> int:
        # vertex of clique c facing clique `other`
        return c * size + (other if other < c else other - 1)

    edges = []
    for c in range(k):
        base = c * size
        edges += [(base + i, base + j) for i in range(size) for j in range(i + 1, size)]
        edges += [(slot(c, d), slot(d, c)) for d in range(c + 1, k)]
    return build_graph(edges, k * size)


# --------------------------------------------------------------------------- #
# edge-list files
# --------------------------------------------------------------------------- #

def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n_vertices} {g.n_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path_: str) -> None:
    with open(path_, "w") as fh:
        fh.write(format_edge_list(g))


def read_edge_list(path_: str) -> Graph:
    """Read ``N M`` then ``M`` lines of ``u v`` (0-based). Blank lines and ``#`` comments are skipped."""
    with open(path_) as fh:
        rows = [ln.split("#", 1)[0].split() for ln in fh]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 2:
        raise GraphError(f"{path_}: first line must be 'N M'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(r[0]), int(r[1])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise GraphError(f"{path_}: malformed line ({exc})") from None
    if any(len(r) != 2 for r in rows[1:]):
        raise GraphError(f"{path_}: every edge line needs exactly two ids")
    if len(edges) != m:
        raise GraphError(f"{path_}: header promises {m} edges, found {len(edges)}")
    return build_graph(edges, n)


# --------------------------------------------------------------------------- #
# structure
# --------------------------------------------------------------------------- #

def induced_components(g: Graph, vertices: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected components of the subgraph induced by ``vertices``, sorted by smallest vertex."""
    keep = set(vertices)
    seen: set[int] = set()
    comps = []
    for s in sorted(keep):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w in keep and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return len(induced_components(g, range(g.n_vertices))) == 1


def marked_structure(g: Graph, members: Iterable[int]) -> MarkedSet:
    """Bind a marked vertex set to ``g`` and compute marked/unmarked components."""
    members = frozenset(int(v) for v in members)
    bad = sorted(v for v in members if not 0 <= v < g.n_vertices)
    if bad:
        raise GraphError(f"marked vertex {bad[0]} out of range 0..{g.n_vertices - 1}")
    rest = [v for v in range(g.n_vertices) if v not in members]
    return MarkedSet(
        graph=g,
        members=members,
        marked_components=tuple(induced_components(g, members)),
        unmarked_components=tuple(induced_components(g, rest)),
    )


def _check_connected(g: Graph, component: Iterable[int]) -> list[int]:
    comp = sorted(set(component))
    if not comp:
        raise GraphError("empty component")
    if len(induced_components(g, comp)) != 1:
        raise GraphError(f"vertex set {comp} is not connected in the graph")
    return comp


def bipartition(g: Graph, component: Iterable[int]) -> Bipartition:
    """
    Two-colour the subgraph induced by a connected vertex set.

    BFS from the smallest vertex, which lands in ``X``. When an odd cycle is
    present ``valid`` is False and ``side_of`` holds the partial colouring.
    """
    comp = _check_connected(g, component)
    inside = set(comp)
    side = {comp[0]: "X"}
    queue = deque([comp[0]])
    valid = True
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in inside:
                continue
            if w not in side:
                side[w] = "Y" if side[u] == "X" else "X"
                queue.append(w)
            elif side[w] == side[u]:
                valid = False
    return Bipartition(side_of=side, valid=valid)


def _bfs_dist(g: Graph, sources: Iterable[int], inside: set) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    queue = deque(dist)
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w in inside and w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _shortest_odd_cycle_length(g: Graph, inside: set) -> int | None:
    # BFS from every root; an edge joining two vertices on the same layer
    # closes an odd closed walk of length 2d+1, and the global minimum of those
    # is attained by a simple cycle.
    best = None
    for r in sorted(inside):
        dist = _bfs_dist(g, [r], inside)
        for u, du in dist.items():
            for w in g.adjacency[u]:
                if w in inside and dist.get(w) == du:
                    length = 2 * du + 1
                    if best is None or length < best:
                        best = length
        if best == 3:
            break
    return best


def find_odd_cycle(g: Graph, component: Iterable[int]) -> OddCycle:
    """
    Shortest odd cycle inside a connected vertex set.

    Ties are broken by the lexicographically smallest vertex sequence that
    starts at the cycle's smallest vertex.

    Raises
    ------
    GraphError
        If the induced subgraph is bipartite (no odd cycle) or disconnected.
    """
    comp = _check_connected(g, component)
    inside = set(comp)
    k = _shortest_odd_cycle_length(g, inside)
    if k is None:
        raise GraphError(f"no odd cycle: component {comp} is bipartite")

    for s in comp:
        # search cycles whose smallest vertex is s, neighbours in increasing
        # order, so the first hit is the lexicographically smallest
        allowed = {v for v in inside if v >= s}
        dist = _bfs_dist(g, [s], allowed)
        seq = [s]
        on_path = {s}

        def extend() -> bool:
            depth = len(seq)
            u = seq[-1]
            if depth == k:
                return g.has_edge(u, s)
            for w in g.adjacency[u]:
                if w not in allowed or w in on_path:
                    continue
                # remaining steps after w: k - depth - 1 more vertices then close
                if dist.get(w, k + 1) > k - depth:
                    continue
                seq.append(w)
                on_path.add(w)
                if extend():
                    return True
                seq.pop()
                on_path.discard(w)
            return False

        if extend():
            return OddCycle(tuple(seq))
    raise AssertionError("odd cycle length found but no cycle enumerated")  # pragma: no cover


def eccentric_vertex_from_cycle(g: Graph, component: Iterable[int], cycle_: OddCycle) -> int:
    """
    Vertex of ``component`` outside the cycle that is farthest from it.

    Distance is ``min_i d(u, v_i)`` measured inside the component; ties go to
    the smallest id.
    """
    comp = _check_connected(g, component)
    inside = set(comp)
    outside = inside - set(cycle_.vertices)
    if not outside:
        raise GraphError("no external vertex: component equals the cycle's vertex set")
    dist = _bfs_dist(g, cycle_.vertices, inside)
    return min(outside, key=lambda u: (-dist[u], u))

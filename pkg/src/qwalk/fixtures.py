"""
Small named instances used by the tests, the ``reproduce`` command and the notebooks.

Vertex ids are 0-based. States built here are written out arc by arc, never
through :func:`qwalk.stationary.construct_optimal`, so they can serve as
independent references for it.
"""

from __future__ import annotations

import numpy as np

from .graph import (
    Graph,
    MarkedSet,
    bipartition,
    build_graph,
    cycle,
    marked_structure,
    simplex,
    torus,
)
from .walk import WalkState

__all__ = [
    "torus_pair",
    "pair_state",
    "general_pair_state",
    "pair_overlap_squared",
    "BIPARTITE7_EDGES",
    "bipartite7_component",
    "bipartite7_host",
    "triangle_host",
    "simplex_marked_clique",
    "disjoint_unmarked_pair",
    "unequal_pair_host",
    "two_vertex_path",
    "five_cycle",
    "five_cycle_with_chordal_vertex",
    "five_cycle_with_tail",
    "random_graph",
    "random_marked",
    "random_non_bipartite",
]


def torus_pair(rows: int = 4, cols: int = 3) -> tuple[Graph, MarkedSet]:
    """Torus with two horizontally adjacent marked vertices in row ``rows // 2``.

    For the 4x3 torus these are vertices 6 and 7.
    """
    g = torus(rows, cols)
    v = (rows // 2) * cols
    return g, marked_structure(g, {v, v + 1})


def pair_state(g: Graph, pair: tuple[int, int], a: float = 1.0) -> WalkState:
    """Every arc ``a`` except the two arcs joining the marked pair, which carry
    ``-(d-1)a`` (``-3a`` on a torus). Not normalized."""
    i, j = pair
    amps = np.full(g.n_arcs, float(a))
    amps[g.arc(i, j)] = amps[g.arc(j, i)] = -(g.degree(i) - 1) * a
    return WalkState(amps, g)


def general_pair_state(g: Graph, marked: MarkedSet, a: float, b: float) -> WalkState:
    """
    Two-parameter stationary family around an adjacent marked pair.

    ``a`` scales :func:`pair_state`. The ``b`` part gives the first marked
    vertex uniform value ``-b``, the second ``+b``, and puts a zero-sum flip on
    unmarked vertices: ``+b`` on arcs into the first, ``-b`` on arcs into the
    second, plus an antisymmetric flow on unmarked-unmarked edges. The flow
    comes from a least-squares solve of the conservation equations.
    """
    i, j = sorted(marked.members)
    amps = pair_state(g, (i, j), a).amplitudes.copy()

    chi = np.zeros(g.n_arcs)
    for k in g.arcs_of(i):
        chi[k] = -b
    for k in g.arcs_of(j):
        chi[k] = b
    unmarked = [v for v in range(g.n_vertices) if v not in marked]
    pos = {v: r for r, v in enumerate(unmarked)}
    inner_edges = [(u, w) for u, w in g.edges() if u in pos and w in pos]
    rhs = np.zeros(len(unmarked))
    for u in unmarked:
        if g.has_edge(u, i):
            chi[g.arc(u, i)] = b
            rhs[pos[u]] -= b
        if g.has_edge(u, j):
            chi[g.arc(u, j)] = -b
            rhs[pos[u]] += b
    inc = np.zeros((len(unmarked), len(inner_edges)))
    for c, (u, w) in enumerate(inner_edges):
        inc[pos[u], c] = 1.0
        inc[pos[w], c] = -1.0
    flow = np.linalg.lstsq(inc, rhs, rcond=None)[0]
    for (u, w), f in zip(inner_edges, flow):
        chi[g.arc(u, w)] = f
        chi[g.arc(w, u)] = -f
    return WalkState(amps + chi, g)


def pair_overlap_squared(n_vertices: int) -> float:
    """Squared overlap of the normalized pair state with the uniform state on a torus."""
    n = n_vertices
    return (4 * n - 8) ** 2 / (4 * n * (4 * n + 16))


# Seven-vertex bipartite marked component: removing vertex 0 leaves
# {1, 3, 4, 5} (joined to 0 by two edges) and {2, 6} (one edge).
BIPARTITE7_EDGES = [(0, 4), (0, 5), (0, 6), (1, 4), (1, 5), (3, 5), (2, 6)]


def bipartite7_component() -> Graph:
    return build_graph(BIPARTITE7_EDGES, 7)


def bipartite7_host() -> tuple[Graph, MarkedSet]:
    """The seven-vertex component marked inside an 8-cycle of unmarked vertices.

    Both partite sides send four edges to the unmarked cycle, so the uniform
    assignment is balanced.
    """
    ring = [(7 + t, 7 + (t + 1) % 8) for t in range(8)]
    attach = [(0, 7), (1, 8), (2, 9), (3, 10), (4, 11), (5, 12), (6, 13), (6, 14)]
    g = build_graph(BIPARTITE7_EDGES + ring + attach, 15)
    return g, marked_structure(g, range(7))


def triangle_host() -> tuple[Graph, MarkedSet]:
    """Marked triangle {0,1,2} with degrees 3, 4 and 5 hanging off an unmarked 6-cycle with a chord."""
    tri = [(0, 1), (1, 2), (0, 2)]
    ring = [(3 + t, 3 + (t + 1) % 6) for t in range(6)] + [(3, 6)]
    attach = [(0, 3), (1, 4), (1, 5), (2, 6), (2, 7), (2, 8)]
    g = build_graph(tri + ring + attach, 9)
    return g, marked_structure(g, {0, 1, 2})


def simplex_marked_clique(k: int = 4) -> tuple[Graph, MarkedSet]:
    """Simplex of ``k`` cliques of size ``k-1`` with clique 0 fully marked."""
    g = simplex(k)
    return g, marked_structure(g, range(k - 1))


def disjoint_unmarked_pair() -> tuple[Graph, MarkedSet]:
    """
    Marked pair {0, 1}; vertex 0 has two edges into U_1 = {2, 3}, vertex 1 has
    three edges into U_2 = {4, 5, 6}. Balance forces value(U_1):value(U_2) = 3:2.
    """
    edges = [(0, 1), (2, 3), (4, 5), (5, 6), (0, 2), (0, 3), (1, 4), (1, 5), (1, 6)]
    g = build_graph(edges, 7)
    return g, marked_structure(g, {0, 1})


def unequal_pair_host() -> tuple[Graph, MarkedSet]:
    """Adjacent marked pair of degrees 3 and 4 on an asymmetric unmarked host."""
    ring = [(2 + t, 2 + (t + 1) % 6) for t in range(6)] + [(2, 4)]
    edges = [(0, 1), (0, 2), (0, 3), (1, 5), (1, 6), (1, 7)] + ring
    g = build_graph(edges, 8)
    return g, marked_structure(g, {0, 1})


def two_vertex_path() -> tuple[Graph, MarkedSet]:
    g = build_graph([(0, 1)], 2)
    return g, marked_structure(g, {0})


def five_cycle() -> Graph:
    return cycle(5)


def five_cycle_with_chordal_vertex() -> Graph:
    """5-cycle 0..4 plus vertex 5 adjacent to the non-adjacent cycle vertices 0 and 2."""
    return build_graph([(t, (t + 1) % 5) for t in range(5)] + [(5, 0), (5, 2)], 6)


def five_cycle_with_tail() -> Graph:
    """5-cycle 0..4 with the pendant path 0-5-6."""
    return build_graph([(t, (t + 1) % 5) for t in range(5)] + [(0, 5), (5, 6)], 7)


# --------------------------------------------------------------------------- #
# random instances
# --------------------------------------------------------------------------- #

def random_graph(rng: np.random.Generator, n_max: int = 12, connected: bool = False) -> Graph:
    """Random simple graph on 2..n_max vertices with no isolated vertex.

    With ``connected`` a random spanning tree is laid down first.
    """
    n = int(rng.integers(2, n_max + 1))
    p = rng.uniform(0.15, 0.7)
    edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
    if connected:
        order = rng.permutation(n)
        for t in range(1, n):
            u, v = int(order[t]), int(order[rng.integers(0, t)])
            edges.add((min(u, v), max(u, v)))
    touched = {x for e in edges for x in e}
    for v in range(n):
        if v not in touched:
            w = int(rng.choice([x for x in range(n) if x != v]))
            edges.add((min(v, w), max(v, w)))
            touched.update((v, w))
    return build_graph(sorted(edges), n)


def random_marked(rng: np.random.Generator, g: Graph, nonempty: bool = False) -> MarkedSet:
    lo = 1 if nonempty else 0
    k = int(rng.integers(lo, g.n_vertices + 1))
    members = rng.choice(g.n_vertices, size=k, replace=False)
    return marked_structure(g, members.tolist())


def random_non_bipartite(rng: np.random.Generator, n_max: int = 15) -> Graph:
    """Random connected graph on 3..n_max vertices containing an odd cycle."""
    while True:
        g = random_graph(rng, n_max, connected=True)
        if g.n_vertices < 3:
            continue
        bip = bipartition(g, range(g.n_vertices))
        if not bip.valid:
            return g
        same = [(u, v) for side in (bip.X, bip.Y) for i, u in enumerate(side) for v in side[i + 1:]]
        if same:
            u, v = same[int(rng.integers(len(same)))]
            return build_graph(g.edges() + [(u, v)], g.n_vertices)

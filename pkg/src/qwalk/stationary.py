"""
Stationary states (1-eigenvectors) of the search step.

Every directional state splits into a uniform part (the mean amplitude) and
a flip part (the zero-sum remainder). Stationarity is a per-edge condition
on those parts, and the stationary state closest to the uniform initial
state has uniform unmarked vertices, flip marked vertices and symmetric edge
amplitudes. Building such a state reduces to neutralizing each marked
vertex's *shortage*, i.e. the amount its marked-marked edges must carry so
the vertex sums to zero.

Shortage convention: ``s_v = -(sum of amplitudes on v's edges to unmarked
neighbours)``, so internal edges at ``v`` must sum to exactly ``s_v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import (
    Bipartition,
    Graph,
    GraphError,
    MarkedSet,
    OddCycle,
    bipartition,
    find_odd_cycle,
    induced_components,
    is_connected,
    _bfs_dist,
)
from .walk import (
    StepOperator,
    Variant,
    WalkState,
    apply_step,
    initial_state,
    inner_product,
    vertex_means,
)

__all__ = [
    "DEFAULT_TOL",
    "IDENTITY_TOL",
    "ExistenceError",
    "NotStationaryError",
    "ZeroStateError",
    "DirectionalDecomposition",
    "ShortageMap",
    "Violation",
    "StationaryReport",
    "BalanceResult",
    "SKWOrthogonalityReport",
    "decompose",
    "check_stationary",
    "optimize_stationary",
    "compute_shortages",
    "assign_bipartite",
    "assign_non_bipartite",
    "minimum_norm_assignment",
    "vertex_sums",
    "construct_optimal",
    "balance_unmarked_assignment",
    "skw_orthogonality_check",
]

DEFAULT_TOL = 1e-10
IDENTITY_TOL = 1e-12


class ExistenceError(Exception):
    """
    No optimal stationary state for the given unmarked assignment.

    ``failures`` holds ``(component, x_sum, y_sum)`` for every bipartite
    marked component whose partite shortage sums differ.
    """

    def __init__(self, failures: Sequence[tuple[tuple[int, ...], float, float]], reason: str = ""):
        self.failures = list(failures)
        parts = [
            f"component {list(c)}: X-side shortage sum {sx!r} != Y-side {sy!r}"
            for c, sx, sy in self.failures
        ]
        super().__init__(reason or "; ".join(parts) or "no stationary state")


class NotStationaryError(ValueError):
    pass


class ZeroStateError(ValueError):
    """The requested state is the zero vector and cannot be normalized."""


# --------------------------------------------------------------------------- #
# decomposition and the per-edge stationarity conditions
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class DirectionalDecomposition:
    """Per-vertex uniform value and per-arc flip part of a state."""

    graph: Graph
    uniform_value: np.ndarray
    flip: np.ndarray

    def flip_part(self, v: int) -> np.ndarray:
        g = self.graph
        return self.flip[g.offsets[v]:g.offsets[v + 1]]

    def uniform_arcs(self) -> np.ndarray:
        return self.uniform_value[self.graph.sources]

    def recombine(self) -> WalkState:
        return WalkState(self.uniform_arcs() + self.flip, self.graph)


def decompose(state: WalkState) -> DirectionalDecomposition:
    """Split every directional state into its mean and the zero-sum remainder."""
    sigma = vertex_means(state)
    flip = state.amplitudes - sigma[state.graph.sources]
    return DirectionalDecomposition(state.graph, sigma, flip)


@dataclass(frozen=True)
class Violation:
    edge: tuple[int, int]
    case: str
    residual: float


@dataclass
class StationaryReport:
    """
    Verdict of :func:`check_stationary`.

    ``max_residual`` comes from the per-edge uniform/flip equations;
    ``operator_residual`` is the independent ``max |U psi - psi|``.
    """

    is_stationary: bool
    oracle_variant: Variant
    max_residual: float
    violations: list[Violation]
    overlap_with_initial: float
    tolerance: float
    operator_residual: float

    def to_dict(self) -> dict:
        return {
            "is_stationary": self.is_stationary,
            "oracle_variant": self.oracle_variant.value,
            "max_residual": self.max_residual,
            "operator_residual": self.operator_residual,
            "overlap_with_initial": self.overlap_with_initial,
            "tolerance": self.tolerance,
            "violations": [
                {"edge": list(v.edge), "case": v.case, "residual": v.residual}
                for v in self.violations
            ],
        }


def _edge_residuals(state: WalkState, marked: MarkedSet, variant: Variant) -> np.ndarray:
    """
    Residuals of the two fixed-point equations of every edge, shape ``(|E|, 2)``.

    For edge ``{a, b}`` the amplitude on ``ab`` is ``sigma_1 + phi_1`` and on
    ``ba`` is ``sigma_2 + phi_2``. After one step, ``ab`` holds what ``b``'s
    coin made of ``ba``: ``sigma_2 - phi_2`` if ``b`` is unmarked,
    ``-sigma_2 + phi_2`` if marked (Grover), ``-sigma_2 - phi_2`` if marked (SKW).
    """
    g = state.graph
    dec = decompose(state)
    sig = dec.uniform_arcs()
    phi = dec.flip
    on_marked = marked.arc_mask
    if variant is Variant.GROVER_U:
        after_coin = np.where(on_marked, -sig + phi, sig - phi)
    else:
        after_coin = np.where(on_marked, -sig - phi, sig - phi)
    per_arc = (sig + phi) - after_coin[g.reverse]
    return per_arc[g.edge_arcs]


_CASES = ("P2", "P1", "P3")  # indexed by number of marked endpoints


def check_stationary(
    state: WalkState,
    marked: MarkedSet,
    variant: Variant | str = Variant.GROVER_U,
    tol: float = DEFAULT_TOL,
) -> StationaryReport:
    """
    Check the per-edge stationarity conditions.

    Each edge is classified by how many endpoints are marked (P1: one, P2:
    none, P3: both). Every edge whose residual exceeds ``tol`` is listed; P1
    edges are reported as ``(unmarked, marked)``.
    """
    variant = Variant.parse(variant)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    g = state.graph
    res = np.abs(_edge_residuals(state, marked, variant))
    per_edge = res.max(axis=1) if g.n_edges else np.zeros(0)
    mask = marked.mask
    u = g.sources[g.edge_arcs[:, 0]]
    v = g.targets[g.edge_arcs[:, 0]]
    n_marked = mask[u].astype(int) + mask[v].astype(int)

    violations = []
    for e in np.flatnonzero(per_edge > tol):
        a, b = int(u[e]), int(v[e])
        if n_marked[e] == 1 and mask[a]:
            a, b = b, a
        violations.append(Violation((a, b), _CASES[n_marked[e]], float(per_edge[e])))

    max_res = float(per_edge.max()) if per_edge.size else 0.0
    op_res = float(np.max(np.abs(apply_step(state, StepOperator(variant, marked)).amplitudes
                                 - state.amplitudes)))
    nrm = state.norm()
    overlap = inner_product(initial_state(g), state) / nrm if nrm > 0 else 0.0
    return StationaryReport(
        is_stationary=max_res <= tol,
        oracle_variant=variant,
        max_residual=max_res,
        violations=violations,
        overlap_with_initial=overlap,
        tolerance=tol,
        operator_residual=op_res,
    )


def optimize_stationary(state: WalkState, marked: MarkedSet, tol: float = DEFAULT_TOL) -> WalkState:
    """
    Project a Grover-stationary state onto its maximal-overlap form.

    Drops the flip part at unmarked vertices and the uniform part at marked
    vertices, then normalizes. Neither removed piece overlaps the uniform
    initial state, so the overlap can only grow.

    Raises
    ------
    NotStationaryError
        If ``state`` is not stationary under the Grover step.
    ZeroStateError
        If nothing survives the projection.
    """
    report = check_stationary(state, marked, Variant.GROVER_U, tol)
    if not report.is_stationary:
        raise NotStationaryError(
            f"input is not stationary under the Grover step (max residual {report.max_residual:.3e})"
        )
    dec = decompose(state)
    kept = np.where(marked.arc_mask, dec.flip, dec.uniform_arcs())
    nrm = np.linalg.norm(kept)
    if nrm <= IDENTITY_TOL * max(1.0, state.norm()):
        raise ZeroStateError("no overlap-bearing stationary state from this input")
    return WalkState(kept / nrm, state.graph)


# --------------------------------------------------------------------------- #
# shortages and the constructive existence procedures
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class ShortageMap:
    unmarked_assignment: tuple[float, ...]
    shortages: dict


def _assignment_vector(marked: MarkedSet, assignment) -> np.ndarray:
    k = len(marked.unmarked_components)
    if assignment is None:
        return np.ones(k)
    if isinstance(assignment, Mapping):
        missing = [i for i in range(k) if i not in assignment]
        if missing:
            raise ValueError(f"unmarked assignment misses component(s) {missing}")
        extra = [i for i in assignment if not 0 <= i < k]
        if extra:
            raise ValueError(f"unmarked assignment names unknown component(s) {extra}")
        return np.array([float(assignment[i]) for i in range(k)])
    vec = np.asarray(assignment, dtype=float).reshape(-1)
    if vec.size != k:
        raise ValueError(f"unmarked assignment has {vec.size} values for {k} component(s)")
    return vec


def compute_shortages(g: Graph, marked: MarkedSet, unmarked_assignment=None) -> ShortageMap:
    """
    Shortage of every marked vertex when unmarked component ``i`` carries the
    uniform value ``unmarked_assignment[i]`` (default 1.0 everywhere).
    """
    x = _assignment_vector(marked, unmarked_assignment)
    label = marked.unmarked_component_of()
    shortages = {}
    for v in marked.sorted_members():
        total = sum(x[label[w]] for w in g.adjacency[v] if label[w] >= 0)
        shortages[v] = -float(total)
    return ShortageMap(tuple(float(t) for t in x), shortages)


def _internal_edges(g: Graph, comp: Iterable[int]) -> list[tuple[int, int]]:
    inside = set(comp)
    return [(u, w) for u in sorted(inside) for w in g.adjacency[u] if w in inside and u < w]


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def vertex_sums(assignment: Mapping[tuple[int, int], float]) -> dict:
    """Sum of the assigned edge amplitudes at every touched vertex."""
    sums: dict = {}
    for (u, v), val in assignment.items():
        sums[u] = sums.get(u, 0.0) + val
        sums[v] = sums.get(v, 0.0) + val
    return sums


def _balance_scale(values: Iterable[float]) -> float:
    return max(1.0, sum(abs(x) for x in values))


def assign_bipartite(
    g: Graph,
    component: Iterable[int],
    bip: Bipartition,
    shortages: Mapping[int, float],
) -> dict:
    """
    Neutralize the shortages of a bipartite marked component.

    Repeatedly take a pivot ``v`` with nonzero shortage (largest ``|s_v|``,
    smallest id on ties) and delete it. For each remaining piece ``C_i``,
    ``b_i`` is the pivot-side shortage sum minus the opposite-side sum over
    ``C_i``. Each of the ``n_i`` edges from ``v`` into ``C_i`` gets
    ``-b_i / n_i``, which zeroes ``v`` and rebalances ``C_i``; then recurse.

    Returns
    -------
    dict
        ``{(u, w): amplitude}`` with ``u < w`` for every internal edge.

    Raises
    ------
    ExistenceError
        If the two partite shortage sums differ.
    GraphError
        If ``bip`` is not a valid bipartition of the component.
    """
    comp = sorted(set(component))
    if not bip.valid:
        raise GraphError(f"component {comp} is not bipartite")
    if any(v not in bip.side_of for v in comp):
        raise GraphError("bipartition does not cover the component")
    side = bip.side_of
    s = {v: float(shortages[v]) for v in comp}
    sx = sum(s[v] for v in comp if side[v] == "X")
    sy = sum(s[v] for v in comp if side[v] == "Y")
    if abs(sx - sy) > IDENTITY_TOL * _balance_scale(s.values()):
        raise ExistenceError([(tuple(comp), sx, sy)])

    values = {e: 0.0 for e in _internal_edges(g, comp)}
    work = [comp]
    while work:
        part = work.pop()
        if len(part) < 2:
            continue
        peak = max(abs(s[v]) for v in part)
        if peak == 0.0:
            continue
        pivot = min(v for v in part if abs(s[v]) == peak)
        rest = [v for v in part if v != pivot]
        for piece in induced_components(g, rest):
            members = set(piece)
            b = sum(s[x] if side[x] == side[pivot] else -s[x] for x in piece)
            nbrs = [y for y in g.adjacency[pivot] if y in members]
            amp = -b / len(nbrs)
            for y in nbrs:
                values[_key(pivot, y)] = amp
                s[y] -= amp
            work.append(list(piece))
        s[pivot] = 0.0
    return values


def _peel_order(g: Graph, comp: Sequence[int], cyc: OddCycle) -> list[int]:
    # Deleting a farthest vertex never changes other vertices' distance to the
    # cycle, so one BFS gives the same order as repeatedly asking
    # eccentric_vertex_from_cycle on the shrinking component.
    dist = _bfs_dist(g, cyc.vertices, set(comp))
    outside = set(comp) - set(cyc.vertices)
    return sorted(outside, key=lambda u: (-dist[u], u))


def assign_non_bipartite(g: Graph, component: Iterable[int], shortages: Mapping[int, float]) -> dict:
    """
    Neutralize the shortages of a non-bipartite marked component.

    Vertices off a shortest odd cycle are peeled farthest-first; a peeled
    vertex ``u`` spreads ``s_u`` evenly over its edges to the vertices still
    present. On the remaining odd cycle ``v_0..v_{k-1}`` edge ``(v_i, v_{i+1})``
    gets ``1/2 * sum_j (-1)^((i-j) mod k) s_{v_j}``. All other edges get 0.
    Never fails.
    """
    comp = sorted(set(component))
    if bipartition(g, comp).valid:
        raise GraphError(f"component {comp} is bipartite; use assign_bipartite")
    cyc = find_odd_cycle(g, comp)
    s = {v: float(shortages[v]) for v in comp}
    values = {e: 0.0 for e in _internal_edges(g, comp)}

    remaining = set(comp)
    for u in _peel_order(g, comp, cyc):
        remaining.discard(u)
        nbrs = [w for w in g.adjacency[u] if w in remaining]
        amp = s[u] / len(nbrs)
        for w in nbrs:
            values[_key(u, w)] = amp
            s[w] -= amp
        s[u] = 0.0

    vs = cyc.vertices
    k = len(vs)
    for i in range(k):
        val = 0.5 * sum((-1) ** ((i - j) % k) * s[vs[j]] for j in range(k))
        values[_key(vs[i], vs[(i + 1) % k])] = val
    return values


def minimum_norm_assignment(g: Graph, component: Iterable[int], assignment: Mapping) -> dict:
    """
    Same vertex sums as ``assignment`` with the smallest Euclidean norm.

    Removes the component of the assignment lying in the kernel of the
    vertex-edge incidence map (alternating circulations around even closed
    walks), which leaves every vertex sum untouched.
    """
    comp = sorted(set(component))
    edges = _internal_edges(g, comp)
    if not edges:
        return {}
    pos = {v: i for i, v in enumerate(comp)}
    inc = np.zeros((len(comp), len(edges)))
    for j, (u, w) in enumerate(edges):
        inc[pos[u], j] = inc[pos[w], j] = 1.0
    y = np.array([assignment.get(e, 0.0) for e in edges])
    y_min = np.linalg.lstsq(inc, inc @ y, rcond=None)[0]
    return {e: float(val) for e, val in zip(edges, y_min)}


def construct_optimal(
    g: Graph,
    marked: MarkedSet,
    unmarked_assignment=None,
    tol: float = DEFAULT_TOL,
    minimize_norm: bool = True,
) -> tuple[WalkState, StationaryReport]:
    """
    Build the normalized maximal-overlap stationary state.

    Unmarked component ``i`` gets the uniform value ``unmarked_assignment[i]``
    on all of its arcs, including arcs to and from marked neighbours. Each
    marked component is then solved with :func:`assign_bipartite` or
    :func:`assign_non_bipartite`. With ``minimize_norm`` (default) the internal
    assignment is replaced by its minimum-norm equivalent, which is what makes
    the overlap maximal for the given unmarked assignment when the constructive
    solution is not unique.

    Raises
    ------
    ExistenceError
        If some bipartite marked component has unbalanced partite shortage sums.
    ZeroStateError
        If the assembled state is zero.
    """
    x = _assignment_vector(marked, unmarked_assignment)
    label = marked.unmarked_component_of()
    src, tgt = g.sources, g.targets
    amps = np.zeros(g.n_arcs)
    from_unmarked = label[src] >= 0
    amps[from_unmarked] = x[label[src[from_unmarked]]]
    to_unmarked = ~from_unmarked & (label[tgt] >= 0)
    amps[to_unmarked] = x[label[tgt[to_unmarked]]]

    shortages = compute_shortages(g, marked, x).shortages
    failures = []
    for comp in marked.marked_components:
        bip = bipartition(g, comp)
        try:
            if bip.valid:
                values = assign_bipartite(g, comp, bip, shortages)
            else:
                values = assign_non_bipartite(g, comp, shortages)
        except ExistenceError as exc:
            failures.extend(exc.failures)
            continue
        if minimize_norm:
            values = minimum_norm_assignment(g, comp, values)
        for (u, w), val in values.items():
            amps[g.arc(u, w)] = amps[g.arc(w, u)] = val
    if failures:
        raise ExistenceError(failures)

    nrm = np.linalg.norm(amps)
    if nrm == 0.0:
        raise ZeroStateError("constructed state is the zero vector")
    state = WalkState(amps / nrm, g)
    return state, check_stationary(state, marked, Variant.GROVER_U, tol)


# --------------------------------------------------------------------------- #
# balancing unmarked components
# --------------------------------------------------------------------------- #

@dataclass
class BalanceResult:
    """
    Outcome of :func:`balance_unmarked_assignment`.

    ``equations`` has one row per bipartite marked component (coefficients of
    ``X-sum - Y-sum`` in the unmarked component values).
    """

    feasible: bool
    assignment: tuple[float, ...] | None
    equations: np.ndarray
    bipartite_components: list = field(default_factory=list)


def balance_unmarked_assignment(g: Graph, marked: MarkedSet, rel_tol: float = 1e-9) -> BalanceResult:
    """
    Choose unmarked component values that balance every bipartite marked component.

    Solves ``A x = 0`` with one row per bipartite marked component and looks
    for a null-space vector with no zero entry. Prefers the projection of the
    all-ones vector onto the null space; the result is scaled so its
    largest-magnitude entry is +1. Infeasible when every null-space vector
    vanishes on some component.
    """
    k = len(marked.unmarked_components)
    label = marked.unmarked_component_of()
    rows, bip_comps = [], []
    for comp in marked.marked_components:
        bip = bipartition(g, comp)
        if not bip.valid:
            continue
        row = np.zeros(k)
        for v in comp:
            sign = 1.0 if bip.side_of[v] == "X" else -1.0
            for w in g.adjacency[v]:
                if label[w] >= 0:
                    # s_v = -sum of neighbour values
                    row[label[w]] -= sign
        rows.append(row)
        bip_comps.append(comp)
    eqs = np.array(rows).reshape(len(rows), k)
    if k == 0:
        return BalanceResult(True, (), eqs, bip_comps)

    if eqs.shape[0]:
        _, sv, vh = np.linalg.svd(eqs)
        rank = int(np.sum(sv > rel_tol * max(1.0, sv.max(initial=0.0))))
        null = vh[rank:].T
    else:
        null = np.eye(k)
    if null.shape[1] == 0:
        return BalanceResult(False, None, eqs, bip_comps)

    row_norms = np.linalg.norm(null, axis=1)
    if np.any(row_norms <= rel_tol):
        return BalanceResult(False, None, eqs, bip_comps)

    if null.shape[1] == 1:
        candidate = null[:, 0]
    else:
        candidate = null @ (null.T @ np.ones(k))
        if np.any(np.abs(candidate) <= rel_tol * np.abs(candidate).max(initial=0.0)):
            # no null-space row vanishes, so a generic combination has no zero entry
            candidate = null @ np.random.default_rng(0).standard_normal(null.shape[1])
    candidate = candidate / candidate[np.argmax(np.abs(candidate))]
    return BalanceResult(True, tuple(float(t) for t in candidate), eqs, bip_comps)


# --------------------------------------------------------------------------- #
# SKW oracle
# --------------------------------------------------------------------------- #

@dataclass
class SKWOrthogonalityReport:
    """
    Overlap with the initial state and edge antisymmetry of SKW-stationary states.

    ``flags`` lists conditions under which orthogonality is not promised
    (``"empty_marked_set"``, ``"disconnected_graph"``); ``passed`` is still
    evaluated literally.
    """

    overlaps: list[float]
    antisymmetry_residuals: list[float]
    passed: bool
    flags: list[str]


def skw_orthogonality_check(
    g: Graph,
    marked: MarkedSet,
    states: Sequence[WalkState],
    tol: float = DEFAULT_TOL,
    antisymmetry_tol: float | None = None,
) -> SKWOrthogonalityReport:
    """
    Measure ``|<psi(0)|psi>|`` and ``max |psi(uv) + psi(vu)|`` for each state.

    Raises
    ------
    NotStationaryError
        If any state is not stationary under the SKW step.
    """
    anti_tol = tol if antisymmetry_tol is None else antisymmetry_tol
    psi0 = initial_state(g)
    overlaps, anti = [], []
    for i, st in enumerate(states):
        rep = check_stationary(st, marked, Variant.SKW_U_PRIME, tol)
        if not rep.is_stationary:
            raise NotStationaryError(
                f"state {i} is not SKW-stationary (max residual {rep.max_residual:.3e})"
            )
        overlaps.append(abs(inner_product(psi0, st)))
        a = st.amplitudes
        anti.append(float(np.max(np.abs(a + a[g.reverse]))) if g.n_arcs else 0.0)
    flags = []
    if len(marked) == 0:
        flags.append("empty_marked_set")
    if not is_connected(g):
        flags.append("disconnected_graph")
    passed = all(o <= tol for o in overlaps) and all(r <= anti_tol for r in anti)
    return SKWOrthogonalityReport(overlaps, anti, passed, flags)

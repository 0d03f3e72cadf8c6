"""
Fixture suite behind ``qwalk reproduce`` and ``tests/test_acceptance.py``.

Each ``criterion_*`` function runs one check at its pinned tolerance and
returns a :class:`CriterionResult`; :func:`run_all` prints one line per check.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fixtures as fx
from .graph import complete, marked_structure
from .spectral import materialize, one_eigenspace, project_initial
from .stationary import (
    ExistenceError,
    assign_non_bipartite,
    balance_unmarked_assignment,
    check_stationary,
    construct_optimal,
    skw_orthogonality_check,
    vertex_sums,
)
from .walk import StepOperator, Variant, WalkState, apply_step, initial_state, simulate

__all__ = ["CriterionResult", "CRITERIA", "run_all"]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    time_limit: float = math.inf

    @property
    def in_time(self) -> bool:
        return self.seconds < self.time_limit

    def line(self) -> str:
        verdict = "PASS" if self.passed and self.in_time else "FAIL"
        return (
            f"[{verdict}] {self.number:2d}. {self.name:<32s} "
            f"{self.seconds:7.2f}s (limit {self.time_limit:g}s)  {self.detail}"
        )


def _timed(number: int, name: str, limit: float):
    def wrap(fn: Callable[[], tuple[bool, str]]):
        def run() -> CriterionResult:
            t0 = time.perf_counter()
            ok, detail = fn()
            return CriterionResult(number, name, bool(ok), detail, time.perf_counter() - t0, limit)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@_timed(1, "pair state on 4x3 torus", 1.0)
def criterion_pair_state() -> tuple[bool, str]:
    g, m = fx.torus_pair(4, 3)
    state, report = construct_optimal(g, m)
    i, j = sorted(m.members)
    a = state[(0, 1)]
    ref = fx.pair_state(g, (i, j), a).amplitudes
    shape_err = float(np.max(np.abs(state.amplitudes - ref)))
    ok = shape_err <= 1e-12 and report.max_residual <= 1e-10 and report.operator_residual <= 1e-10
    return ok, (
        f"facing arcs / a = {state[(i, j)] / a:.12g}, shape err {shape_err:.1e}, "
        f"residual {report.max_residual:.1e}"
    )


@_timed(2, "optimality vs spectral oracle", 30.0)
def criterion_optimality() -> tuple[bool, str]:
    cases = {
        "torus pair": fx.torus_pair(4, 3),
        "triangle host": fx.triangle_host(),
        "bipartite7 host": fx.bipartite7_host(),
        "simplex": fx.simplex_marked_clique(4),
    }
    worst, parts = 0.0, []
    for name, (g, m) in cases.items():
        assert g.n_arcs <= 200
        bal = balance_unmarked_assignment(g, m)
        state, report = construct_optimal(g, m, bal.assignment)
        norm, _ = project_initial(one_eigenspace(materialize(g, m)))
        gap = abs(abs(report.overlap_with_initial) - norm)
        worst = max(worst, gap)
        parts.append(f"{name} {gap:.1e}")
    return worst <= 1e-8, "; ".join(parts)


def _random_state_for(rng, g, m, variant, kind: int) -> WalkState:
    if kind == 0:
        return WalkState(rng.standard_normal(g.n_arcs), g)
    basis = one_eigenspace(materialize(g, m, variant)).vectors
    if basis.shape[1] == 0:
        return WalkState(rng.standard_normal(g.n_arcs), g)
    amps = basis @ rng.standard_normal(basis.shape[1])
    amps /= np.linalg.norm(amps)
    if kind == 2:
        amps = amps + 1e-6 * rng.standard_normal(g.n_arcs)
    elif kind == 3:
        amps = amps + 1e-14 * rng.standard_normal(g.n_arcs)
    return WalkState(amps, g)


@_timed(3, "condition/operator equivalence", 60.0)
def criterion_condition_equivalence(trials: int = 1000, seed: int = 3) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    tol = 1e-10
    disagreements = 0
    stationary_seen = 0
    for t in range(trials):
        g = fx.random_graph(rng, 12)
        m = fx.random_marked(rng, g)
        for variant in Variant:
            state = _random_state_for(rng, g, m, variant, t % 4)
            verdict = check_stationary(state, m, variant, tol).is_stationary
            moved = apply_step(state, StepOperator(variant, m)).amplitudes - state.amplitudes
            direct = float(np.max(np.abs(moved))) <= tol
            disagreements += verdict != direct
            stationary_seen += direct
    return disagreements == 0, (
        f"{disagreements} disagreements over {2 * trials} checks ({stationary_seen} stationary)"
    )


@_timed(4, "bipartite existence failure", 5.0)
def criterion_existence_failure() -> tuple[bool, str]:
    parts, ok = [], True
    for name, (g, m) in {
        "two-vertex path": fx.two_vertex_path(),
        "unequal pair": fx.unequal_pair_host(),
    }.items():
        try:
            construct_optimal(g, m)
            ok = False
            parts.append(f"{name}: constructed")
        except ExistenceError as exc:
            _, sx, sy = exc.failures[0]
            parts.append(f"{name}: failure (X {sx:g} vs Y {sy:g})")
        ok &= not balance_unmarked_assignment(g, m).feasible
    g, m = fx.two_vertex_path()
    norm, _ = project_initial(one_eigenspace(materialize(g, m)))
    ok &= norm <= 1e-9
    parts.append(f"path projection norm {norm:.1e}")
    return ok, "; ".join(parts)


@_timed(5, "odd-cycle assignment totality", 30.0)
def criterion_non_bipartite(trials: int = 500, seed: int = 5) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        g = fx.random_non_bipartite(rng, 15)
        comp = range(g.n_vertices)
        s = dict(enumerate(rng.standard_normal(g.n_vertices)))
        values = assign_non_bipartite(g, comp, s)
        if len(values) != g.n_edges:
            return False, "assignment misses an internal edge"
        sums = vertex_sums(values)
        worst = max(worst, max(abs(sums[v] - s[v]) for v in comp))
    return worst <= 1e-10, f"{trials} components, worst vertex-sum error {worst:.1e}"


@_timed(6, "disjoint unmarked balance 3:2", 1.0)
def criterion_balance() -> tuple[bool, str]:
    g, m = fx.disjoint_unmarked_pair()
    bal = balance_unmarked_assignment(g, m)
    if not bal.feasible:
        return False, "reported infeasible"
    a, b = bal.assignment
    _, report = construct_optimal(g, m, bal.assignment)
    ok = abs(a / b - 1.5) <= 1e-12 and report.is_stationary
    return ok, f"a:b = {a / b:.15g}, residual {report.max_residual:.1e}"


@_timed(7, "SKW stationary states orthogonal", 120.0)
def criterion_skw(trials: int = 200, seed: int = 7) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst_overlap = worst_anti = 0.0
    total = 0
    for _ in range(trials):
        g = fx.random_graph(rng, 10, connected=True)
        m = fx.random_marked(rng, g, nonempty=True)
        basis = one_eigenspace(materialize(g, m, Variant.SKW_U_PRIME))
        rep = skw_orthogonality_check(g, m, basis.states(), tol=1e-9, antisymmetry_tol=1e-8)
        total += basis.dimension
        worst_overlap = max([worst_overlap, *rep.overlaps])
        worst_anti = max([worst_anti, *rep.antisymmetry_residuals])
    ok = worst_overlap <= 1e-9 and worst_anti <= 1e-8
    return ok, (
        f"{total} basis vectors, max overlap {worst_overlap:.1e}, "
        f"max antisymmetry residual {worst_anti:.1e}"
    )


def complete_graph_peak(n: int, k: int, variant: Variant | str, predicted: int) -> tuple[int, float]:
    """First-lobe peak: best step in ``[0, 2 * predicted]``."""
    g = complete(n)
    m = marked_structure(g, range(k))
    return simulate(g, m, variant, 2 * predicted).peak()


@_timed(8, "complete-graph dynamics", 60.0)
def criterion_complete_graph() -> tuple[bool, str]:
    n = 256
    rt = math.sqrt(n)
    checks = []
    t1 = round(math.pi * rt / (2 * math.sqrt(2)))
    step, p = complete_graph_peak(n, 1, Variant.GROVER_U, t1)
    checks.append((0.40 <= p <= 0.60 and abs(step - t1) <= 2, f"k=1 U: {p:.3f}@{step} (t*={t1})"))
    k = 2
    t2 = round(math.pi * rt / math.sqrt(2 * (2 * k - 1)))
    target = 4 * k * (k - 1) / (2 * k - 1) ** 2
    step, p = complete_graph_peak(n, k, Variant.GROVER_U, t2)
    checks.append((abs(p - target) <= 0.06 and abs(step - t2) <= 2, f"k=2 U: {p:.3f}@{step} (t*={t2})"))
    t3 = round(math.pi * rt / (2 * math.sqrt(2 * k)))
    step, p = complete_graph_peak(n, k, Variant.SKW_U_PRIME, t3)
    checks.append((0.40 <= p <= 0.60 and abs(step - t3) <= 2, f"k=2 U': {p:.3f}@{step} (t*={t3})"))
    return all(c for c, _ in checks), "; ".join(d for _, d in checks)


@_timed(9, "trapping on 20x20 torus", 120.0)
def criterion_trapping() -> tuple[bool, str]:
    g, pair = fx.torus_pair(20, 20)
    n = g.n_vertices
    steps = math.ceil(10 * math.sqrt(n * math.log(n)))
    tr_pair = simulate(g, pair, Variant.GROVER_U, steps)
    single = marked_structure(g, {min(pair.members)})
    tr_single = simulate(g, single, Variant.GROVER_U, steps)
    r_pair = tr_pair.success_probability.max() / tr_pair.success_probability[0]
    r_single = tr_single.success_probability.max() / tr_single.success_probability[0]
    ok = r_pair < 3 and r_single > 10
    return ok, f"{steps} steps: pair max/initial {r_pair:.2f}, single max/initial {r_single:.1f}"


@_timed(10, "pair overlap closed form", 5.0)
def criterion_overlap_formula() -> tuple[bool, str]:
    # direct summation over the explicit 48 amplitudes first
    g, m = fx.torus_pair(4, 3)
    ref = fx.pair_state(g, tuple(sorted(m.members))).normalized()
    direct = float(np.dot(initial_state(g).amplitudes, ref.amplitudes)) ** 2
    ok = abs(direct - fx.pair_overlap_squared(12)) <= 1e-12
    parts = [f"4x3 direct {direct:.12f}"]
    for rows, cols in [(4, 3), (10, 10), (20, 20)]:
        g, m = fx.torus_pair(rows, cols)
        _, report = construct_optimal(g, m)
        err = abs(report.overlap_with_initial ** 2 - fx.pair_overlap_squared(rows * cols))
        ok &= err <= 1e-12
        parts.append(f"{rows}x{cols} err {err:.1e}")
    return ok, "; ".join(parts)


CRITERIA = [
    criterion_pair_state,
    criterion_optimality,
    criterion_condition_equivalence,
    criterion_existence_failure,
    criterion_non_bipartite,
    criterion_balance,
    criterion_skw,
    criterion_complete_graph,
    criterion_trapping,
    criterion_overlap_formula,
]


def run_all(echo: Callable[[str], None] = print) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        res = crit()
        echo(res.line())
        results.append(res)
    return results


"""
Arc-space states and the matrix-free coined walk operators.

All operators act on real amplitude vectors indexed by arcs (see
:mod:`qwalk.graph`); the oracle, Grover coin and flip-flop shift are real
orthogonal, so nothing complex is ever needed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .graph import Graph, MarkedSet

__all__ = [
    "Variant",
    "WalkState",
    "StepOperator",
    "Trajectory",
    "GraphMismatchError",
    "NumericalHealthError",
    "initial_state",
    "basis_state",
    "apply_oracle",
    "apply_coin",
    "apply_shift",
    "apply_step",
    "simulate",
    "inner_product",
    "vertex_means",
]

NORM_DRIFT_LIMIT = 1e-9


class GraphMismatchError(ValueError):
    pass


class NumericalHealthError(RuntimeError):
    """Raised when a simulation's state norm drifts beyond tolerance."""


class Variant(str, enum.Enum):
    GROVER_U = "grover"
    SKW_U_PRIME = "skw"

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise ValueError(f"unknown oracle variant {value!r} (expected 'grover' or 'skw')")


@dataclass(frozen=True)
class WalkState:
    """Real amplitudes on the arcs of ``graph``; not necessarily normalized."""

    amplitudes: np.ndarray
    graph: Graph

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.float64)
        if amps.shape != (self.graph.n_arcs,):
            raise ValueError(
                f"state has shape {amps.shape}, graph needs ({self.graph.n_arcs},)"
            )
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "WalkState":
        nrm = self.norm()
        if nrm == 0.0:
            raise ZeroDivisionError("cannot normalize the zero state")
        return WalkState(self.amplitudes / nrm, self.graph)

    def __getitem__(self, arc: tuple[int, int]) -> float:
        u, v = arc
        return float(self.amplitudes[self.graph.arc(u, v)])

    def directional(self, v: int) -> np.ndarray:
        """Amplitudes on the arcs leaving ``v`` (neighbour order)."""
        g = self.graph
        return self.amplitudes[g.offsets[v]:g.offsets[v + 1]]


@dataclass(frozen=True)
class StepOperator:
    variant: Variant
    marked: MarkedSet

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))

    def __call__(self, state: WalkState) -> WalkState:
        return apply_step(state, self)


@dataclass
class Trajectory:
    steps: np.ndarray
    success_probability: np.ndarray
    norm: np.ndarray

    def peak(self) -> tuple[int, float]:
        i = int(np.argmax(self.success_probability))
        return int(self.steps[i]), float(self.success_probability[i])

    def to_csv(self) -> str:
        lines = ["step,success_probability,norm"]
        lines += [
            f"{int(t)},{float(p)!r},{float(n)!r}"
            for t, p, n in zip(self.steps, self.success_probability, self.norm)
        ]
        return "\n".join(lines) + "\n"


def _same_graph(a: Graph, b: Graph) -> None:
    if a is not b and a != b:
        raise GraphMismatchError("state and marked set are bound to different graphs")


def initial_state(g: Graph) -> WalkState:
    """Uniform superposition over all ``2|E|`` arcs."""
    return WalkState(np.full(g.n_arcs, 1.0 / np.sqrt(g.n_arcs)), g)


def basis_state(g: Graph, u: int, v: int) -> WalkState:
    amps = np.zeros(g.n_arcs)
    amps[g.arc(u, v)] = 1.0
    return WalkState(amps, g)


def vertex_means(state: WalkState) -> np.ndarray:
    """Mean outgoing amplitude of every vertex."""
    g = state.graph
    return np.add.reduceat(state.amplitudes, g.offsets[:-1]) / g.degrees


def apply_oracle(state: WalkState, marked: MarkedSet) -> WalkState:
    _same_graph(state.graph, marked.graph)
    amps = np.where(marked.arc_mask, -state.amplitudes, state.amplitudes)
    return WalkState(amps, state.graph)


def apply_coin(state: WalkState) -> WalkState:
    """Grover diffusion at every vertex: ``alpha -> 2*mean - alpha``."""
    means = vertex_means(state)
    return WalkState(2.0 * means[state.graph.sources] - state.amplitudes, state.graph)


def apply_shift(state: WalkState) -> WalkState:
    """Flip-flop shift: swap the amplitudes on ``(u, v)`` and ``(v, u)``."""
    return WalkState(state.amplitudes[state.graph.reverse], state.graph)


def apply_step(state: WalkState, op: StepOperator) -> WalkState:
    """
    One search step.

    ``GROVER_U`` is ``S C Q``. ``SKW_U_PRIME`` applies the Grover coin at
    unmarked vertices and ``-I`` at marked vertices, then shifts.
    """
    _same_graph(state.graph, op.marked.graph)
    if op.variant is Variant.GROVER_U:
        return apply_shift(apply_coin(apply_oracle(state, op.marked)))
    coined = apply_coin(state).amplitudes
    amps = np.where(op.marked.arc_mask, -state.amplitudes, coined)
    return apply_shift(WalkState(amps, state.graph))


def inner_product(a: WalkState, b: WalkState) -> float:
    _same_graph(a.graph, b.graph)
    return float(np.dot(a.amplitudes, b.amplitudes))


def simulate(
    g: Graph,
    marked: MarkedSet,
    variant: Variant | str | StepOperator,
    steps: int,
) -> Trajectory:
    """
    Run the search from the uniform state and record every step ``0..steps``.

    Success probability is the total probability on arcs leaving marked
    vertices.

    Raises
    ------
    NumericalHealthError
        If the norm drifts from 1 by more than ``1e-9``.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    op = variant if isinstance(variant, StepOperator) else StepOperator(variant, marked)
    _same_graph(g, op.marked.graph)
    arc_mask = op.marked.arc_mask

    state = initial_state(g)
    probs = np.empty(steps + 1)
    norms = np.empty(steps + 1)
    for t in range(steps + 1):
        if t:
            state = apply_step(state, op)
        sq = state.amplitudes ** 2
        norms[t] = np.sqrt(sq.sum())
        if abs(norms[t] - 1.0) > NORM_DRIFT_LIMIT:
            raise NumericalHealthError(f"norm drifted to {norms[t]!r} at step {t}")
        probs[t] = sq[arc_mask].sum()
    return Trajectory(np.arange(steps + 1), probs, norms)

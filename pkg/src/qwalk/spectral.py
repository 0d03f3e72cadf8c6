"""
Dense brute-force oracle for small graphs.

The step operators are assembled here from explicit shift, coin and oracle
matrices, independently of the streaming code in :mod:`qwalk.walk`, and the
eigenvalue-1 subspace is read off an SVD of ``M - I``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, MarkedSet
from .walk import Variant, WalkState, initial_state

__all__ = [
    "SizeCapError",
    "DenseOperator",
    "EigenspaceBasis",
    "materialize",
    "one_eigenspace",
    "project_initial",
]

DEFAULT_MAX_ARCS = 2000
NULL_THRESHOLD = 1e-9


class SizeCapError(ValueError):
    pass


@dataclass(frozen=True)
class DenseOperator:
    matrix: np.ndarray
    variant: Variant
    graph: Graph
    marked: MarkedSet

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class EigenspaceBasis:
    """Orthonormal basis of the eigenvalue-1 subspace, one vector per column."""

    vectors: np.ndarray
    graph: Graph

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def states(self) -> list[WalkState]:
        return [WalkState(self.vectors[:, j], self.graph) for j in range(self.dimension)]


def _shift_matrix(g: Graph) -> np.ndarray:
    n = g.n_arcs
    s = np.zeros((n, n))
    for a in range(n):
        u, v = int(g.sources[a]), int(g.targets[a])
        s[g.arc(v, u), a] = 1.0
    return s


def _coin_matrix(g: Graph, minus_identity_at: np.ndarray | None = None) -> np.ndarray:
    n = g.n_arcs
    c = np.zeros((n, n))
    for v in range(g.n_vertices):
        lo, hi = int(g.offsets[v]), int(g.offsets[v + 1])
        d = hi - lo
        if minus_identity_at is not None and minus_identity_at[v]:
            c[lo:hi, lo:hi] = -np.eye(d)
        else:
            c[lo:hi, lo:hi] = np.full((d, d), 2.0 / d) - np.eye(d)
    return c


def materialize(
    g: Graph,
    marked: MarkedSet,
    variant: Variant | str = Variant.GROVER_U,
    max_arcs: int = DEFAULT_MAX_ARCS,
) -> DenseOperator:
    """
    Dense matrix of one search step.

    Raises
    ------
    SizeCapError
        If ``2|E|`` exceeds ``max_arcs``.
    """
    variant = Variant.parse(variant)
    if g.n_arcs > max_arcs:
        raise SizeCapError(f"2|E| = {g.n_arcs} exceeds the dense cap of {max_arcs}")
    shift = _shift_matrix(g)
    if variant is Variant.GROVER_U:
        oracle = np.diag(np.where(marked.arc_mask, -1.0, 1.0))
        mat = shift @ _coin_matrix(g) @ oracle
    else:
        mat = shift @ _coin_matrix(g, minus_identity_at=marked.mask)
    dev = np.max(np.abs(mat.T @ mat - np.eye(g.n_arcs)))
    if dev > 1e-12:
        raise ArithmeticError(f"assembled step operator is not orthogonal (deviation {dev:.2e})")
    return DenseOperator(mat, variant, g, marked)


def one_eigenspace(op: DenseOperator, threshold: float = NULL_THRESHOLD) -> EigenspaceBasis:
    """Null space of ``M - I``: right singular vectors with singular value <= ``threshold``."""
    a = op.matrix - np.eye(op.size)
    _, sv, vh = np.linalg.svd(a)
    return EigenspaceBasis(vh[sv <= threshold].T.copy(), op.graph)


def project_initial(basis: EigenspaceBasis, g: Graph | None = None) -> tuple[float, WalkState]:
    """
    Project the uniform initial state onto the stationary subspace.

    Returns ``(norm, projection)``; the projection is not normalized. When the
    norm is positive, projection/norm is the maximal-overlap stationary state
    and its overlap with the initial state equals the norm.
    """
    g = basis.graph if g is None else g
    psi0 = initial_state(g).amplitudes
    b = basis.vectors
    proj = b @ (b.T @ psi0)
    return float(np.linalg.norm(proj)), WalkState(proj, g)

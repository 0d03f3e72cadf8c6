"""JSON encoding of states, reports and eigenspace bases.

Output is canonical: keys sorted, floats in shortest round-trip form, so the
same inputs always produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .graph import Graph, MarkedSet
from .walk import WalkState

__all__ = ["dumps", "state_to_dict", "state_from_dict", "basis_to_dict", "SerializationError"]


class SerializationError(ValueError):
    pass


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def state_to_dict(state: WalkState, marked: MarkedSet | None = None) -> dict:
    g = state.graph
    amps = [
        {"from": int(u), "to": int(v), "value": float(x)}
        for u, v, x in zip(g.sources, g.targets, state.amplitudes)
    ]
    return {
        "graph_hash": g.fingerprint(),
        "marked": sorted(marked.members) if marked is not None else [],
        "amplitudes": amps,
        "normalized": bool(abs(state.norm() - 1.0) <= 1e-12),
    }


def state_from_dict(data: dict, g: Graph) -> tuple[WalkState, list[int]]:
    """
    Rebuild a state on ``g``; returns ``(state, marked ids)``.

    Accepts either a bare state object or one wrapped as ``{"state": {...}}``.
    """
    if "state" in data and "amplitudes" not in data:
        data = data["state"]
    try:
        h = data["graph_hash"]
        entries = data["amplitudes"]
    except (KeyError, TypeError):
        raise SerializationError("state JSON needs 'graph_hash' and 'amplitudes'") from None
    if h != g.fingerprint():
        raise SerializationError("state was written for a different graph (graph_hash mismatch)")
    amps = np.full(g.n_arcs, np.nan)
    for e in entries:
        try:
            a = g.arc(int(e["from"]), int(e["to"]))
        except KeyError:
            raise SerializationError(f"arc ({e.get('from')}, {e.get('to')}) is not in the graph") from None
        amps[a] = float(e["value"])
    if np.isnan(amps).any():
        missing = int(np.isnan(amps).sum())
        raise SerializationError(f"state JSON misses {missing} arc amplitude(s)")
    return WalkState(amps, g), [int(v) for v in data.get("marked", [])]


def basis_to_dict(vectors: np.ndarray, g: Graph) -> dict:
    return {
        "graph_hash": g.fingerprint(),
        "arcs": [[int(u), int(v)] for u, v in zip(g.sources, g.targets)],
        "dimension": int(vectors.shape[1]),
        "vectors": [vectors[:, j].tolist() for j in range(vectors.shape[1])],
    }

"""Toric-code decoding by exact minimum-weight perfect matching.

One matching graph per sector: nodes are the checks that detect the
sector's errors, one edge per qubit (on the torus every qubit touches
exactly two checks of each type). Two weighting modes mirror the two
baselines: `weights_uninformed` assigns the same constant to every edge
(the erasure rate only enters run metadata as q = p/2, since constant
weights make the matching minimize edge count regardless), and
`weights_erasure_aware` assigns weight 0 to erased qubits and the qubit
count n to the rest, forcing corrections through known erasures. Weighted
graphs are rebuilt per shot in erasure-aware mode; the topology is cached.

mwpm_decode is exact in the primary objective (total edge weight), with a
deterministic secondary preference for fewer-edge paths. Two-level {0, W}
weights route through an erased-cluster contraction (odd-parity clusters
are matched by contracted hop distance); everything else runs per-defect
Dijkstra with composite integer costs. Both paths end in the same exact
blossom matcher and both verify that the correction clears the syndrome.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _blossom
from .codes import CssCode


@dataclass
class MatchingGraph:
    """Per-sector decoding graph; edge j corresponds to qubit j."""

    n_nodes: int
    edges: np.ndarray  # (E, 2) int64 check endpoints
    weights: np.ndarray  # (E,) int64, nonnegative
    tie_rank: np.ndarray  # (E,) int64 secondary key (path edge count)
    sector: str
    meta: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def build_matching_graph(code: CssCode, sector: str) -> MatchingGraph:
    """Graph for decoding `sector` errors of a toric code: X errors are
    matched on the Z checks (hz) and Z errors on the X checks (hx)."""
    if code.family != "Toric":
        raise ValueError(f"matching decoder supports toric codes only, got {code.family}")
    if sector not in ("X", "Z"):
        raise ValueError(f"sector must be 'X' or 'Z', got {sector!r}")
    h = code.hz if sector == "X" else code.hx
    dense = h.to_dense()
    if not (dense.sum(axis=0) == 2).all():
        raise ValueError("each qubit must touch exactly 2 checks in this sector")
    _, check_idx = np.nonzero(dense.T)  # per qubit, its two checks ascending
    endpoints = check_idx.reshape(h.cols, 2).astype(np.int64)
    return MatchingGraph(
        n_nodes=h.rows,
        edges=np.ascontiguousarray(endpoints),
        weights=np.ones(h.cols, dtype=np.int64),
        tie_rank=np.ones(h.cols, dtype=np.int64),
        sector=sector,
        meta={"code": code.name},
    )


def weights_uninformed(graph: MatchingGraph, p: float) -> MatchingGraph:
    """Constant edge weights; q = p/2 is recorded but cannot change the
    matching."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure rate must be in [0, 1], got {p}")
    g = replace(
        graph,
        weights=np.ones(graph.n_edges, dtype=np.int64),
        tie_rank=np.ones(graph.n_edges, dtype=np.int64),
        meta={**graph.meta, "mode": "uninformed", "q_effective": p / 2.0},
    )
    g._cache = graph._cache  # topology unchanged
    return g


def weights_erasure_aware(graph: MatchingGraph, erased: np.ndarray) -> MatchingGraph:
    """Weight 0 on erased qubits, n (the qubit count) elsewhere; fresh
    weighted view per shot."""
    erased = np.asarray(erased, dtype=bool)
    if len(erased) != graph.n_edges:
        raise ValueError(f"erasure mask length {len(erased)} != edges {graph.n_edges}")
    weights = np.where(erased, 0, graph.n_edges).astype(np.int64)
    g = replace(
        graph,
        weights=weights,
        tie_rank=np.ones(graph.n_edges, dtype=np.int64),
        meta={**graph.meta, "mode": "erasure-aware"},
    )
    g._cache = graph._cache
    return g


def _adjacency(graph: MatchingGraph):
    cached = graph._cache.get("adjacency")
    if cached is None:
        e = graph.n_edges
        nodes = np.concatenate([graph.edges[:, 0], graph.edges[:, 1]])
        others = np.concatenate([graph.edges[:, 1], graph.edges[:, 0]])
        eids = np.concatenate([np.arange(e), np.arange(e)])
        order = np.lexsort((eids, nodes))
        indptr = np.zeros(graph.n_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(nodes, minlength=graph.n_nodes), out=indptr[1:])
        cached = (
            indptr,
            others[order].astype(np.int64),
            eids[order].astype(np.int64),
        )
        graph._cache["adjacency"] = cached
    return cached


def mwpm_decode(graph: MatchingGraph, syndrome: np.ndarray) -> np.ndarray:
    """Exact minimum-weight perfect matching of the syndrome defects under
    the shortest-path metric of the weighted graph; returns the per-qubit
    correction (XOR of the matched paths' edge sets)."""
    syndrome = np.asarray(syndrome, dtype=np.uint8)
    if len(syndrome) != graph.n_nodes:
        raise ValueError(f"syndrome length {len(syndrome)} != nodes {graph.n_nodes}")
    if int(syndrome.sum()) % 2 != 0:
        raise RuntimeError("odd-weight syndrome violates torus parity")

    if not syndrome.any():
        return np.zeros(graph.n_edges, dtype=np.uint8)

    levels = np.unique(graph.weights)
    if levels[0] == 0 and len(levels) <= 2:
        correction = _decode_cluster(graph, syndrome)
    else:
        correction = _decode_general(graph, syndrome)

    # a wrong matching here would silently corrupt WER statistics
    check = np.zeros(graph.n_nodes, dtype=np.int64)
    sel = correction != 0
    np.add.at(check, graph.edges[sel, 0], 1)
    np.add.at(check, graph.edges[sel, 1], 1)
    if not np.array_equal((check & 1).astype(np.uint8), syndrome):
        raise RuntimeError("matching correction failed to clear the syndrome")
    return correction


def _decode_cluster(graph: MatchingGraph, syndrome: np.ndarray) -> np.ndarray:
    """Fast path for two-level {0, W} weights via erased-cluster contraction."""
    return _blossom.cluster_decode(
        np.ascontiguousarray(graph.edges[:, 0]),
        np.ascontiguousarray(graph.edges[:, 1]),
        graph.weights == 0,
        syndrome,
        graph.n_nodes,
    )


def _decode_general(graph: MatchingGraph, syndrome: np.ndarray) -> np.ndarray:
    """General path: per-defect Dijkstra over composite integer costs
    (weight first, then path edge count), then blossom on the defect graph."""
    defects = np.flatnonzero(syndrome).astype(np.int64)
    indptr, nbr_node, nbr_edge = _adjacency(graph)
    scale = np.int64(graph.n_edges) * np.int64(graph.n_nodes) + 1
    cost = graph.weights * scale + graph.tie_rank
    return _blossom.general_decode(
        indptr,
        nbr_node,
        nbr_edge,
        cost,
        np.ascontiguousarray(graph.edges[:, 0]),
        np.ascontiguousarray(graph.edges[:, 1]),
        defects,
        graph.n_edges,
    )


def matching_weight(graph: MatchingGraph, correction: np.ndarray) -> int:
    """Total primary weight of a correction, for diagnostics and tests."""
    return int(graph.weights[np.asarray(correction, dtype=bool)].sum())

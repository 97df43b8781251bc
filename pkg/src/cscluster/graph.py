"""Undirected weighted graphs in canonical CSR form and the normalized Laplacian.

The Laplacian used everywhere in this package is L = I - D^{-1/2} W D^{-1/2},
whose spectrum lies in [0, 2]. Zero-degree nodes get d^{-1/2} = 0, so L acts
as the identity on their coordinate; they are flagged because the clustering
pipeline has to treat them separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Invalid edge data or malformed edge-list input."""


@dataclass
class Graph:
    """Symmetric graph stored as canonical CSR (sorted, deduplicated, no loops).

    Invariants: weights >= 0, zero diagonal, W == W.T exactly, column indices
    strictly increasing within each row, ``degrees`` equal to row sums.
    """

    num_nodes: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    degrees: np.ndarray
    _csr: sp.csr_matrix | None = field(default=None, repr=False, compare=False)

    @property
    def num_edges(self) -> int:
        """Number of undirected edges (stored entry pairs / 2)."""
        return int(self.indices.size) // 2

    @property
    def isolated_nodes(self) -> np.ndarray:
        """Indices of zero-degree nodes."""
        return np.flatnonzero(self.degrees == 0.0)

    def adjacency(self) -> sp.csr_matrix:
        """CSR view of the adjacency matrix (shared buffers, do not mutate)."""
        if self._csr is None:
            self._csr = sp.csr_matrix(
                (self.weights, self.indices, self.indptr),
                shape=(self.num_nodes, self.num_nodes),
            )
        return self._csr


def _from_scipy(A: sp.spmatrix, num_nodes: int) -> Graph:
    A = sp.csr_matrix(A)
    A.sum_duplicates()
    A.sort_indices()
    A.eliminate_zeros()
    degrees = np.asarray(A.sum(axis=1)).ravel().astype(np.float64)
    return Graph(
        num_nodes=num_nodes,
        indptr=A.indptr.copy(),
        indices=A.indices.copy(),
        weights=A.data.astype(np.float64, copy=True),
        degrees=degrees,
    )


def build_graph(
    edges: Iterable[Sequence[float]] | np.ndarray,
    num_nodes: int | None = None,
    *,
    self_loops: str = "error",
) -> Graph:
    """Build a canonical symmetric graph from (i, j[, weight]) triples.

    Duplicate entries with the same direction are summed first; when both
    directions of an edge then carry different weights, the larger one wins.
    Missing weights default to 1.0.

    self_loops: "error" rejects i == j entries, "drop" silently removes them.
    """
    if self_loops not in ("error", "drop"):
        raise ValueError(f"self_loops must be 'error' or 'drop', got {self_loops!r}")
    arr = np.atleast_2d(np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.float64))
    if arr.size == 0:
        arr = arr.reshape(0, 3)
    if arr.shape[1] == 2:
        arr = np.column_stack([arr, np.ones(arr.shape[0])])
    elif arr.shape[1] != 3:
        raise GraphError(f"edges must be (i, j) or (i, j, w) rows, got shape {arr.shape}")

    src = arr[:, 0]
    dst = arr[:, 1]
    w = arr[:, 2]
    if not np.all(src == np.floor(src)) or not np.all(dst == np.floor(dst)):
        raise GraphError("node indices must be integers")
    src = src.astype(np.int64)
    dst = dst.astype(np.int64)
    if np.any(w < 0):
        bad = int(np.flatnonzero(w < 0)[0])
        raise GraphError(f"negative weight {w[bad]} on edge ({src[bad]}, {dst[bad]})")
    if np.any(src < 0) or np.any(dst < 0):
        raise GraphError("negative node index")

    if num_nodes is None:
        num_nodes = int(max(src.max(), dst.max())) + 1 if src.size else 0
    elif src.size and int(max(src.max(), dst.max())) >= num_nodes:
        raise GraphError(f"node index {int(max(src.max(), dst.max()))} out of range for num_nodes={num_nodes}")

    loops = src == dst
    if loops.any():
        if self_loops == "error":
            raise GraphError(f"self-loop on node {int(src[np.flatnonzero(loops)[0]])}")
        keep = ~loops
        src, dst, w = src[keep], dst[keep], w[keep]

    A = sp.coo_matrix((w, (src, dst)), shape=(num_nodes, num_nodes)).tocsr()
    A.sum_duplicates()
    W = A.maximum(A.T)  # max-symmetrization after per-direction summing
    return _from_scipy(W, num_nodes)


@dataclass
class LaplacianOp:
    """Matrix-free normalized Laplacian L = I - D^{-1/2} W D^{-1/2}.

    Immutable after construction; ``apply`` is reentrant and works columnwise
    on matrices. Cost of one application is O(#E).
    """

    graph: Graph
    d_inv_sqrt: np.ndarray

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @property
    def shape(self) -> tuple[int, int]:
        return (self.graph.num_nodes, self.graph.num_nodes)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Return L x for a vector or an N-row matrix of signals."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.num_nodes:
            raise ValueError(f"signal has {x.shape[0]} rows, graph has {self.num_nodes} nodes")
        W = self.graph.adjacency()
        if x.ndim == 1:
            return x - self.d_inv_sqrt * (W @ (self.d_inv_sqrt * x))
        return x - self.d_inv_sqrt[:, None] * (W @ (self.d_inv_sqrt[:, None] * x))

    def dense(self) -> np.ndarray:
        """Dense N x N Laplacian (test/oracle use; O(N^2) memory)."""
        W = self.graph.adjacency().toarray()
        S = self.d_inv_sqrt
        return np.eye(self.num_nodes) - S[:, None] * W * S[None, :]


def laplacian_op(graph: Graph) -> LaplacianOp:
    """Build the normalized Laplacian operator; zero-degree entries get 0."""
    d = graph.degrees
    with np.errstate(divide="ignore"):
        dis = np.where(d > 0, 1.0 / np.sqrt(np.where(d > 0, d, 1.0)), 0.0)
    return LaplacianOp(graph=graph, d_inv_sqrt=dis)


def apply_laplacian(op: LaplacianOp, x: np.ndarray) -> np.ndarray:
    """Functional alias for ``op.apply(x)``."""
    return op.apply(x)


def read_edge_list(path: str | Path, num_nodes: int | None = None) -> Graph:
    """Parse a whitespace-separated edge list: ``src dst [weight]`` per line.

    0-based indices, ``#`` comment lines skipped, missing weight = 1.0.
    A ``# nodes <N>`` comment (as written by ``write_edge_list``) pins the
    node count so trailing isolated nodes survive a round trip; an explicit
    ``num_nodes`` argument overrides it.
    """
    path = Path(path)
    rows: list[tuple[int, int, float]] = []
    header_nodes = None
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                parts = stripped[1:].split()
                if len(parts) == 2 and parts[0] == "nodes":
                    try:
                        header_nodes = int(parts[1])
                    except ValueError:
                        pass
                continue
            parts = stripped.split()
            if len(parts) not in (2, 3):
                raise GraphError(f"{path}:{lineno}: expected 'src dst [weight]', got {stripped!r}")
            try:
                i = int(parts[0])
                j = int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise GraphError(f"{path}:{lineno}: {exc}") from None
            rows.append((i, j, w))
    if num_nodes is None:
        num_nodes = header_nodes
    arr = np.array(rows, dtype=np.float64).reshape(len(rows), 3)
    return build_graph(arr, num_nodes=num_nodes, self_loops="error")


def write_edge_list(graph: Graph, path: str | Path) -> None:
    """Write one ``src dst weight`` line per undirected edge (i < j)."""
    path = Path(path)
    W = graph.adjacency().tocoo()
    mask = W.row < W.col
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"# nodes {graph.num_nodes}\n")
        for i, j, w in zip(W.row[mask], W.col[mask], W.data[mask]):
            fh.write(f"{int(i)} {int(j)} {float(w)!r}\n")

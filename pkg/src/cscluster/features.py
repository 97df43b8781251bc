"""Random-signal feature vectors: filtered Gaussian signals, row-normalized.

Filtering d random signals with a low-pass polynomial at the k-th eigenvalue
gives every node a d-dimensional feature vector whose pairwise distances
approximate the spectral-clustering feature distances; the row normalization
stands in for the unknown local coherences, whose values the filtered row
norms approximate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .filters import PolyFilter, apply_filter
from .graph import LaplacianOp

logger = logging.getLogger(__name__)

_ZERO_ROW_TOL = 1e-300


@dataclass
class RandomSignals:
    """N x d matrix of i.i.d. random entries: gaussian N(0, 1/d) or
    bernoulli +-1/sqrt(d); either way E||column||^2 = N/d."""

    matrix: np.ndarray
    distribution: str
    seed: Any

    @property
    def num_signals(self) -> int:
        return int(self.matrix.shape[1])


@dataclass
class FeatureMatrix:
    """Per-node feature rows plus provenance of how they were produced."""

    rows: np.ndarray
    normalized: bool
    zero_rows: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    provenance: dict[str, Any] = field(default_factory=dict)


def generate_signals(
    num_nodes: int,
    num_signals: int,
    distribution: str = "gaussian",
    seed: int | np.random.Generator = 0,
) -> RandomSignals:
    """Draw the random signal matrix; reproducible for a given seed."""
    if num_signals < 1:
        raise ValueError("num_signals must be >= 1")
    if distribution not in ("gaussian", "bernoulli"):
        raise ValueError(f"unknown distribution {distribution!r}")
    rng = np.random.default_rng(seed)
    if distribution == "gaussian":
        matrix = rng.standard_normal((num_nodes, num_signals)) / np.sqrt(num_signals)
    else:
        matrix = (2.0 * rng.integers(0, 2, size=(num_nodes, num_signals)) - 1.0) / np.sqrt(num_signals)
    seed_repr = seed if isinstance(seed, int) else None
    return RandomSignals(matrix=matrix, distribution=distribution, seed=seed_repr)


def build_features(op: LaplacianOp, filt: PolyFilter, signals: RandomSignals) -> FeatureMatrix:
    """Filter the signals and normalize each node's row to unit length.

    Rows whose filtered norm underflows to zero are flagged, left as zero
    vectors, and should be excluded from sampling (they carry no usable
    geometry; interpolation still assigns them a label).
    """
    if signals.num_signals == 1:
        logger.warning("single random signal: rank-1 embedding, distances are degenerate")
    filtered = apply_filter(filt, op, signals.matrix)
    norms = np.linalg.norm(filtered, axis=1)
    zero_rows = np.flatnonzero(norms <= _ZERO_ROW_TOL)
    if zero_rows.size:
        logger.warning("%d feature row(s) with zero norm (nodes %s ...)", zero_rows.size, zero_rows[:10].tolist())
    safe = norms.copy()
    safe[zero_rows] = 1.0
    rows = filtered / safe[:, None]
    rows[zero_rows] = 0.0
    provenance = {
        "filter": {"cutoff": filt.cutoff, "order": filt.order, "damping": filt.damping, "kind": filt.kind},
        "distribution": signals.distribution,
        "seed": signals.seed,
    }
    return FeatureMatrix(rows=rows, normalized=True, zero_rows=zero_rows, provenance=provenance)


def pairwise_distance(features: FeatureMatrix, i: int, j: int) -> float:
    """Euclidean distance between the feature rows of nodes i and j."""
    return float(np.linalg.norm(features.rows[i] - features.rows[j]))


def save_features(features: FeatureMatrix, path) -> None:
    """Debug dump: JSON header line + row-major float64 payload."""
    import json
    from pathlib import Path

    header = {
        "num_nodes": int(features.rows.shape[0]),
        "num_signals": int(features.rows.shape[1]),
        "normalized": features.normalized,
        "zero_rows": features.zero_rows.tolist(),
        "provenance": features.provenance,
    }
    with Path(path).open("wb") as fh:
        fh.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        fh.write(np.ascontiguousarray(features.rows, dtype=np.float64).tobytes())


def load_features(path) -> FeatureMatrix:
    import json
    from pathlib import Path

    with Path(path).open("rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        payload = np.frombuffer(fh.read(), dtype=np.float64)
    rows = payload.reshape(header["num_nodes"], header["num_signals"]).copy()
    return FeatureMatrix(
        rows=rows,
        normalized=bool(header["normalized"]),
        zero_rows=np.asarray(header["zero_rows"], dtype=np.int64),
        provenance=header.get("provenance", {}),
    )

"""End-to-end compressive clustering: probe, filter, sample, cluster, lift.

Stage defaults follow the usual parameterization n = 2k log k, d = 4 log n,
p = 50, gamma = 1e-3 (natural logs, rounded up). All randomness derives from
one master seed through named per-stage substreams, so runs are reproducible
stage by stage.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from ._rng import substream, substream_seed
from .filters import design_lowpass, matched_highpass
from .graph import LaplacianOp
from .kmeans import KmeansConfig, kmeans, labels_to_indicators
from .oracle import DEFAULT_DENSE_CAP, EigenBasis, spectral_clustering
from .result import ClusterResult
from .features import build_features, generate_signals
from .sampling import InterpolationConfig, assign, draw_sampling, interpolate_all
from .spectrum import estimate_lambda_k


class DegenerateClusteringError(RuntimeError):
    """k-means on the sampled nodes produced an empty cluster even after repair."""


def default_num_samples(k: int) -> int:
    """n = ceil(2 k ln k)."""
    return int(math.ceil(2.0 * k * math.log(k)))


def default_num_signals(n: int) -> int:
    """d = ceil(4 ln n)."""
    return int(math.ceil(4.0 * math.log(max(n, 2))))


@dataclass
class CscParams:
    """Pipeline parameters; ``None`` means "derive the default".

    ``lambda_k`` skips the eigencount estimation stage when provided.
    """

    k: int
    n: int | None = None
    d: int | None = None
    p: int = 50
    gamma: float = 1e-3
    seed: int = 0
    lambda_k: float | None = None
    damping: str = "jackson"
    distribution: str = "gaussian"
    probe_signals: int | None = None
    probe_max_steps: int = 20
    probe_refine: bool = False
    solver_tol: float = 1e-6
    solver_max_iters: int = 1000
    kmeans: KmeansConfig | None = field(default=None, repr=False)

    def resolve(self, num_nodes: int) -> "CscParams":
        """Fill derived defaults for a concrete graph size and validate."""
        n = self.n if self.n is not None else min(default_num_samples(self.k), num_nodes)
        d = self.d if self.d is not None else default_num_signals(n)
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if n < self.k:
            raise ValueError(f"n={n} < k={self.k}: cannot sample fewer nodes than clusters")
        if n > num_nodes:
            raise ValueError(f"n={n} exceeds the number of nodes {num_nodes}")
        if d < 1 or self.p < 1:
            raise ValueError("d and p must be >= 1")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        km = self.kmeans or KmeansConfig(k=self.k, seed=substream_seed(self.seed, "kmeans"))
        if km.k != self.k:
            raise ValueError(f"kmeans config k={km.k} does not match k={self.k}")
        return replace(self, n=n, d=d, kmeans=km)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "k": self.k,
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "gamma": self.gamma,
            "seed": self.seed,
            "lambda_k": self.lambda_k,
            "damping": self.damping,
            "distribution": self.distribution,
            "probe_signals": self.probe_signals,
            "probe_max_steps": self.probe_max_steps,
            "probe_refine": self.probe_refine,
            "solver_tol": self.solver_tol,
            "solver_max_iters": self.solver_max_iters,
        }
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CscParams":
        known = {f for f in cls.__dataclass_fields__ if f != "kmeans"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown parameter(s): {sorted(unknown)}")
        return cls(**{k: v for k, v in data.items()})


def run_csc(op: LaplacianOp, params: CscParams) -> ClusterResult:
    """Compressive clustering of the graph behind ``op`` into params.k groups.

    Stages: (1) cut-off estimation by eigencount dichotomy, (2) damped
    low-pass design at the estimate, (3) random signal generation,
    (4) filtering + row normalization, (5) uniform node sampling,
    (6) k-means on the sampled feature rows, (7) interpolation of the k
    reduced indicators and argmax assignment.
    """
    N = op.num_nodes
    prm = params.resolve(N)
    timings: dict[str, float] = {}
    warnings: list[str] = []
    t_run = time.perf_counter()

    # 1. cut-off frequency
    t0 = time.perf_counter()
    if prm.lambda_k is not None:
        lam = float(prm.lambda_k)
        lambda_source = "override"
        probe_iterations = 0
        lambda_warning = False
    else:
        est = estimate_lambda_k(
            op,
            prm.k,
            order=prm.p,
            num_signals=prm.probe_signals,
            rng=substream(prm.seed, "probe"),
            max_steps=prm.probe_max_steps,
            refine=prm.probe_refine,
        )
        lam = est.lambda_k_hat
        lambda_source = "estimated"
        probe_iterations = est.iterations
        lambda_warning = est.warning
        if est.warning:
            warnings.append("lambda_k bracket fallback")
    timings["probe"] = time.perf_counter() - t0

    # 2. filters
    t0 = time.perf_counter()
    lowpass = design_lowpass(lam, prm.p, damping=prm.damping)
    highpass = matched_highpass(lowpass)
    timings["design"] = time.perf_counter() - t0

    # 3-4. random signals -> features
    t0 = time.perf_counter()
    signals = generate_signals(N, prm.d, prm.distribution, substream(prm.seed, "signals"))
    timings["signals"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    feats = build_features(op, lowpass, signals)
    timings["filter"] = time.perf_counter() - t0
    if feats.zero_rows.size:
        warnings.append(f"{feats.zero_rows.size} zero-norm feature rows")

    # 5. sampling
    t0 = time.perf_counter()
    sampling = draw_sampling(N, prm.n, substream(prm.seed, "sampling"), exclude=feats.zero_rows)
    timings["sampling"] = time.perf_counter() - t0

    # 6. reduced k-means
    t0 = time.perf_counter()
    labeling = kmeans(feats.rows[sampling.indices], prm.kmeans)
    counts = np.bincount(labeling.labels, minlength=prm.k)
    if np.any(counts == 0):
        raise DegenerateClusteringError(
            f"empty cluster(s) {np.flatnonzero(counts == 0).tolist()} in the reduced k-means"
        )
    reduced = labels_to_indicators(labeling.labels, prm.k, prm.n)
    timings["kmeans"] = time.perf_counter() - t0

    # 7. interpolation + assignment
    t0 = time.perf_counter()
    icfg = InterpolationConfig(
        highpass=highpass,
        gamma=prm.gamma,
        solver_tol=prm.solver_tol,
        solver_max_iters=prm.solver_max_iters,
    )
    soft, info = interpolate_all(op, icfg, sampling, reduced)
    labels, assign_info = assign(soft, return_info=True)
    timings["interpolate"] = time.perf_counter() - t0
    if not bool(np.all(info.converged)):
        warnings.append("interpolation solver did not reach tolerance")
    timings["total"] = time.perf_counter() - t_run

    diagnostics = {
        "method": "csc",
        "num_nodes": N,
        "num_edges": op.graph.num_edges,
        "k": prm.k,
        "n": prm.n,
        "d": prm.d,
        "p": prm.p,
        "gamma": prm.gamma,
        "seed": prm.seed,
        "lambda_k_hat": lam,
        "lambda_source": lambda_source,
        "lambda_warning": lambda_warning,
        "probe_iterations": probe_iterations,
        "kmeans_inertia": labeling.inertia,
        "kmeans_iterations": labeling.iterations_run,
        "solver_iterations": info.iterations.tolist(),
        "solver_residuals": info.residuals.tolist(),
        "solver_converged": info.converged.tolist(),
        "ridge": icfg.ridge,
        "zero_feature_rows": feats.zero_rows.tolist(),
        "assign_fallback_nodes": assign_info["fallback_nodes"].tolist(),
        "warnings": warnings,
        "timings": timings,
    }
    return ClusterResult(labels=labels, soft=soft, diagnostics=diagnostics)


def run_sc_baseline(
    op: LaplacianOp,
    k: int,
    kmeans_cfg: KmeansConfig | None = None,
    *,
    seed: int = 0,
    cap: int = DEFAULT_DENSE_CAP,
    basis: EigenBasis | None = None,
) -> ClusterResult:
    """Exact spectral clustering with the shared result schema."""
    cfg = kmeans_cfg or KmeansConfig(k=k, seed=substream_seed(seed, "kmeans"))
    return spectral_clustering(op, k, cfg, cap=cap, basis=basis)

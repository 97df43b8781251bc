"""Shared test utilities: independent oracles and small graph builders."""

from __future__ import annotations

import numpy as np

from cscluster import Graph, build_graph


def cliques_graph(k: int, size: int) -> tuple[Graph, np.ndarray]:
    """k disconnected complete graphs of the given size, unit weights."""
    edges = []
    for c in range(k):
        base = c * size
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((base + i, base + j, 1.0))
    truth = np.repeat(np.arange(k), size)
    return build_graph(edges, num_nodes=k * size), truth


def dense_normalized_laplacian(graph: Graph) -> np.ndarray:
    """Straightforward dense construction, independent of the operator code."""
    n = graph.num_nodes
    W = np.zeros((n, n))
    for i in range(n):
        for idx in range(graph.indptr[i], graph.indptr[i + 1]):
            W[i, graph.indices[idx]] = graph.weights[idx]
    d = W.sum(axis=1)
    L = np.eye(n)
    for i in range(n):
        for j in range(n):
            if W[i, j] != 0.0 and d[i] > 0 and d[j] > 0:
                L[i, j] -= W[i, j] / np.sqrt(d[i] * d[j])
    return L


def brute_force_ari(a, b) -> float:
    """Pair-agreement ARI computed from the four pair counts directly."""
    a = np.asarray(a)
    b = np.asarray(b)
    n = a.size
    n11 = n10 = n01 = n00 = 0
    for i in range(n):
        for j in range(i + 1, n):
            sa = a[i] == a[j]
            sb = b[i] == b[j]
            if sa and sb:
                n11 += 1
            elif sa and not sb:
                n10 += 1
            elif not sa and sb:
                n01 += 1
            else:
                n00 += 1
    num = 2.0 * (n11 * n00 - n10 * n01)
    den = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00)
    if den == 0:
        return 1.0
    return num / den


def all_partitions(n: int):
    """All set partitions of range(n) as label vectors (restricted growth strings)."""
    labels = [0] * n

    def rec(i: int, max_used: int):
        if i == n:
            yield tuple(labels)
            return
        for lab in range(max_used + 2):
            labels[i] = lab
            yield from rec(i + 1, max(max_used, lab))

    yield from rec(1, 0) if n > 0 else iter(())


def random_graph(n: int, density: float, rng: np.random.Generator, *, weighted: bool = True) -> Graph:
    """Erdos-Renyi-ish random graph with optional uniform random weights."""
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                w = rng.uniform(0.2, 2.0) if weighted else 1.0
                edges.append((i, j, w))
    if not edges:
        edges = [(0, min(1, n - 1), 1.0)]
    return build_graph(edges, num_nodes=n)


def spectral_filter_apply(basis, response_at):
    """Exact spectral-domain filter application U h(Lambda) U^T X (test double)."""
    U = basis.eigenvectors
    h = response_at(basis.eigenvalues)

    def apply_fn(X):
        return U @ (h[:, None] * (U.T @ X)) if X.ndim == 2 else U @ (h * (U.T @ X))

    return apply_fn


def ideal_projector_apply(basis, lam: float):
    """Exact ideal low-pass (spectral projector) at the given cut-off."""
    return spectral_filter_apply(basis, lambda w: (w <= lam).astype(np.float64))

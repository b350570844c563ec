"""Shared fixtures and independent oracles used across the suite.

The oracles here deliberately avoid the library's own code paths:
correlation is re-done by triple-loop summation, density clustering by a
pairwise-distance union-find, so they can arbitrate the optimized
implementations.
"""

import math

import numpy as np
import pytest

from loomsense import Scenario, default_params, generate, run_sequence


def brute_correlate(field, kernel):
    """Direct-summation centered cross-correlation with replicate clamping."""
    field = np.asarray(field, dtype=float)
    kernel = np.asarray(kernel, dtype=float)
    h, w = field.shape
    r = kernel.shape[0] // 2
    out = np.zeros_like(field)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for j in range(-r, r + 1):
                for i in range(-r, r + 1):
                    yy = min(max(y + j, 0), h - 1)
                    xx = min(max(x + i, 0), w - 1)
                    acc += field[yy, xx] * kernel[j + r, i + r]
            out[y, x] = acc
    return out


def brute_dbscan(points, eps, min_pts):
    """Reference DBSCAN: pairwise distances, union-find over core points.

    Returns a label per input point (noise = -1) under the same
    deterministic semantics as the library: clusters numbered by the
    row-major rank of their first core point, contested border points
    joining the lowest-numbered cluster.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n == 0:
        return np.array([], dtype=int)
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    within = d2 <= eps * eps
    core = within.sum(axis=1) >= min_pts

    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        if not core[i]:
            continue
        for j in range(i + 1, n):
            if core[j] and within[i, j]:
                parent[find(j)] = find(i)

    rank = np.lexsort((pts[:, 0], pts[:, 1]))  # row-major order of the points
    labels = np.full(n, -1, dtype=int)
    roots = {}
    for idx in rank:
        if core[idx]:
            root = find(idx)
            if root not in roots:
                roots[root] = len(roots)
            labels[idx] = roots[root]
    order = {root: num for root, num in roots.items()}
    for idx in rank:
        if labels[idx] != -1:
            continue
        best = None
        for j in range(n):
            if core[j] and within[idx, j]:
                num = order[find(j)]
                best = num if best is None else min(best, num)
        if best is not None:
            labels[idx] = best
    return labels


def partition_of(points, labels):
    """Frozen-set partition (noise dropped) for order-insensitive comparison."""
    groups = {}
    for (x, y), label in zip(points, labels):
        if label == -1:
            continue
        groups.setdefault(label, set()).add((int(x), int(y)))
    return frozenset(frozenset(g) for g in groups.values())


def normalized(frames):
    return [np.asarray(f, dtype=float) / 255.0 for f in frames]


LOOMING_WEIGHTS = (1.0, 1.0, 1.0, 0.0, 0.5, 0.0)
TRANSLATION_WEIGHTS = (1.0, 1.0, 0.4, 1.0, 0.0, 0.0)
# the clutter scenario weighs the OFF channel above the ON channel
CLUTTER_WEIGHTS = (1.0, 1.0, 0.5, 0.0, 1.0, 0.0)


class RunCache:
    """Session-wide cache of full scenario runs (they cost ~2 s each)."""

    def __init__(self):
        self._runs = {}

    def reports(self, scenario: Scenario, weights, force_m_d=None, collect_targets=False):
        key = (scenario, tuple(weights), force_m_d, collect_targets)
        if key not in self._runs:
            params = default_params().replace(channel_weights=tuple(weights))
            frames = normalized(generate(scenario))
            self._runs[key] = run_sequence(
                params, frames, collect_targets=collect_targets, force_m_d=force_m_d
            )
        return self._runs[key]

    def peak_abs_u(self, scenario, weights):
        return max(abs(r.u) for r in self.reports(scenario, weights))


@pytest.fixture(scope="session")
def run_cache():
    return RunCache()

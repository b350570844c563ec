"""Decision layer: output mapping, spike generation, collision rule, target extraction.

The scalar membrane sum is squashed into [0.5, 1) by a logistic in |u|/N
(rising with activity), mapped to an integer spike count by an exponential
threshold rule, and integrated over a short window to decide a collision
warning.  Attention-mask pixels are grouped by DBSCAN over Euclidean pixel
distance and each cluster is summarized by its centroid plus a
population-coded direction and energy (vector mean of per-pixel estimates).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

__all__ = [
    "SpikeState",
    "TargetEstimate",
    "cluster_targets",
    "collision_warning",
    "membrane_to_output",
    "output_to_spikes",
    "population_code",
]


def membrane_to_output(u: float, n_neurons: int) -> float:
    """Logistic map of activity magnitude into [0.5, 1): 1/(1+exp(-|u|/N)).

    The exponent is negated relative to the printed formula so the range
    is the stated [0.5, 1) and the map increases with |u|.
    """
    if n_neurons <= 0:
        raise ValueError("n_neurons must be positive")
    return 1.0 / (1.0 + math.exp(-abs(u) / n_neurons))


def output_to_spikes(out: float, scale: float, threshold: float) -> int:
    """Exponential firing map: floor(exp(scale * (out - threshold)))."""
    return int(math.floor(math.exp(scale * (out - threshold))))


@dataclass
class SpikeState:
    """Ring of recent spike counts plus the collision-rule constants."""

    window_steps: int
    warn_threshold: float
    dt: float
    window: deque = field(default_factory=deque)

    def copy(self) -> "SpikeState":
        return SpikeState(self.window_steps, self.warn_threshold, self.dt, deque(self.window))


def collision_warning(state: SpikeState, spike: int):
    """Windowed spike-frequency test; returns (warning, state).

    The frequency is (sum of the stored window + the current spike)
    divided by window_steps * dt; before the window fills, the divisor
    stays the same, which under-reports early frequencies rather than
    inflating them.  The window is updated after the test.
    """
    if spike < 0:
        raise ValueError("spike count must be >= 0")
    freq = (sum(state.window) + spike) / (state.window_steps * state.dt)
    warning = freq >= state.warn_threshold
    state.window.append(spike)
    while len(state.window) > state.window_steps:
        state.window.popleft()
    return warning, state


def _disk_stencil(eps: float) -> np.ndarray:
    r = int(math.floor(eps))
    span = np.arange(-r, r + 1)
    dx, dy = np.meshgrid(span, span)
    return dx * dx + dy * dy <= eps * eps  # includes the center


def _stencil_hits(mask: np.ndarray, stencil: np.ndarray) -> np.ndarray:
    """Per-pixel count of mask pixels inside the stencil footprint (exact)."""
    r = stencil.shape[0] // 2
    h, w = mask.shape
    padded = np.pad(mask, r, mode="constant")
    counts = np.zeros(mask.shape, dtype=np.int32)
    for dy, dx in zip(*np.nonzero(stencil)):
        counts += padded[dy : dy + h, dx : dx + w]
    return counts


def cluster_targets(mask_pixels, eps: float, min_pts: int) -> list:
    """DBSCAN over integer pixel coordinates; returns clusters, drops noise.

    Core points have at least min_pts neighbors within eps (the point
    itself counts).  Clusters are the eps-connectivity components of the
    core points, numbered by the row-major rank of their first core;
    border pixels reachable from several clusters join the lowest-numbered
    one, so the labeling is deterministic and independent of the input
    ordering.  Each cluster is an (n, 2) int array of (x, y) rows sorted
    row-major.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if min_pts < 1:
        raise ValueError("min_pts must be >= 1")
    pts = np.asarray(list(mask_pixels), dtype=int)
    if pts.size == 0:
        return []
    pts = pts.reshape(-1, 2)

    x0, y0 = pts[:, 0].min(), pts[:, 1].min()
    w = int(pts[:, 0].max() - x0 + 1)
    h = int(pts[:, 1].max() - y0 + 1)
    present = np.zeros((h, w), dtype=bool)
    present[pts[:, 1] - y0, pts[:, 0] - x0] = True

    stencil = _disk_stencil(eps)
    core = present & (_stencil_hits(present, stencil) >= min_pts)
    if not core.any():
        return []

    # eps-connectivity components of the cores: 8-connected pieces first,
    # then merge pieces whose eps-dilations touch each other (exact, since
    # the stencil is the exact eps disk)
    pieces, n_pieces = ndimage.label(core, structure=np.ones((3, 3), dtype=bool))
    parent = list(range(n_pieces + 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dilated = []
    for piece in range(1, n_pieces + 1):
        dilated.append(ndimage.binary_dilation(pieces == piece, structure=stencil))
    for a in range(1, n_pieces + 1):
        for b in range(a + 1, n_pieces + 1):
            if find(a) != find(b) and (dilated[a - 1] & (pieces == b)).any():
                parent[find(b)] = find(a)

    # cluster creation order: row-major rank of each component's first core
    comp_of_piece = {piece: find(piece) for piece in range(1, n_pieces + 1)}
    core_rows, core_cols = np.nonzero(core)
    first_rank = {}
    for rank, (cy, cx) in enumerate(zip(core_rows, core_cols)):  # nonzero is row-major
        comp = comp_of_piece[pieces[cy, cx]]
        if comp not in first_rank:
            first_rank[comp] = rank
    ordered = sorted(first_rank, key=first_rank.get)

    labels = np.full((h, w), -1, dtype=int)
    for idx, comp in enumerate(ordered):
        comp_core = np.zeros((h, w), dtype=bool)
        for piece, owner in comp_of_piece.items():
            if owner == comp:
                comp_core |= pieces == piece
        reach = ndimage.binary_dilation(comp_core, structure=stencil) & present
        claim = reach & (labels == -1)
        labels[claim] = idx

    out = []
    for idx in range(len(ordered)):
        ys, xs = np.nonzero(labels == idx)
        members = np.stack([xs + x0, ys + y0], axis=1)
        out.append(members[np.lexsort((members[:, 0], members[:, 1]))])
    return out


@dataclass
class TargetEstimate:
    """One looming candidate: position, population-coded direction and energy."""

    x: float
    y: float
    phi: float
    energy: float
    member_count: int
    members: np.ndarray


def population_code(cluster: np.ndarray, v: np.ndarray, phi_hat: np.ndarray) -> TargetEstimate:
    """Summarize a cluster by the vector mean of its members' motion estimates.

    Per pixel the energy decomposes as (V cos(phi), V sin(phi)); the
    cluster direction is the angle of the mean vector and the cluster
    energy its length, so radially balanced expansion cancels to nearly
    zero energy.  The centroid is the arithmetic mean of member pixels.
    """
    cluster = np.asarray(cluster, dtype=int)
    if cluster.size == 0:
        raise ValueError("cluster is empty")
    xs, ys = cluster[:, 0], cluster[:, 1]
    v_members = v[ys, xs]
    phi_members = phi_hat[ys, xs]
    v_x = float(np.mean(v_members * np.cos(phi_members)))
    v_y = float(np.mean(v_members * np.sin(phi_members)))
    return TargetEstimate(
        x=float(xs.mean()),
        y=float(ys.mean()),
        phi=math.atan2(v_y, v_x),
        energy=math.hypot(v_x, v_y),
        member_count=int(cluster.shape[0]),
        members=cluster,
    )

"""Approach pathway: push-pull ganglion fusion, attention masks, membrane output.

The antagonistic center-surround kernel spreads each channel's fast (and
slow) activity into a surround ring; rectified differences between one
channel's excitation and the opposite channel's ring implement the
push-pull structure that responds to expansion but cancels lateral motion.
Two binary attention masks gate the fused map: an approach mask from
blurring and thresholding the fused map itself, and a directional mask
that first subtracts the globally dominant motion directions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .direction import DirectionField
from .kernels import correlate
from .retina import BipolarBundle

__all__ = [
    "ApproachMaps",
    "approach_attention",
    "binarize",
    "directional_attention",
    "fuse_channels",
    "ganglion_push_pull",
    "masked_output",
    "sac_center_surround",
    "top_k_orientations",
]


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def binarize(field: np.ndarray, threshold: float) -> np.ndarray:
    """Strict threshold: 1 where field > threshold, else 0 (ties go to 0)."""
    return (field > threshold).astype(float)


def sac_center_surround(bundle: BipolarBundle, cs_kernel: np.ndarray):
    """Rectified surround signals (S1+, S1-, S2+, S2-).

    S1 comes from the fast responses, S2 from the slow ones; each is the
    rectified center-surround filtering of its channel.
    """
    s1_plus = relu(correlate(bundle.b_plus_fast, cs_kernel))
    s1_minus = relu(correlate(bundle.b_minus_fast, cs_kernel))
    s2_plus = relu(correlate(bundle.b_plus_slow, cs_kernel))
    s2_minus = relu(correlate(bundle.b_minus_slow, cs_kernel))
    return s1_plus, s1_minus, s2_plus, s2_minus


def ganglion_push_pull(bundle: BipolarBundle, s1_plus, s1_minus, s2_plus, s2_minus):
    """Cross-channel push-pull: each excitation minus the opposite surround.

    G1+ = relu(relu(B+^s) - S1-)   G2+ = relu(relu(B+^f) - S2-)
    G1- = relu(relu(B-^s) - S1+)   G2- = relu(relu(B-^f) - S2+)
    """
    g1_plus = relu(relu(bundle.b_plus_slow) - s1_minus)
    g2_plus = relu(relu(bundle.b_plus_fast) - s2_minus)
    g1_minus = relu(relu(bundle.b_minus_slow) - s1_plus)
    g2_minus = relu(relu(bundle.b_minus_fast) - s2_plus)
    return g1_plus, g2_plus, g1_minus, g2_minus


def fuse_channels(g1_plus, g2_plus, g1_minus, g2_minus, w1_plus, w2_minus, w1_minus, w2_plus):
    """Weighted fusion w1+ G1+ - w2- G2- + w1- G1- - w2+ G2+ (signed).

    Grouped as (excitations) - (suppressions) so that swapping the ON and
    OFF roles together with their weights reproduces the result exactly.
    """
    excite = w1_plus * g1_plus + w1_minus * g1_minus
    suppress = w2_minus * g2_minus + w2_plus * g2_plus
    return excite - suppress


def approach_attention(g: np.ndarray, blur_kernel: np.ndarray, gamma_a: float):
    """Blur the fused map and mark pixels above gamma_a: (G_sigma, M_a)."""
    g_sigma = correlate(g, blur_kernel)
    return g_sigma, binarize(g_sigma, gamma_a)


def top_k_orientations(r_sums: np.ndarray, k: int) -> list:
    """Indices of the k largest orientation sums; ties broken by lower index."""
    if not 0 < k < len(r_sums):
        raise ValueError(f"k must be in (0, {len(r_sums)}), got {k}")
    order = sorted(range(len(r_sums)), key=lambda j: (-r_sums[j], j))
    return order[:k]


def directional_attention(df: DirectionField, k: int, blur_kernel: np.ndarray, gamma_d: float):
    """Suppress the dominant motion directions: (inhibited indices, V', M_d).

    The top-k orientations by summed energy are inhibited together with
    their opposites: R at theta+pi is the negation of R at theta, so a
    coherently translating background whose energy peaks at one theta also
    shows anti-preferred lobes at theta+pi; subtracting over the full axis
    takes V' to zero on such backgrounds instead of doubling those lobes.
    Expanding objects keep energy on the remaining axes.
    """
    count = len(df.r_theta)
    inhibited = top_k_orientations(df.r_sums, k)
    axis = sorted({j for i in inhibited for j in (i, (i + count // 2) % count)})
    v_prime = df.v - np.max([df.r_theta[j] for j in axis], axis=0)
    m_d = binarize(correlate(v_prime, blur_kernel), gamma_d)
    return inhibited, v_prime, m_d


def masked_output(g: np.ndarray, m_a: np.ndarray, m_d: np.ndarray):
    """Gate the fused map by both masks and integrate: (G', u)."""
    g_prime = g * m_a * m_d
    return g_prime, float(g_prime.sum())


@dataclass
class ApproachMaps:
    """All intermediate maps of one frame's approach pathway (debug payload)."""

    s1_plus: np.ndarray
    s1_minus: np.ndarray
    s2_plus: np.ndarray
    s2_minus: np.ndarray
    g1_plus: np.ndarray
    g2_plus: np.ndarray
    g1_minus: np.ndarray
    g2_minus: np.ndarray
    g: np.ndarray
    g_sigma: np.ndarray
    m_a: np.ndarray
    m_d: np.ndarray
    v_prime: np.ndarray
    g_prime: np.ndarray
    u: float

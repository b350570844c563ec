"""Directionally selective filtering, opponent motion energy, and direction estimation.

Each orientation theta gets a quadrature pair of oriented kernels (phase 0
and pi/2).  Filtering the slow and fast channel responses with the pair
gives four maps per channel whose opponent product

    E = SA1 * SB2 - SA2 * SB1      (1 = slow, 2 = fast)

is signed motion energy: positive for motion along theta, negative against
it.  Under the fixed image conventions (x right, y down, correlation, odd
phase +pi/2) a rightward-moving bar yields E > 0 at theta = 0; the sign
test in the suite pins this.

Because the even kernel is identical at theta and theta+pi while the odd
kernel negates, energies for the second half of the orientation circle are
the negations of the first half; only orientation_count/2 kernel pairs are
ever built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ModelParams
from .kernels import correlate, make_gabor
from .retina import BipolarBundle

__all__ = [
    "DirectionField",
    "SacQuad",
    "combine_on_off",
    "direction_field",
    "gabor_bank",
    "mirror_energies",
    "motion_energy",
    "orientations",
    "sac_directional",
]


def orientations(count: int) -> np.ndarray:
    """Uniform angles over [0, 2 pi): 0, 2pi/count, ..."""
    return np.arange(count) * (2.0 * math.pi / count)


def gabor_bank(params: ModelParams):
    """Quadrature kernel pairs (even, odd) for the first half of the circle.

    The envelope width is params.gabor_sigma_px (sigma expressed as a
    fraction of the wavelength, materialized in pixels).
    """
    half = params.orientation_count // 2
    size = params.kernel_size_small
    lam = params.gabor_lambda
    sigma = params.gabor_sigma_px
    pairs = []
    for theta in orientations(params.orientation_count)[:half]:
        even = make_gabor(theta, 0.0, lam, sigma, size)
        odd = make_gabor(theta, math.pi / 2.0, lam, sigma, size)
        pairs.append((even, odd))
    return pairs


@dataclass
class SacQuad:
    """Slow/fast x even/odd filter responses for one channel and orientation."""

    sa1: np.ndarray  # slow, even phase
    sb1: np.ndarray  # slow, odd phase
    sa2: np.ndarray  # fast, even phase
    sb2: np.ndarray  # fast, odd phase


def sac_directional(bundle: BipolarBundle, even_kernel: np.ndarray, odd_kernel: np.ndarray):
    """Filter both channels with one quadrature pair; returns (on_quad, off_quad)."""
    on = SacQuad(
        sa1=correlate(bundle.b_plus_slow, even_kernel),
        sb1=correlate(bundle.b_plus_slow, odd_kernel),
        sa2=correlate(bundle.b_plus_fast, even_kernel),
        sb2=correlate(bundle.b_plus_fast, odd_kernel),
    )
    off = SacQuad(
        sa1=correlate(bundle.b_minus_slow, even_kernel),
        sb1=correlate(bundle.b_minus_slow, odd_kernel),
        sa2=correlate(bundle.b_minus_fast, even_kernel),
        sb2=correlate(bundle.b_minus_fast, odd_kernel),
    )
    return on, off


def motion_energy(quad: SacQuad) -> np.ndarray:
    """Signed opponent energy SA1*SB2 - SA2*SB1."""
    return quad.sa1 * quad.sb2 - quad.sa2 * quad.sb1


def combine_on_off(e_plus: np.ndarray, e_minus: np.ndarray, v_plus: float, v_minus: float):
    """Weighted ON/OFF energy fusion; operand grouping keeps the channel
    swap (invert video, swap v+/-) bit-exact."""
    return v_plus * e_plus + v_minus * e_minus


def mirror_energies(r_half: list) -> list:
    """Extend energies of the first half-circle to all orientations via negation."""
    return list(r_half) + [-r for r in r_half]


@dataclass
class DirectionField:
    """Per-orientation energies with their pixelwise max, angle, and sums."""

    r_theta: list  # orientation_count fields
    v: np.ndarray  # pixelwise max over orientations
    phi_hat: np.ndarray  # estimated angle in (-pi, pi]
    r_sums: np.ndarray  # per-orientation scalar sums
    thetas: np.ndarray


def direction_field(r_all: list, thetas: np.ndarray | None = None) -> DirectionField:
    """Assemble the direction field from the full set of orientation energies.

    The angle estimate is atan2(R^{pi/2}, R^0), so the orientation set
    must contain both 0 and pi/2 (count divisible by 4).
    """
    count = len(r_all)
    if thetas is None:
        thetas = orientations(count)
    if count < 4 or count % 4 != 0:
        raise ValueError(
            f"orientation count {count} lacks the 0 and pi/2 channels needed for phi"
        )
    stack = np.stack(r_all)
    v = stack.max(axis=0)
    phi_hat = np.arctan2(r_all[count // 4], r_all[0])
    r_sums = stack.sum(axis=(1, 2))
    return DirectionField(list(r_all), v, phi_hat, r_sums, np.asarray(thetas, dtype=float))


def bundle_direction_field(bundle: BipolarBundle, pairs, params: ModelParams) -> DirectionField:
    """Full directional stage for one frame: energies for every orientation."""
    v_plus, v_minus = params.channel_weights[0], params.channel_weights[1]
    r_half = []
    for even, odd in pairs:
        on, off = sac_directional(bundle, even, odd)
        r_half.append(combine_on_off(motion_energy(on), motion_energy(off), v_plus, v_minus))
    return direction_field(mirror_energies(r_half), orientations(params.orientation_count))

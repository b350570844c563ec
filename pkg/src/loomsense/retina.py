"""Front layers: photoreceptor differencing, ON/OFF split, bandpass, temporal reads.

The photoreceptor output is the inter-frame luminance difference plus a
decaying memory of its own recent outputs.  Half-wave rectification splits
it into the ON (brightening) and OFF (darkening) channels, each of which is
bandpassed by a difference-of-Gaussians kernel and fed to one leaky-
integrator cascade that is read at a shallow (fast) and a deep (slow) depth.

Input frames are gray intensities normalized to [0, 1].
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .config import ModelParams
from .kernels import correlate
from .temporal import CascadeState, read_output, step_cascade

__all__ = [
    "BipolarBundle",
    "PhotoreceptorState",
    "bipolar_bandpass",
    "bipolar_temporal",
    "half_wave_split",
    "make_photoreceptor",
    "photoreceptor_step",
]


@dataclass
class PhotoreceptorState:
    """Previous frame plus the ring of recent photoreceptor outputs."""

    previous: np.ndarray
    coeffs: list
    history: deque = field(default_factory=deque)  # newest first, len <= len(coeffs)


def make_photoreceptor(first_frame: np.ndarray, params: ModelParams) -> PhotoreceptorState:
    """Prime the state with the first frame; output starts at the second."""
    first_frame = np.asarray(first_frame, dtype=float)
    if first_frame.shape != (params.frame_height, params.frame_width):
        raise ValueError(
            f"frame shape {first_frame.shape} != configured "
            f"({params.frame_height}, {params.frame_width})"
        )
    return PhotoreceptorState(first_frame.copy(), params.persistence_coeffs())


def photoreceptor_step(state: PhotoreceptorState, frame: np.ndarray):
    """One luminance-change step: P = I_t - I_{t-1} + sum_i p_i P_{t-i}.

    Mutates the state (rotates the history, replaces the previous frame)
    and returns ``(P, state)``.
    """
    frame = np.asarray(frame, dtype=float)
    if frame.shape != state.previous.shape:
        raise ValueError(f"frame shape {frame.shape} != primed shape {state.previous.shape}")
    p = frame - state.previous
    for coeff, past in zip(state.coeffs, state.history):
        p = p + coeff * past
    state.history.appendleft(p)
    while len(state.history) > len(state.coeffs):
        state.history.pop()
    state.previous = frame.copy()
    return p, state


def half_wave_split(p: np.ndarray):
    """ON/OFF rectification: B+ = (|P|+P)/2, B- = (|P|-P)/2."""
    mag = np.abs(p)
    return (mag + p) / 2.0, (mag - p) / 2.0


def bipolar_bandpass(b: np.ndarray, dog_kernel: np.ndarray) -> np.ndarray:
    """Center-surround bandpass of one rectified channel."""
    return correlate(b, dog_kernel)


@dataclass
class BipolarBundle:
    """Fast and slow temporal responses of the ON and OFF channels."""

    b_plus_fast: np.ndarray
    b_plus_slow: np.ndarray
    b_minus_fast: np.ndarray
    b_minus_slow: np.ndarray


def bipolar_temporal(b_plus0: np.ndarray, b_minus0: np.ndarray, on_cascade: CascadeState,
                     off_cascade: CascadeState, params: ModelParams) -> BipolarBundle:
    """Advance both channel cascades one frame and read fast/slow outputs.

    One cascade per channel serves both read depths, which guarantees the
    fast and slow responses stay mutually consistent.
    """
    step_cascade(on_cascade, b_plus0)
    step_cascade(off_cascade, b_minus0)
    gain = params.cascade_gain
    return BipolarBundle(
        b_plus_fast=read_output(on_cascade, params.n_fast, gain),
        b_plus_slow=read_output(on_cascade, params.n_slow, gain),
        b_minus_fast=read_output(off_cascade, params.n_fast, gain),
        b_minus_slow=read_output(off_cascade, params.n_slow, gain),
    )

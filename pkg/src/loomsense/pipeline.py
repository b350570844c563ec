"""Frame-by-frame orchestration of the full network.

A pipeline is primed with the first frame and then stepped once per
subsequent frame; each step runs photoreceptor differencing, the bipolar
bandpass and temporal reads, the directional and approach pathways, the
attention masks, the collision rule, and target clustering, in a pinned
order.  All temporal state lives in PipelineState, so streaming the frames
one at a time is exactly equivalent to any batched driver loop and two
runs over the same input are bit-identical.

Frames are gray intensities in [0, 1]; use ``frames / 255`` for raw gray.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .approach import (
    approach_attention,
    directional_attention,
    fuse_channels,
    ganglion_push_pull,
    masked_output,
    sac_center_surround,
)
from .config import ModelParams, raise_on_violations
from .detection import (
    SpikeState,
    cluster_targets,
    collision_warning,
    membrane_to_output,
    output_to_spikes,
    population_code,
)
from .direction import bundle_direction_field, gabor_bank
from .kernels import make_center_surround, make_dog, make_gaussian
from .retina import (
    PhotoreceptorState,
    bipolar_bandpass,
    bipolar_temporal,
    half_wave_split,
    make_photoreceptor,
    photoreceptor_step,
)
from .temporal import make_cascade

__all__ = ["FrameReport", "PipelineState", "make_pipeline", "prime", "run_sequence", "step"]


@dataclass
class FrameReport:
    """Per-frame outputs; ``maps`` carries intermediates only when requested."""

    t: int
    u: float
    out: float
    spike: int
    collision: bool
    targets: list
    maps: dict | None = None


@dataclass
class PipelineState:
    """All temporal state plus the prebuilt kernel bank for one stream."""

    params: ModelParams
    dog_kernel: np.ndarray
    cs_kernel: np.ndarray
    blur_kernel: np.ndarray
    gabor_pairs: list
    photoreceptor: PhotoreceptorState | None = None
    on_cascade: object = None
    off_cascade: object = None
    spikes: SpikeState | None = None
    frame_index: int = 0
    collect_targets: bool = True
    gate_targets: bool = False
    debug_maps: bool = False


def make_pipeline(params: ModelParams, collect_targets: bool = True,
                  gate_targets: bool = False, debug_maps: bool = False) -> PipelineState:
    """Build an unprimed pipeline; kernels are constructed once here."""
    raise_on_violations(params)
    size = params.kernel_size_small
    return PipelineState(
        params=params,
        dog_kernel=make_dog(params.dog_gain, params.dog_sigma1, params.dog_sigma2, size),
        cs_kernel=make_center_surround(params.cs_lambda, params.cs_sigma, params.cs_psi, size),
        blur_kernel=make_gaussian(params.attention_sigma, params.kernel_size_blur),
        gabor_pairs=gabor_bank(params),
        collect_targets=collect_targets,
        gate_targets=gate_targets,
        debug_maps=debug_maps,
    )


def prime(state: PipelineState, first_frame: np.ndarray) -> PipelineState:
    """Record the initial frame; no report is produced for it."""
    if state.photoreceptor is not None:
        raise RuntimeError("pipeline already primed")
    p = state.params
    state.photoreceptor = make_photoreceptor(first_frame, p)
    shape = (p.frame_height, p.frame_width)
    depth = p.n_slow + 1
    state.on_cascade = make_cascade(depth, shape, p.cascade_decay, p.cascade_transmission,
                                    p.cascade_tau, p.dt)
    state.off_cascade = make_cascade(depth, shape, p.cascade_decay, p.cascade_transmission,
                                     p.cascade_tau, p.dt)
    state.spikes = SpikeState(p.window_steps, p.warn_threshold, p.dt)
    state.frame_index = 1
    return state


def step(state: PipelineState, frame: np.ndarray, force_m_d: float | None = None):
    """Process one frame; returns (FrameReport, state).

    ``force_m_d`` overrides the directional attention mask with a constant
    (ablation hook that shows what the mask contributes).
    """
    if state.photoreceptor is None:
        raise RuntimeError("pipeline must be primed with the first frame")
    p = state.params
    _, _, w1_plus, w2_minus, w1_minus, w2_plus = p.channel_weights

    photo, _ = photoreceptor_step(state.photoreceptor, frame)
    b_plus, b_minus = half_wave_split(photo)
    b_plus0 = bipolar_bandpass(b_plus, state.dog_kernel)
    b_minus0 = bipolar_bandpass(b_minus, state.dog_kernel)
    bundle = bipolar_temporal(b_plus0, b_minus0, state.on_cascade, state.off_cascade, p)

    dfield = bundle_direction_field(bundle, state.gabor_pairs, p)

    s1_plus, s1_minus, s2_plus, s2_minus = sac_center_surround(bundle, state.cs_kernel)
    g1_plus, g2_plus, g1_minus, g2_minus = ganglion_push_pull(
        bundle, s1_plus, s1_minus, s2_plus, s2_minus
    )
    g = fuse_channels(g1_plus, g2_plus, g1_minus, g2_minus,
                      w1_plus, w2_minus, w1_minus, w2_plus)
    g_sigma, m_a = approach_attention(g, state.blur_kernel, p.gamma_a)
    inhibited, v_prime, m_d = directional_attention(dfield, p.top_k, state.blur_kernel, p.gamma_d)
    if force_m_d is not None:
        m_d = np.full_like(m_d, float(force_m_d))
    g_prime, u = masked_output(g, m_a, m_d)

    out = membrane_to_output(u, p.neuron_count)
    spike = output_to_spikes(out, p.spike_scale, p.spike_threshold)
    collision, _ = collision_warning(state.spikes, spike)

    targets = []
    if state.collect_targets and not (state.gate_targets and not collision):
        joint = m_a * m_d
        ys, xs = np.nonzero(joint > 0.0)
        if xs.size:
            clusters = cluster_targets(
                np.stack([xs, ys], axis=1), p.cluster_eps, p.cluster_min_pts
            )
            targets = [population_code(c, dfield.v, dfield.phi_hat) for c in clusters]

    state.frame_index += 1
    maps = None
    if state.debug_maps:
        maps = {
            "G": g,
            "G_sigma": g_sigma,
            "M_a": m_a,
            "M_d": m_d,
            "V": dfield.v,
            "V_prime": v_prime,
            "phi_hat": dfield.phi_hat,
            "inhibited": inhibited,
        }
    report = FrameReport(
        t=state.frame_index,
        u=u,
        out=out,
        spike=spike,
        collision=bool(collision),
        targets=targets,
        maps=maps,
    )
    return report, state


def run_sequence(params: ModelParams, frames, collect_targets: bool = True,
                 gate_targets: bool = False, debug_maps: bool = False,
                 force_m_d: float | None = None) -> list:
    """Prime on the first frame and step through the rest; returns the reports."""
    frames = iter(frames)
    try:
        first = next(frames)
    except StopIteration:
        raise ValueError("need at least one frame") from None
    state = make_pipeline(params, collect_targets, gate_targets, debug_maps)
    prime(state, first)
    reports = []
    for frame in frames:
        report, state = step(state, frame, force_m_d=force_m_d)
        reports.append(report)
    return reports

"""loomsense: collision detection in cluttered moving scenes with a retina-like network.

The package processes gray-scale frame sequences through a five-stage
pipeline (photoreceptor differencing, ON/OFF bipolar filtering, oriented
and center-surround amacrine filtering, ganglion fusion with attention
masking, target extraction) and reports a per-frame collision statistic
plus position/direction estimates for looming candidates.
"""

from .config import ModelParams, default_params, load_params, serialize_params, validate
from .detection import (
    SpikeState,
    TargetEstimate,
    cluster_targets,
    collision_warning,
    membrane_to_output,
    output_to_spikes,
    population_code,
)
from .kernels import correlate, make_center_surround, make_dog, make_gabor, make_gaussian
from .pipeline import FrameReport, PipelineState, make_pipeline, prime, run_sequence, step
from .stimuli import Scenario, generate, weber_contrast
from .temporal import (
    CascadeState,
    analytic_extrema,
    analytic_impulse,
    classical_kernel,
    make_cascade,
    read_output,
    step_cascade,
)

__version__ = "0.1.0"

__all__ = [
    "CascadeState",
    "FrameReport",
    "ModelParams",
    "PipelineState",
    "Scenario",
    "SpikeState",
    "TargetEstimate",
    "analytic_extrema",
    "analytic_impulse",
    "classical_kernel",
    "cluster_targets",
    "collision_warning",
    "correlate",
    "default_params",
    "generate",
    "load_params",
    "make_cascade",
    "make_center_surround",
    "make_dog",
    "make_gabor",
    "make_gaussian",
    "make_pipeline",
    "membrane_to_output",
    "output_to_spikes",
    "population_code",
    "prime",
    "read_output",
    "run_sequence",
    "serialize_params",
    "step",
    "step_cascade",
    "validate",
    "weber_contrast",
]

"""Model configuration: every tunable constant of the network in one frozen dataclass.

Defaults follow the published parameter table of the model this package
implements (F, sigma_1, sigma_2, K, A, tau, n_f, n_s, sigma_DS, lambda_DS,
sigma_CS, lambda_CS, sigma_g, gamma_a, gamma_d), with kernel supports of
5x5 for the small kernels and 31x31 for the attention blur, and a 0.05 s
step.  Fields that the published table does not cover (persistence depth,
spike mapping, clustering radii) carry documented defaults and are meant
to be overridden per scenario.

Configuration files are plain ``key=value`` text, one parameter per line,
``#`` starts a comment.  Unknown keys are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

__all__ = [
    "ModelParams",
    "ParamError",
    "default_params",
    "load_params",
    "parse_overrides",
    "serialize_params",
    "validate",
]


class ParamError(ValueError):
    """Raised for malformed configuration text or invariant violations."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


@dataclass(frozen=True)
class ModelParams:
    """Immutable parameter set; safe to share across concurrent pipelines.

    Notes on two fields whose semantics are easy to get wrong:

    * ``gabor_sigma`` is the Gaussian envelope width of the oriented
      filters expressed as a *fraction of* ``gabor_lambda``.  The pixel
      width used to build kernels is ``gabor_sigma * gabor_lambda``
      (0.3 * 4.0 = 1.2 px at the defaults).  Read as absolute pixels the
      published value 0.3 collapses the oriented filters to single-pixel
      taps with no orientation tuning, which disables the directional
      attention stage entirely.
    * ``neuron_count_n`` defaults to ``frame_width * frame_height`` when
      left at 0; it is the divisor of the output sigmoid.
    """

    # frame geometry and integration step
    frame_width: int = 128
    frame_height: int = 128
    dt: float = 0.05

    # photoreceptor persistence: p_i = 1 / (1 + exp(persistence_u * i))
    persistence_depth: int = 3
    persistence_u: float = 1.0

    # difference-of-Gaussians bandpass
    dog_gain: float = 5.0
    dog_sigma1: float = 1.0
    dog_sigma2: float = 3.0

    # leaky-integrator cascade and read depths
    cascade_gain: float = 5.0
    cascade_decay: float = 60.0
    cascade_transmission: float = 60.0
    cascade_tau: float = 5.0
    n_fast: int = 2
    n_slow: int = 4

    # oriented (directional) filtering
    gabor_lambda: float = 4.0
    gabor_sigma: float = 0.3  # envelope width as a fraction of gabor_lambda
    orientation_count: int = 8

    # antagonistic center-surround filtering
    cs_lambda: float = 4.0
    cs_sigma: float = 0.3
    cs_psi: float = 0.0

    # attention masks
    attention_sigma: float = 8.0
    gamma_a: float = 0.005
    gamma_d: float = 0.005
    top_k: int = 1

    # channel weights [v+, v-, w1+, w2-, w1-, w2+]
    channel_weights: tuple = (1.0, 1.0, 1.0, 0.0, 0.5, 0.0)

    # spike mapping and collision rule
    spike_scale: float = 10.0
    spike_threshold: float = 0.7
    window_steps: int = 4
    warn_threshold: float = 1.0

    # target clustering
    cluster_eps: float = 5.0
    cluster_min_pts: int = 8

    # kernel supports and border handling
    kernel_size_small: int = 5
    kernel_size_blur: int = 31
    border_policy: str = "replicate"

    # sigmoid divisor; 0 means frame_width * frame_height
    neuron_count_n: int = 0

    @property
    def neuron_count(self) -> int:
        if self.neuron_count_n > 0:
            return self.neuron_count_n
        return self.frame_width * self.frame_height

    @property
    def gabor_sigma_px(self) -> float:
        """Pixel width of the oriented filters' Gaussian envelope."""
        return self.gabor_sigma * self.gabor_lambda

    def persistence_coeffs(self):
        """Decay coefficients p_1..p_Np of the photoreceptor memory."""
        u = self.persistence_u
        return [1.0 / (1.0 + math.exp(u * i)) for i in range(1, self.persistence_depth + 1)]

    def replace(self, **changes) -> "ModelParams":
        out = replace(self, **changes)
        raise_on_violations(out)
        return out


def default_params() -> ModelParams:
    """Parameter set with the published defaults; validates clean."""
    p = ModelParams()
    raise_on_violations(p)
    return p


def validate(p: ModelParams) -> list:
    """Return a list of violated invariants (empty when the set is usable)."""
    v = []
    if p.frame_width < 1 or p.frame_height < 1:
        v.append("frame_width and frame_height must be positive")
    if p.dt <= 0.0:
        v.append("dt must be positive")
    if p.dog_sigma1 > p.dog_sigma2:
        v.append("dog_sigma ordering: dog_sigma1 must be <= dog_sigma2")
    if p.dog_sigma1 <= 0.0:
        v.append("dog_sigma1 must be positive")
    if p.cascade_tau <= 0.0:
        v.append("cascade_tau must be positive")
    elif p.dt * p.cascade_decay / p.cascade_tau >= 2.0:
        v.append(
            "explicit-Euler stability: dt*cascade_decay/cascade_tau = "
            f"{p.dt * p.cascade_decay / p.cascade_tau:g} must be < 2"
        )
    if not (1 <= p.n_fast < p.n_slow):
        v.append("read depths: 1 <= n_fast < n_slow required")
    if p.gabor_lambda <= 0.0 or p.gabor_sigma <= 0.0:
        v.append("gabor_lambda and gabor_sigma must be positive")
    if p.cs_lambda <= 0.0 or p.cs_sigma <= 0.0:
        v.append("cs_lambda and cs_sigma must be positive")
    if p.attention_sigma <= 0.0:
        v.append("attention_sigma must be positive")
    if p.orientation_count < 2 or p.orientation_count % 2 != 0:
        v.append("orientation_count must be even and >= 2")
    if not (0 < p.top_k < p.orientation_count):
        v.append("top_k must satisfy 0 < top_k < orientation_count")
    if p.gamma_a <= 0.0 or p.gamma_d <= 0.0:
        v.append("gamma_a and gamma_d must be positive")
    if len(p.channel_weights) != 6:
        v.append("channel_weights must hold 6 values [v+, v-, w1+, w2-, w1-, w2+]")
    elif any(w < 0.0 for w in p.channel_weights):
        v.append("channel_weights must be non-negative")
    for name in ("kernel_size_small", "kernel_size_blur"):
        size = getattr(p, name)
        if size < 3 or size % 2 == 0:
            v.append(f"{name} must be an odd integer >= 3")
    if p.persistence_depth < 0:
        v.append("persistence_depth must be >= 0")
    if p.persistence_u <= 0.0:
        v.append("persistence_u must be positive")
    elif sum(p.persistence_coeffs()) >= 1.0:
        # keeps the recursive photoreceptor memory a contraction
        v.append("photoreceptor stability: sum of persistence coefficients must be < 1")
    if p.window_steps < 1:
        v.append("window_steps must be >= 1")
    if p.cluster_eps <= 0.0:
        v.append("cluster_eps must be positive")
    if p.cluster_min_pts < 1:
        v.append("cluster_min_pts must be >= 1")
    if p.border_policy != "replicate":
        v.append("border_policy must be 'replicate'")
    if p.neuron_count_n < 0:
        v.append("neuron_count_n must be >= 0 (0 means frame_width*frame_height)")
    return v


def raise_on_violations(p: ModelParams) -> None:
    violations = validate(p)
    if violations:
        raise ParamError("invalid parameters:\n  " + "\n  ".join(violations), violations)


_INT_FIELDS = {
    "frame_width",
    "frame_height",
    "persistence_depth",
    "n_fast",
    "n_slow",
    "orientation_count",
    "top_k",
    "window_steps",
    "cluster_min_pts",
    "kernel_size_small",
    "kernel_size_blur",
    "neuron_count_n",
}

_FIELD_NAMES = {f.name for f in fields(ModelParams)}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "border_policy":
        return raw
    if key == "channel_weights":
        parts = [s for s in raw.replace(",", " ").split() if s]
        try:
            return tuple(float(s) for s in parts)
        except ValueError:
            raise ParamError(f"channel_weights: cannot parse {raw!r}") from None
    if key in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError:
            raise ParamError(f"{key}: expected an integer, got {raw!r}") from None
    try:
        return float(raw)
    except ValueError:
        raise ParamError(f"{key}: expected a number, got {raw!r}") from None


def parse_overrides(text: str) -> dict:
    """Parse key=value lines into a field dict; rejects unknown keys."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamError(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        if key not in _FIELD_NAMES:
            raise ParamError(f"line {lineno}: unknown parameter {key!r}")
        out[key] = _parse_value(key, raw)
    return out


def load_params(config_text: str, base: ModelParams | None = None) -> ModelParams:
    """Build a validated ModelParams from config text over ``base`` (or defaults)."""
    overrides = parse_overrides(config_text)
    p = replace(base if base is not None else ModelParams(), **overrides)
    raise_on_violations(p)
    return p


def serialize_params(p: ModelParams) -> str:
    """Config text that load_params() maps back to ``p`` field-for-field."""
    lines = []
    for f in fields(ModelParams):
        value = getattr(p, f.name)
        if f.name == "channel_weights":
            value = ",".join(repr(float(w)) for w in value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{f.name}={value}")
    return "\n".join(lines) + "\n"

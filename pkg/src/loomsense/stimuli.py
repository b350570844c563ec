"""Deterministic synthetic scenarios: looming disk, translating bar, striped clutter.

Frames are raw gray values quantized to the integers 0..255 (stored as
floats), exactly what the PGM writer emits, so in-memory runs and runs via
files agree bit for bit.  All motion follows the standard schedule: a
forward phase over steps 10..55, a stationary gap, a mirrored return phase
over steps 75..120.

The disk radius grows by ``rate_k * exp(0.001 t)`` pixels at step t of the
forward phase and shrinks by the time-mirrored amounts on the way back, so
the radius profile is symmetric and returns to its initial value.  Disk
edges are anti-aliased by pixel coverage; bars and stripes are hard-edged
and integer-positioned.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields, replace

import numpy as np

__all__ = ["Scenario", "generate", "scenario_from_text", "serialize_scenario", "weber_contrast"]

KINDS = ("looming_disk", "translating_bar", "looming_over_stripes")
DIRECTIONS = ("right", "left", "down", "up")


@dataclass(frozen=True)
class Scenario:
    """Full description of one synthetic sequence; generation is pure."""

    kind: str = "looming_disk"
    width: int = 128
    height: int = 128
    steps: int = 130
    fg_gray: float = 0.0
    bg_gray: float = 255.0
    move_start: int = 10
    move_end: int = 55
    return_start: int = 75
    return_end: int = 120
    # looming disk
    rate_k: float = 1.0  # initial radius expansion rate, px/step
    initial_radius: float = 5.0
    # translating bar
    bar_speed: int = 2
    bar_width: int = 4
    bar_direction: str = "right"
    # striped background
    stripe_width: int = 4
    stripe_spacing: int = 12
    stripe_speed: int = 1

    def validate(self) -> list:
        v = []
        if self.kind not in KINDS:
            v.append(f"kind must be one of {KINDS}")
        if self.steps < 2:
            v.append("steps must be >= 2")
        if self.width < 8 or self.height < 8:
            v.append("frame must be at least 8x8")
        for name in ("fg_gray", "bg_gray"):
            g = getattr(self, name)
            if not 0.0 <= g <= 255.0:
                v.append(f"{name} must lie in [0, 255]")
        windows_ok = (
            1 <= self.move_start <= self.move_end
            and self.move_end < self.return_start
            and self.return_start <= self.return_end <= self.steps
        )
        if not windows_ok:
            v.append("motion windows must be disjoint, ordered, and within [1, steps]")
        if self.bar_direction not in DIRECTIONS:
            v.append(f"bar_direction must be one of {DIRECTIONS}")
        if self.rate_k <= 0.0 or self.initial_radius <= 0.0:
            v.append("rate_k and initial_radius must be positive")
        if self.bar_speed < 1 or self.bar_width < 1:
            v.append("bar_speed and bar_width must be >= 1")
        if self.stripe_width < 1 or self.stripe_spacing < 0 or self.stripe_speed < 0:
            v.append("stripe geometry must be non-negative (width >= 1)")
        return v


def _quantize(frame: np.ndarray) -> np.ndarray:
    # half-up rounding; keeps polarity-swapped pairs exact complements
    return np.floor(np.clip(frame, 0.0, 255.0) + 0.5)


def _disk_radii(scen: Scenario) -> np.ndarray:
    """Radius at each step 1..steps under the mirrored grow/shrink schedule."""
    mirror = scen.move_start + scen.return_end  # shrink step t undoes step mirror - t
    r = scen.initial_radius
    radii = np.empty(scen.steps)
    for t in range(1, scen.steps + 1):
        radii[t - 1] = r
        if scen.move_start <= t <= scen.move_end:
            r += scen.rate_k * math.exp(0.001 * t)
        elif scen.return_start <= t <= scen.return_end:
            r -= scen.rate_k * math.exp(0.001 * (mirror - t))
    return radii


def _disk_coverage(scen: Scenario, radius: float) -> np.ndarray:
    cx = (scen.width - 1) / 2.0
    cy = (scen.height - 1) / 2.0
    y, x = np.mgrid[0 : scen.height, 0 : scen.width]
    d = np.sqrt((x - cx) ** 2 + (y - cy) ** 2)
    # linear coverage ramp across the one-pixel boundary band
    return np.clip(radius - d + 0.5, 0.0, 1.0)


def _stripe_mask(scen: Scenario, t: int) -> np.ndarray:
    period = scen.stripe_width + scen.stripe_spacing
    offset = (t - 1) * scen.stripe_speed
    x = np.arange(scen.width)
    cols = (x - offset) % period < scen.stripe_width
    return np.tile(cols, (scen.height, 1))


def _bar_positions(scen: Scenario) -> list:
    axis_len = scen.width if scen.bar_direction in ("right", "left") else scen.height
    sign = 1 if scen.bar_direction in ("right", "down") else -1
    travel = (scen.move_end - scen.move_start + 1) * scen.bar_speed
    pos = 10 if sign > 0 else axis_len - 10 - scen.bar_width
    positions = []
    for t in range(1, scen.steps + 1):
        positions.append(pos)
        if scen.move_start <= t <= scen.move_end:
            pos += sign * scen.bar_speed
        elif scen.return_start <= t <= scen.return_end:
            pos -= sign * scen.bar_speed
    lo = min(positions)
    hi = max(positions) + scen.bar_width
    if lo < 0 or hi > axis_len:
        warnings.warn(f"bar travel [{lo}, {hi}) exceeds the frame; clamping", stacklevel=3)
        positions = [min(max(p, 0), axis_len - scen.bar_width) for p in positions]
    del travel
    return positions


def generate(scen: Scenario) -> list:
    """Render the scenario as a list of ``steps`` quantized gray frames."""
    problems = scen.validate()
    if problems:
        raise ValueError("invalid scenario:\n  " + "\n  ".join(problems))
    frames = []
    if scen.kind in ("looming_disk", "looming_over_stripes"):
        radii = _disk_radii(scen)
        max_r = min(scen.width, scen.height) / 2.0 - 1.0
        if radii.max() > max_r:
            warnings.warn(
                f"disk radius {radii.max():.1f} exceeds the frame; clamping to {max_r:.1f}",
                stacklevel=2,
            )
            radii = np.minimum(radii, max_r)
        for t in range(1, scen.steps + 1):
            base = np.full((scen.height, scen.width), scen.bg_gray)
            if scen.kind == "looming_over_stripes":
                base[_stripe_mask(scen, t)] = scen.fg_gray
            cov = _disk_coverage(scen, radii[t - 1])
            frames.append(_quantize(base + cov * (scen.fg_gray - base)))
    else:
        positions = _bar_positions(scen)
        horizontal = scen.bar_direction in ("right", "left")
        for t in range(1, scen.steps + 1):
            frame = np.full((scen.height, scen.width), scen.bg_gray)
            p = positions[t - 1]
            if horizontal:
                frame[:, p : p + scen.bar_width] = scen.fg_gray
            else:
                frame[p : p + scen.bar_width, :] = scen.fg_gray
            frames.append(_quantize(frame))
    return frames


def weber_contrast(frame: np.ndarray, target_region, surround_region) -> float:
    """|mean target gray - mean surround gray| / 255 over the given index masks."""
    frame = np.asarray(frame, dtype=float)
    target = frame[target_region]
    surround = frame[surround_region]
    if target.size == 0 or surround.size == 0:
        raise ValueError("target and surround regions must be non-empty")
    return abs(float(target.mean()) - float(surround.mean())) / 255.0


_INT_FIELDS = {
    "width",
    "height",
    "steps",
    "move_start",
    "move_end",
    "return_start",
    "return_end",
    "bar_speed",
    "bar_width",
    "stripe_width",
    "stripe_spacing",
    "stripe_speed",
}

_STR_FIELDS = {"kind", "bar_direction"}


def scenario_from_text(text: str, base: Scenario | None = None) -> Scenario:
    """Parse key=value scenario text; unknown keys are rejected."""
    known = {f.name for f in fields(Scenario)}
    overrides = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = line.split("=", 1)
        key, raw = key.strip(), raw.strip()
        if key not in known:
            raise ValueError(f"line {lineno}: unknown scenario field {key!r}")
        if key in _STR_FIELDS:
            overrides[key] = raw
        elif key in _INT_FIELDS:
            overrides[key] = int(raw)
        else:
            overrides[key] = float(raw)
    scen = replace(base if base is not None else Scenario(), **overrides)
    problems = scen.validate()
    if problems:
        raise ValueError("invalid scenario:\n  " + "\n  ".join(problems))
    return scen


def serialize_scenario(scen: Scenario) -> str:
    lines = []
    for f in fields(Scenario):
        value = getattr(scen, f.name)
        if isinstance(value, float):
            value = repr(value)
        lines.append(f"{f.name}={value}")
    return "\n".join(lines) + "\n"

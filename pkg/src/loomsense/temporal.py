"""Neurodynamic temporal filter: a per-pixel cascade of leaky integrators.

Each level obeys ``tau dz_n/dt = -A z_n + C z_{n-1}`` with the frame field
as ``z_0``; the filter output is ``K (z_n - z_{n+1})``.  Reading one cascade
at two depths yields the fast and slow responses without any history
buffer, so processing is strictly streaming.

Discretization is explicit Euler with synchronous (Jacobi) level updates:
every level advances one step from the pre-step state of the level below,
so a fresh impulse needs n steps to reach level n.  The analytic impulse
response and its extremum times are provided as validation oracles, along
with the classical band-pass kernel the cascade approximates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CascadeState",
    "analytic_extrema",
    "analytic_impulse",
    "classical_kernel",
    "make_cascade",
    "read_output",
    "step_cascade",
]


@dataclass
class CascadeState:
    """Levels z_1..z_depth stacked as a (depth, h, w) array, plus ODE constants."""

    levels: np.ndarray
    decay: float  # A
    transmission: float  # C
    tau: float
    dt: float

    @property
    def depth(self) -> int:
        return self.levels.shape[0]

    def copy(self) -> "CascadeState":
        return CascadeState(self.levels.copy(), self.decay, self.transmission, self.tau, self.dt)


def make_cascade(depth: int, shape, decay=60.0, transmission=60.0, tau=5.0, dt=0.05) -> CascadeState:
    if depth < 1:
        raise ValueError("cascade depth must be >= 1")
    if dt * decay / tau >= 2.0:
        raise ValueError(
            f"unstable discretization: dt*decay/tau = {dt * decay / tau:g} must be < 2"
        )
    return CascadeState(np.zeros((depth,) + tuple(shape)), decay, transmission, tau, dt)


def step_cascade(state: CascadeState, drive: np.ndarray) -> CascadeState:
    """Advance every level one Euler step; ``drive`` is z_0 for this frame.

    Mutates ``state`` in place and returns it.  Level n reads the
    pre-step value of level n-1 (synchronous update).
    """
    drive = np.asarray(drive, dtype=float)
    if drive.shape != state.levels.shape[1:]:
        raise ValueError(f"drive shape {drive.shape} != field shape {state.levels.shape[1:]}")
    if not np.isfinite(drive).all():
        raise ValueError("drive contains non-finite values")
    below = np.concatenate([drive[None], state.levels[:-1]])
    rate = state.dt / state.tau
    state.levels += rate * (state.transmission * below - state.decay * state.levels)
    return state


def read_output(state: CascadeState, n: int, gain: float) -> np.ndarray:
    """Filter output ``gain * (z_n - z_{n+1})`` at read depth n (1-based)."""
    if n < 1 or n + 1 > state.depth:
        raise ValueError(f"read depth {n} needs levels {n} and {n + 1}, depth is {state.depth}")
    return gain * (state.levels[n - 1] - state.levels[n])


def analytic_impulse(n: int, m: int, gain: float, decay: float, transmission: float,
                     tau: float, t: float) -> float:
    """Closed-form unit-impulse response of ``gain * (z_n - z_{n+m})``."""
    if n < 1 or m < 1 or t < 0.0:
        raise ValueError("need n >= 1, m >= 1, t >= 0")
    a = decay / tau
    b = transmission / tau
    head = b**n * t ** (n - 1) / math.factorial(n - 1)
    tail = b ** (n + m) * t ** (n + m - 1) / math.factorial(n + m - 1)
    return gain * math.exp(-a * t) * (head - tail)


def analytic_extrema(n: int, decay: float, transmission: float, tau: float):
    """Times (t1, t2) of the impulse-response maximum and minimum for m=1.

    Roots of ``a b (n-1)! t^2 - (a+b) n! t + (n-1) n! = 0`` with
    a = decay/tau, b = transmission/tau; requires n >= 2.
    """
    if n < 2:
        raise ValueError("extremum times need n >= 2")
    a = decay / tau
    b = transmission / tau
    c2 = a * b * math.factorial(n - 1)
    c1 = -(a + b) * math.factorial(n)
    c0 = (n - 1) * math.factorial(n)
    disc = c1 * c1 - 4.0 * c2 * c0
    root = math.sqrt(disc)
    return (-c1 - root) / (2.0 * c2), (-c1 + root) / (2.0 * c2)


def classical_kernel(k: float, n: int, t: float) -> float:
    """Classical biphasic temporal kernel (reference only, never in the hot path).

    f(t) = (k t)^n e^{-k t}/n! - (k t)^{n+2} e^{-k t}/(n+2)!
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")
    kt = k * t
    return (kt**n / math.factorial(n) - kt ** (n + 2) / math.factorial(n + 2)) * math.exp(-kt)


def impulse_response(n: int, gain: float, steps: int, decay=60.0, transmission=60.0,
                     tau=5.0, dt=0.05) -> np.ndarray:
    """Discrete unit-impulse response sampled at t = 0, dt, 2*dt, ...

    Sample j is the output after j+1 cascade steps, the first of which
    carries the impulse; the state right after the impulse step is the
    t = 0 sample.
    """
    state = make_cascade(n + 1, (1, 1), decay, transmission, tau, dt)
    impulse = np.ones((1, 1))
    silence = np.zeros((1, 1))
    out = np.empty(steps)
    for j in range(steps):
        step_cascade(state, impulse if j == 0 else silence)
        out[j] = read_output(state, n, gain)[0, 0]
    return out

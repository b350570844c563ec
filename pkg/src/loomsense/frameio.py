"""Frame and result I/O: binary PGM/PPM, sequence ingestion, CSV/JSONL emission.

Only 8-bit binary netpbm images are supported (P5 gray in, P5/P6 out);
real video must be pre-extracted to numbered PGM frames.  All emitted text
formats are deterministic: floats are written with nine significant
digits, so repeated runs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

__all__ = [
    "emit_targets",
    "emit_timeseries",
    "ingest",
    "read_pgm",
    "render_overlay",
    "write_frames",
    "write_pgm",
    "write_ppm",
]

_FRAME_RE = re.compile(r"^frame_(\d+)\.pgm$")


def _read_token(stream) -> bytes:
    """Next whitespace-delimited token, skipping netpbm '#' comments."""
    token = b""
    while True:
        c = stream.read(1)
        if not c:
            if token:
                return token
            raise ValueError("unexpected end of file in header")
        if c == b"#":
            stream.readline()
            continue
        if c.isspace():
            if token:
                return token
            continue
        token += c


def read_pgm(path) -> np.ndarray:
    """Read a binary 8-bit PGM into a (h, w) uint8 array."""
    with open(path, "rb") as stream:
        magic = _read_token(stream)
        if magic != b"P5":
            raise ValueError(f"{path}: expected binary PGM (P5), got {magic!r}")
        width = int(_read_token(stream))
        height = int(_read_token(stream))
        maxval = int(_read_token(stream))
        if maxval != 255:
            raise ValueError(f"{path}: unsupported maxval {maxval}, need 255")
        data = stream.read(width * height)
        if len(data) != width * height:
            raise ValueError(f"{path}: truncated pixel data")
    return np.frombuffer(data, dtype=np.uint8).reshape(height, width)


def write_pgm(path, frame: np.ndarray) -> None:
    """Write a gray frame (any numeric dtype, values 0..255) as binary PGM."""
    frame = np.asarray(frame)
    if frame.ndim != 2:
        raise ValueError("gray frame must be 2-D")
    data = np.clip(np.rint(frame), 0, 255).astype(np.uint8) if frame.dtype != np.uint8 else frame
    with open(path, "wb") as stream:
        stream.write(f"P5\n{frame.shape[1]} {frame.shape[0]}\n255\n".encode())
        stream.write(data.tobytes())


def write_ppm(path, image: np.ndarray) -> None:
    """Write an (h, w, 3) RGB image as binary PPM."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError("RGB image must be (h, w, 3)")
    data = np.clip(np.rint(image), 0, 255).astype(np.uint8) if image.dtype != np.uint8 else image
    with open(path, "wb") as stream:
        stream.write(f"P6\n{image.shape[1]} {image.shape[0]}\n255\n".encode())
        stream.write(data.tobytes())


def write_frames(directory, frames) -> list:
    """Write frames as zero-padded frame_NNNNN.pgm files; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, frame in enumerate(frames, start=1):
        path = directory / f"frame_{i:05d}.pgm"
        write_pgm(path, frame)
        paths.append(path)
    return paths


def ingest(directory):
    """Yield frames of a numbered PGM directory as [0, 1] float arrays.

    Frame numbers must be gapless and all frames the same size.
    """
    directory = Path(directory)
    found = []
    for path in directory.iterdir():
        m = _FRAME_RE.match(path.name)
        if m:
            found.append((int(m.group(1)), path))
    if not found:
        raise ValueError(f"{directory}: no frame_NNNNN.pgm files found")
    found.sort()
    numbers = [n for n, _ in found]
    if numbers != list(range(numbers[0], numbers[0] + len(numbers))):
        raise ValueError(f"{directory}: frame numbering has gaps")
    shape = None
    for _, path in found:
        frame = read_pgm(path)
        if shape is None:
            shape = frame.shape
        elif frame.shape != shape:
            raise ValueError(f"{path}: frame size {frame.shape} != first frame {shape}")
        yield frame.astype(float) / 255.0


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def emit_timeseries(reports, path) -> None:
    """One CSV row per frame: t,u,out,spike,collision,n_targets."""
    lines = ["t,u,out,spike,collision,n_targets"]
    for r in reports:
        flag = "true" if r.collision else "false"
        lines.append(f"{r.t},{_fmt(r.u)},{_fmt(r.out)},{r.spike},{flag},{len(r.targets)}")
    Path(path).write_text("\n".join(lines) + "\n")


def emit_targets(reports, path) -> None:
    """One JSON object per (frame, target): {t, X, Y, phi, energy, n_points}."""
    lines = []
    for r in reports:
        for tgt in r.targets:
            lines.append(json.dumps({
                "t": r.t,
                "X": float(_fmt(tgt.x)),
                "Y": float(_fmt(tgt.y)),
                "phi": float(_fmt(tgt.phi)),
                "energy": float(_fmt(tgt.energy)),
                "n_points": tgt.member_count,
            }))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


BOX_COLOR = (255, 64, 64)
ARROW_COLOR = (64, 64, 255)
ARROW_SCALE = 1.0  # arrow length in pixels per unit of cluster energy


def _draw_line(image: np.ndarray, x0: float, y0: float, x1: float, y1: float, color) -> None:
    n = max(int(math.ceil(math.hypot(x1 - x0, y1 - y0) * 2)), 1)
    xs = np.clip(np.rint(np.linspace(x0, x1, n + 1)).astype(int), 0, image.shape[1] - 1)
    ys = np.clip(np.rint(np.linspace(y0, y1, n + 1)).astype(int), 0, image.shape[0] - 1)
    image[ys, xs] = color


def render_overlay(frame: np.ndarray, report, arrow_scale: float = ARROW_SCALE) -> np.ndarray:
    """RGB view of the frame with a box per target and an energy arrow.

    The arrow points along the target's direction with length
    arrow_scale * energy; with no targets the output is the gray frame
    replicated into RGB unchanged.
    """
    gray = np.clip(np.rint(np.asarray(frame, dtype=float)), 0, 255).astype(np.uint8)
    image = np.repeat(gray[:, :, None], 3, axis=2)
    for tgt in report.targets:
        xs, ys = tgt.members[:, 0], tgt.members[:, 1]
        x_min, x_max = int(xs.min()), int(xs.max())
        y_min, y_max = int(ys.min()), int(ys.max())
        _draw_line(image, x_min, y_min, x_max, y_min, BOX_COLOR)
        _draw_line(image, x_min, y_max, x_max, y_max, BOX_COLOR)
        _draw_line(image, x_min, y_min, x_min, y_max, BOX_COLOR)
        _draw_line(image, x_max, y_min, x_max, y_max, BOX_COLOR)
        length = arrow_scale * tgt.energy
        tip_x = tgt.x + length * math.cos(tgt.phi)
        tip_y = tgt.y + length * math.sin(tgt.phi)
        _draw_line(image, tgt.x, tgt.y, tip_x, tip_y, ARROW_COLOR)
        tx = min(max(int(round(tip_x)), 1), image.shape[1] - 2)
        ty = min(max(int(round(tip_y)), 1), image.shape[0] - 2)
        image[ty - 1 : ty + 2, tx - 1 : tx + 2] = ARROW_COLOR
    return image

"""Runtime monitors: camera-occlusion blob detection and a martingale OOD alarm.

The occlusion detector thresholds near-black pixels, labels 8-connected
components, discards speckle components below a minimum area fraction, and
flags the frame when the surviving blob area exceeds a ratio threshold. The
OOD alarm multiplies a power martingale over conformal p-values and fires when
it exceeds a configured threshold.
"""
from __future__ import annotations

import math
import random
from bisect import bisect_left
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

BLACK_THRESHOLD = 10  # intensity on the 0..255 scale
MIN_BLOB_FRACTION = 0.005
RATIO_THRESHOLD = 0.10

MARTINGALE_EPSILON = 0.92
ALARM_THRESHOLD = 100.0

_EIGHT_CONNECTED = np.ones((3, 3), dtype=np.int8)


@dataclass(frozen=True)
class Frame:
    """Grayscale image; intensities are uint8 in [0, 255]."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.pixels.ndim != 2:
            raise ValueError(f"frame must be 2-D, got shape {self.pixels.shape}")
        if self.pixels.size == 0:
            raise ValueError("frame must have nonzero area")
        if self.pixels.dtype != np.uint8:
            object.__setattr__(self, "pixels", self.pixels.astype(np.uint8))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def detect_occlusion(
    frame: Frame,
    black_threshold: int = BLACK_THRESHOLD,
    min_blob_fraction: float = MIN_BLOB_FRACTION,
    ratio_threshold: float = RATIO_THRESHOLD,
) -> tuple[bool, float]:
    """Return (occluded, blob_ratio): ratio of retained near-black blob area to frame area."""
    mask = frame.pixels <= black_threshold
    total = mask.size
    labeled, n = ndimage.label(mask, structure=_EIGHT_CONNECTED)
    if n == 0:
        return False, 0.0
    sizes = np.bincount(labeled.ravel())[1:]  # skip background
    min_pixels = min_blob_fraction * total
    retained = int(sizes[sizes >= min_pixels].sum())
    ratio = retained / total
    return ratio > ratio_threshold, ratio


@dataclass(frozen=True, slots=True)
class FrameSpec:
    """Generator spec for one synthetic frame.

    blob is (x, y, w, h) in pixels or None; salt_prob sprinkles isolated dark
    pixels that a correct detector must ignore.
    """

    width: int = 100
    height: int = 100
    background: int = 120
    blob: tuple[int, int, int, int] | None = None
    salt_prob: float = 0.0
    noise_sd: float = 0.0

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("frame dimensions must be >= 1")
        if self.blob is not None:
            x, y, w, h = self.blob
            if w < 1 or h < 1 or x < 0 or y < 0 or x + w > self.width or y + h > self.height:
                raise ValueError(f"blob {self.blob} does not fit a {self.width}x{self.height} frame")

    def blob_fraction(self) -> float:
        if self.blob is None:
            return 0.0
        _x, _y, w, h = self.blob
        return (w * h) / (self.width * self.height)


def synth_frame(spec: FrameSpec, rng: random.Random) -> tuple[Frame, bool]:
    """Render a frame from a FrameSpec; the label is whether the intended blob
    area exceeds RATIO_THRESHOLD."""
    base = np.full((spec.height, spec.width), spec.background, dtype=np.float64)
    if spec.noise_sd > 0.0:
        noise = np.array(
            [rng.gauss(0.0, spec.noise_sd) for _ in range(base.size)], dtype=np.float64
        ).reshape(base.shape)
        base += noise
    if spec.blob is not None:
        x, y, w, h = spec.blob
        base[y : y + h, x : x + w] = 0.0
    if spec.salt_prob > 0.0:
        salt = np.array(
            [rng.random() < spec.salt_prob for _ in range(base.size)], dtype=bool
        ).reshape(base.shape)
        base[salt] = 0.0
    pixels = np.clip(base, 0.0, 255.0).astype(np.uint8)
    return Frame(pixels), spec.blob_fraction() > RATIO_THRESHOLD


def write_pgm(frame: Frame, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii"))
        fh.write(frame.pixels.tobytes())


def read_pgm(path: str) -> Frame:
    with open(path, "rb") as fh:
        data = fh.read()
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    magic, w, h, maxval = tokens[0], int(tokens[1]), int(tokens[2]), int(tokens[3])
    if maxval != 255:
        raise ValueError(f"only 8-bit PGM supported, got maxval {maxval}")
    if magic == b"P5":
        pixels = np.frombuffer(data[pos + 1 : pos + 1 + w * h], dtype=np.uint8).reshape(h, w)
        return Frame(pixels.copy())
    if magic == b"P2":
        values = data[pos:].split()
        pixels = np.array([int(v) for v in values[: w * h]], dtype=np.uint8).reshape(h, w)
        return Frame(pixels)
    raise ValueError(f"unsupported PGM magic {magic!r}")


# ---------------------------------------------------------------------------
# Martingale OOD alarm
# ---------------------------------------------------------------------------


def p_value(calibration_sorted: tuple[float, ...], score: float) -> float:
    """Smoothed conformal p-value: (#{calibration >= score} + 1) / (n + 1); always in (0, 1]."""
    n = len(calibration_sorted)
    count_ge = n - bisect_left(calibration_sorted, score)
    return (count_ge + 1) / (n + 1)


@dataclass(frozen=True)
class MartingaleState:
    """Power-martingale accumulator over a fixed calibration sample."""

    calibration: tuple[float, ...]
    log_martingale: float = 0.0
    epsilon: float = MARTINGALE_EPSILON
    threshold: float = ALARM_THRESHOLD

    def __post_init__(self) -> None:
        if not self.calibration:
            raise ValueError("calibration sample must be nonempty")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.threshold <= 1.0:
            raise ValueError(f"threshold must be > 1, got {self.threshold}")
        cal = tuple(sorted(self.calibration))
        object.__setattr__(self, "calibration", cal)

    @property
    def alarm(self) -> bool:
        return self.log_martingale > math.log(self.threshold)


def martingale_step(state: MartingaleState, score: float) -> tuple[MartingaleState, bool]:
    """Fold one nonconformity score into the martingale; returns (new state, alarm)."""
    p = p_value(state.calibration, score)
    log_m = state.log_martingale + math.log(state.epsilon) + (state.epsilon - 1.0) * math.log(p)
    new_state = replace(state, log_martingale=log_m)
    return new_state, new_state.alarm

"""Detector-plane products: scan downsampling, PGM bitmaps, shot noise."""

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DetectorScan",
    "detector_scan",
    "to_grayscale_bitmap",
    "read_pgm",
    "add_shot_noise",
]


@dataclass(frozen=True)
class DetectorScan:
    """Intensity matrix recorded by scanning a detector over the plane.

    values[i, j] follows the field-grid convention (first axis x, second
    axis y, both increasing); extents are the physical side lengths.
    """

    values: np.ndarray
    extent_x: float
    extent_y: float

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("scan values must be a 2D matrix")
        if (v < 0).any():
            raise ValueError("scan values must be non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def _overlap_weights(n_fine: int, n_coarse: int) -> np.ndarray:
    """W[k, i] = overlap of fine cell [i, i+1) with coarse cell k, in fine
    cell units.  Rows sum to n_fine / n_coarse; columns sum to 1."""
    ratio = n_fine / n_coarse
    w = np.zeros((n_coarse, n_fine))
    for k in range(n_coarse):
        lo, hi = k * ratio, (k + 1) * ratio
        for i in range(int(np.floor(lo)), min(int(np.ceil(hi)), n_fine)):
            w[k, i] = min(hi, i + 1) - max(lo, i)
    return w


def detector_scan(
    intensity: np.ndarray, extent_x: float, extent_y: float, n_x: int, n_y: int
) -> DetectorScan:
    """Block-average an intensity grid down to detector resolution.

    Cell values are mean intensities, so the area-weighted total is
    conserved exactly.  Requesting more samples than the grid has is a
    domain error (no upsampling).
    """
    intensity = np.asarray(intensity, dtype=float)
    if n_x > intensity.shape[0] or n_y > intensity.shape[1]:
        raise ValueError(
            f"scan resolution {n_x}x{n_y} exceeds the grid "
            f"{intensity.shape[0]}x{intensity.shape[1]}; upsampling unsupported"
        )
    if n_x < 1 or n_y < 1:
        raise ValueError("scan resolution must be positive")
    wx = _overlap_weights(intensity.shape[0], n_x)
    wy = _overlap_weights(intensity.shape[1], n_y)
    ratio = (intensity.shape[0] / n_x) * (intensity.shape[1] / n_y)
    values = wx @ intensity @ wy.T / ratio
    # Clip tiny negative rounding residues from the matrix products.
    np.clip(values, 0.0, None, out=values)
    return DetectorScan(values, extent_x, extent_y)


def to_grayscale_bitmap(scan: DetectorScan) -> bytes:
    """Encode a scan as a binary portable graymap (P5, maxval 255).

    The linear map sends the scan minimum to 0 (black) and the maximum to
    255 (white).  Rows run top to bottom, i.e. from +y downward.  A
    degenerate scan (min == max, e.g. all zero) encodes as all black and
    emits a warning.
    """
    v = scan.values
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        pixels = np.rint(255.0 * (v - lo) / (hi - lo))
    else:
        warnings.warn("degenerate scan (min == max): emitting all-black bitmap")
        pixels = np.zeros_like(v)
    pixels = np.clip(pixels, 0, 255).astype(np.uint8)
    # values[i, j]: i is x (image column), j is y (bottom row first).
    rows = np.flip(pixels.T, axis=0)
    n_x, n_y = v.shape
    header = f"P5\n{n_x} {n_y}\n255\n".encode("ascii")
    return header + rows.tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    """Decode a binary P5 graymap back to a values[i, j] intensity matrix
    (inverse of the to_grayscale_bitmap layout, as floats in [0, 255])."""
    tokens = []
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
    if tokens[0] != b"P5":
        raise ValueError("not a binary P5 graymap")
    width, height, maxval = (int(t) for t in tokens[1:4])
    if maxval > 255:
        raise ValueError("16-bit graymaps are not supported")
    pos += 1  # single whitespace byte after maxval
    raster = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    rows = raster.reshape(height, width)
    return np.flip(rows, axis=0).T.astype(float)


def add_shot_noise(scan: DetectorScan, mean_counts: float, seed: int) -> DetectorScan:
    """Replace each cell with a Poisson draw, scaled so the scan mean is
    mean_counts.  Deterministic for a fixed seed."""
    if mean_counts <= 0:
        raise ValueError("mean counts must be positive")
    mean = float(scan.values.mean())
    if mean <= 0:
        raise ValueError("cannot scale an all-zero scan to a positive mean")
    rng = np.random.default_rng(seed)
    counts = rng.poisson(scan.values * (mean_counts / mean)).astype(float)
    return DetectorScan(counts, scan.extent_x, scan.extent_y)

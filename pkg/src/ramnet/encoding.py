"""Binarization front ends for RAM-based models.

Weightless models consume fixed-length digit patterns, so raw numeric data
has to be turned into bits first.  Four encoders cover the usual cases: a
fixed threshold, a per-sample mean threshold, the thermometer code for
bounded quantities, and a kernel canvas that folds variable-length point
sequences onto a fixed-size activation map.

Each encoder exposes a single ``transform`` method and is immutable after
construction, so instances are safe to share across threads.
"""

import numpy as np

from ._rng import Xoshiro256StarStar
from .errors import EncodingError

__all__ = ["Thresholding", "MeanThresholding", "Thermometer", "KernelCanvas"]


def _as_finite_vector(values, what="input"):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise EncodingError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise EncodingError(f"{what} must contain finite values only")
    return arr


class Thresholding:
    """Binarize by comparing each value against a fixed threshold.

    Bit ``i`` is 1 iff ``values[i] > threshold`` (strict).
    """

    def __init__(self, threshold):
        threshold = float(threshold)
        if not np.isfinite(threshold):
            raise EncodingError("threshold must be finite")
        self.threshold = threshold

    def transform(self, values):
        arr = _as_finite_vector(values)
        return (arr > self.threshold).astype(np.uint8)

    def __repr__(self):
        return f"Thresholding(threshold={self.threshold!r})"


class MeanThresholding:
    """Binarize against the arithmetic mean of the sample itself."""

    def transform(self, values):
        arr = _as_finite_vector(values)
        if arr.size == 0:
            raise EncodingError("mean thresholding needs a non-empty input")
        return (arr > arr.mean()).astype(np.uint8)

    def __repr__(self):
        return "MeanThresholding()"


class Thermometer:
    """Prefix-of-ones code for bounded quantities.

    Each variable ``d`` becomes ``size`` bits; bit ``i`` is 1 iff
    ``d - minimum > i * (maximum - minimum) / size`` (strict), so the
    minimum encodes as all zeros and the maximum as all ones.  Values
    outside ``[minimum, maximum]`` are clamped before encoding, and the
    per-variable codes are concatenated in input order.
    """

    def __init__(self, size, minimum, maximum):
        size = int(size)
        if size < 1:
            raise EncodingError("thermometer size must be >= 1")
        minimum = float(minimum)
        maximum = float(maximum)
        if not (minimum < maximum):
            raise EncodingError("thermometer needs minimum < maximum")
        self.size = size
        self.minimum = minimum
        self.maximum = maximum
        self._thresholds = np.arange(size) * ((maximum - minimum) / size)

    def transform(self, values):
        arr = _as_finite_vector(values)
        shifted = np.clip(arr, self.minimum, self.maximum) - self.minimum
        bits = shifted[:, None] > self._thresholds[None, :]
        return bits.reshape(-1).astype(np.uint8)

    def __repr__(self):
        return (f"Thermometer(size={self.size}, minimum={self.minimum!r}, "
                f"maximum={self.maximum!r})")


class KernelCanvas:
    """Fixed-size activation bitmap over seeded kernels.

    Kernel centers are drawn once, uniformly in the unit hypercube
    ``[0, 1]**dim``, from the library's pinned generator; inputs are
    expected pre-normalized to the same cube.  A kernel's bit group is all
    ones iff at least one input point lies closest to its center
    (Euclidean distance, lowest index on ties), all zeros otherwise.  The
    output length is always ``num_kernels * bits_by_kernel`` no matter how
    many points arrive, which is what lets one canvas resize
    variable-length sequences onto a fixed retina.
    """

    def __init__(self, dim, num_kernels, bits_by_kernel=1, seed=0):
        dim = int(dim)
        num_kernels = int(num_kernels)
        bits_by_kernel = int(bits_by_kernel)
        if dim < 1:
            raise EncodingError("kernel canvas dim must be >= 1")
        if num_kernels < 1:
            raise EncodingError("kernel canvas needs at least one kernel")
        if bits_by_kernel < 1:
            raise EncodingError("bits_by_kernel must be >= 1")
        self.dim = dim
        self.num_kernels = num_kernels
        self.bits_by_kernel = bits_by_kernel
        self.seed = int(seed)
        rng = Xoshiro256StarStar(self.seed, stream=0)
        # Row-major draw order: kernel by kernel, coordinate by coordinate.
        self.centers = np.array(
            [[rng.uniform() for _ in range(dim)] for _ in range(num_kernels)],
            dtype=np.float64,
        )

    @property
    def output_size(self):
        return self.num_kernels * self.bits_by_kernel

    def transform(self, points):
        pts = np.asarray(points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, self.dim)
        elif pts.ndim == 1:
            if pts.size != self.dim:
                raise EncodingError(
                    f"point has {pts.size} coordinates, canvas expects {self.dim}")
            pts = pts.reshape(1, self.dim)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise EncodingError(
                f"points must have shape (m, {self.dim}), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise EncodingError("points must contain finite values only")

        active = np.zeros(self.num_kernels, dtype=bool)
        if len(pts):
            d2 = ((pts[:, None, :] - self.centers[None, :, :]) ** 2).sum(axis=2)
            active[d2.argmin(axis=1)] = True
        return np.repeat(active, self.bits_by_kernel).astype(np.uint8)

    def __repr__(self):
        return (f"KernelCanvas(dim={self.dim}, num_kernels={self.num_kernels}, "
                f"bits_by_kernel={self.bits_by_kernel}, seed={self.seed})")

"""Mask generators for the supported mixing methods.

Every generator takes ``lam``, the intended content fraction of the
*incoming* (second) image, and returns an (H, W) float64 mask whose mean
is 1 - lam: exactly for the counting constructions (constant, FMix,
GridMix), up to placement rounding for CutMix, and loosely for the
Gaussian family. Masks are mostly-one "keep" fields with a lam-sized low
region revealing the partner image; the label weight of a mixed sample is
always recomputed from the merged mask, never from lam itself.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError


class GeneratorKind(enum.Enum):
    """The mixing-method candidate set, in canonical weight order."""

    MIXUP = "mixup"
    CUTMIX = "cutmix"
    FMIX = "fmix"
    GRIDMIX = "gridmix"
    AGMIX = "agmix"


METHODS: tuple[GeneratorKind, ...] = tuple(GeneratorKind)

DEFAULT_FMIX_DECAY = 3.0
DEFAULT_GRID_RANGE: tuple[int, ...] = tuple(range(2, 9))


def _check_lambda(lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"lambda must lie in [0, 1], got {lam}")
    return float(lam)


def _check_dims(dims: tuple[int, int]) -> tuple[int, int]:
    try:
        h, w = (int(d) for d in dims)
    except (TypeError, ValueError):
        raise ArgumentError(f"dims must be a (height, width) pair, got {dims!r}") from None
    if h < 1 or w < 1:
        raise ArgumentError(f"mask dims must be positive, got {dims!r}")
    return h, w


@dataclass(frozen=True)
class GaussianMaskParams:
    """Shape parameters of one Gaussian mask draw.

    center is a (row, col) pixel; sigma scales the kernel; q is the
    off-diagonal of the base covariance [[1, q], [q, 1]] and theta the
    kernel rotation angle in radians.
    """

    center: tuple[int, int]
    sigma: float
    q: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma <= 0.0:
            raise ArgumentError(f"sigma must be positive, got {self.sigma}")
        if not -1.0 < self.q < 1.0:
            raise ArgumentError(f"|q| must be < 1 to keep the covariance non-singular, got {self.q}")


def gen_constant_mask(lam: float, dims: tuple[int, int]) -> np.ndarray:
    """Uniform mask of value 1 - lam (plain linear blending)."""
    lam = _check_lambda(lam)
    h, w = _check_dims(dims)
    return np.full((h, w), 1.0 - lam, dtype=np.float64)


def gen_cutmix_mask(lam: float, dims: tuple[int, int], rng: np.random.Generator) -> np.ndarray:
    """Binary mask with one zero rectangle of side fractions sqrt(lam).

    The rectangle center is drawn uniformly over the image and then
    clamped so the whole rectangle fits inside the borders; lam = 1
    therefore blanks the entire image, and the realized area deviates
    from lam * H * W only through side-length rounding.
    """
    lam = _check_lambda(lam)
    h, w = _check_dims(dims)
    cut = math.sqrt(lam)
    rh = int(np.rint(h * cut))
    rw = int(np.rint(w * cut))
    cy, cx = (int(v) for v in rng.integers(0, [h, w]))
    mask = np.ones((h, w), dtype=np.float64)
    if rh > 0 and rw > 0:
        y0 = min(max(cy - rh // 2, 0), h - rh)
        x0 = min(max(cx - rw // 2, 0), w - rw)
        mask[y0 : y0 + rh, x0 : x0 + rw] = 0.0
    return mask


def lowfreq_field(
    dims: tuple[int, int], rng: np.random.Generator, decay_power: float = DEFAULT_FMIX_DECAY
) -> np.ndarray:
    """Real-valued low-frequency noise field on the given grid.

    A complex Gaussian spectrum is attenuated by |f| ** -decay_power
    (floored at the lowest representable frequency) and inverse-FFT'd.
    """
    h, w = _check_dims(dims)
    if decay_power <= 0.0:
        raise ArgumentError(f"decay_power must be positive, got {decay_power}")
    noise = rng.standard_normal((2, h, w))
    fy = np.fft.fftfreq(h)[:, None]
    fx = np.fft.fftfreq(w)[None, :]
    freq = np.sqrt(fy * fy + fx * fx)
    scale = np.maximum(freq, 1.0 / max(h, w)) ** -decay_power
    spectrum = (noise[0] + 1j * noise[1]) * scale
    return np.fft.ifft2(spectrum).real


def gen_fmix_mask(
    lam: float,
    dims: tuple[int, int],
    rng: np.random.Generator,
    decay_power: float = DEFAULT_FMIX_DECAY,
) -> np.ndarray:
    """Binary mask from thresholded low-frequency Fourier noise.

    Exactly round((1 - lam) * H * W) elements are set to one: the largest
    field values win, ties broken by row-major position. The one-count is
    therefore exact for every lam, and a fixed substream gives masks that
    are nested as lam grows.
    """
    lam = _check_lambda(lam)
    h, w = _check_dims(dims)
    field = lowfreq_field((h, w), rng, decay_power)
    n_ones = int(np.rint((1.0 - lam) * h * w))
    order = np.argsort(-field, axis=None, kind="stable")
    mask = np.zeros(h * w, dtype=np.float64)
    mask[order[:n_ones]] = 1.0
    return mask.reshape(h, w)


def gen_gridmix_mask(
    lam: float,
    dims: tuple[int, int],
    rng: np.random.Generator,
    grid_range: tuple[int, ...] = DEFAULT_GRID_RANGE,
) -> np.ndarray:
    """Binary mask zeroing exactly round(lam * n^2) cells of an n x n grid.

    n is uniform over grid_range. The zeroed cells are the first
    round(lam * n^2) entries of a random cell permutation: a uniform
    without-replacement choice whose chosen sets are nested in lam for a
    fixed substream.
    """
    lam = _check_lambda(lam)
    h, w = _check_dims(dims)
    choices = tuple(sorted(set(int(n) for n in grid_range)))
    if not choices or choices[0] < 1:
        raise ArgumentError(f"grid_range must contain positive cell counts, got {grid_range!r}")
    n = int(rng.choice(choices))
    perm = rng.permutation(n * n)
    n_zero = int(np.rint(lam * n * n))
    row_edges = np.rint(np.linspace(0, h, n + 1)).astype(int)
    col_edges = np.rint(np.linspace(0, w, n + 1)).astype(int)
    mask = np.ones((h, w), dtype=np.float64)
    for cell in perm[:n_zero]:
        r, c = divmod(int(cell), n)
        mask[row_edges[r] : row_edges[r + 1], col_edges[c] : col_edges[c + 1]] = 0.0
    return mask


def gaussian_mask_from_params(params: GaussianMaskParams, dims: tuple[int, int]) -> np.ndarray:
    """Evaluate 1 - exp(-0.5 * d^T C^-1 d) over the pixel grid.

    C = sigma^2 * R(theta) [[1, q], [q, 1]] R(theta)^T; the rotation acts
    on the 2x2 kernel covariance. The value at the center pixel is exactly
    zero and everything else stays strictly below one (up to exp underflow
    for extremely small sigma).
    """
    h, w = _check_dims(dims)
    cy, cx = params.center
    sigma2 = params.sigma * params.sigma
    cos_t, sin_t = math.cos(params.theta), math.sin(params.theta)
    rot = np.array([[cos_t, -sin_t], [sin_t, cos_t]])
    base_inv = np.array([[1.0, -params.q], [-params.q, 1.0]]) / (1.0 - params.q * params.q)
    inv = rot @ base_inv @ rot.T / sigma2
    dy = np.arange(h, dtype=np.float64) - cy
    dx = np.arange(w, dtype=np.float64) - cx
    quad = (
        inv[0, 0] * (dy * dy)[:, None]
        + (inv[0, 1] + inv[1, 0]) * np.outer(dy, dx)
        + inv[1, 1] * (dx * dx)[None, :]
    )
    return 1.0 - np.exp(-0.5 * quad)


def gen_gaussian_mask(
    lam: float,
    dims: tuple[int, int],
    rng: np.random.Generator,
    q: float = 0.0,
    theta: float = 0.0,
    center: tuple[int, int] | None = None,
) -> np.ndarray:
    """Smooth radial mask around a random center pixel.

    sigma = sqrt(lam) * sqrt(H * W), so larger lam reveals more of the
    partner image. q = 0 and theta = 0 give the isotropic special case;
    randomizing them stretches and rotates the revealed region.
    """
    lam = _check_lambda(lam)
    h, w = _check_dims(dims)
    if not -1.0 < q < 1.0:
        raise ArgumentError(f"|q| must be < 1 to keep the covariance non-singular, got {q}")
    if center is None:
        cy, cx = (int(v) for v in rng.integers(0, [h, w]))
    else:
        cy, cx = (int(v) for v in center)
        if not (0 <= cy < h and 0 <= cx < w):
            raise ArgumentError(f"center {center!r} outside image of dims {(h, w)}")
    if lam == 0.0:
        # sigma -> 0 limit: keep everything except the center pixel.
        mask = np.ones((h, w), dtype=np.float64)
        mask[cy, cx] = 0.0
        return mask
    sigma = math.sqrt(lam) * math.sqrt(h * w)
    params = GaussianMaskParams(center=(cy, cx), sigma=sigma, q=q, theta=theta)
    return gaussian_mask_from_params(params, (h, w))


def generate(
    kind: GeneratorKind, lam: float, dims: tuple[int, int], rng: np.random.Generator
) -> np.ndarray:
    """Dispatch to the generator for ``kind``, drawing shape parameters from rng."""
    if kind is GeneratorKind.MIXUP:
        return gen_constant_mask(lam, dims)
    if kind is GeneratorKind.CUTMIX:
        return gen_cutmix_mask(lam, dims, rng)
    if kind is GeneratorKind.FMIX:
        return gen_fmix_mask(lam, dims, rng)
    if kind is GeneratorKind.GRIDMIX:
        return gen_gridmix_mask(lam, dims, rng)
    if kind is GeneratorKind.AGMIX:
        q = float(rng.uniform(-1.0, 1.0))
        theta = float(rng.uniform(0.0, math.pi))
        return gen_gaussian_mask(lam, dims, rng, q=q, theta=theta)
    raise ArgumentError(f"unknown generator kind: {kind!r}")

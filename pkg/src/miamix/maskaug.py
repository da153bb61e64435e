"""Ratio-preserving morphological mask augmentation.

Eligible masks (the region-based binary ones) may be rotated and sheared,
and independently smoothed with a box filter. Plain blending and Gaussian
masks are left untouched: one is featureless, the other already randomizes
its own shape. Geometric warps use edge-replicate fill so the augmented
mask's mean stays close to the original's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ArgumentError, ConfigError
from .generators import GeneratorKind

INELIGIBLE = frozenset({GeneratorKind.MIXUP, GeneratorKind.AGMIX})


@dataclass(frozen=True)
class MaskAugPolicy:
    # rotate/shear ranges are sized so the augmented mask's mean stays
    # within 0.05 of the original for every mask family (worst case lives
    # at thin border-hugging keep bands under edge-replicate fill)
    p_smooth: float = 0.5
    p_aug: float = 0.25
    smooth_windows: tuple[int, ...] = (3, 5, 7)
    max_rotate: float = math.pi / 20
    max_shear: float = 0.09
    eligible: frozenset = frozenset(
        {GeneratorKind.CUTMIX, GeneratorKind.FMIX, GeneratorKind.GRIDMIX}
    )

    def validate(self) -> None:
        for name in ("p_smooth", "p_aug"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {p}")
        if not self.smooth_windows:
            raise ConfigError("smooth_windows must not be empty")
        for win in self.smooth_windows:
            if win < 3 or win % 2 == 0:
                raise ConfigError(f"smoothing windows must be odd and >= 3, got {win}")
        if not 0.0 <= self.max_rotate <= math.pi:
            raise ConfigError(f"max_rotate must lie in [0, pi], got {self.max_rotate}")
        if not 0.0 <= self.max_shear < 1.0:
            raise ConfigError(f"max_shear must lie in [0, 1), got {self.max_shear}")
        overlap = set(self.eligible) & INELIGIBLE
        if overlap:
            names = ", ".join(sorted(k.value for k in overlap))
            raise ConfigError(f"mask augmentation does not apply to: {names}")


def smooth_mask(mask: np.ndarray, window: int) -> np.ndarray:
    """Box-filter the mask with a window x window average, reflect-padded."""
    mask = np.asarray(mask, dtype=np.float64)
    h, w = mask.shape
    if window < 1 or window % 2 == 0:
        raise ArgumentError(f"window must be an odd positive integer, got {window}")
    if window > min(h, w):
        raise ArgumentError(f"window {window} exceeds mask dims {(h, w)}")
    if window == 1:
        return mask.copy()
    out = ndimage.uniform_filter(mask, size=window, mode="reflect")
    return np.clip(out, 0.0, 1.0)


def rotate_mask(mask: np.ndarray, theta: float) -> np.ndarray:
    """Rotate about the mask center, bilinear resampling, edge-replicate fill."""
    mask = np.asarray(mask, dtype=np.float64)
    if not -math.pi <= theta <= math.pi:
        raise ArgumentError(f"|theta| must be <= pi, got {theta}")
    if theta == 0.0:
        return mask.copy()
    out = ndimage.rotate(mask, math.degrees(theta), reshape=False, order=1, mode="nearest")
    return np.clip(out, 0.0, 1.0)


def shear_mask(mask: np.ndarray, sx: float, sy: float) -> np.ndarray:
    """Shear about the mask center, bilinear resampling, edge-replicate fill.

    sx displaces columns proportionally to the row offset, sy displaces
    rows proportionally to the column offset.
    """
    mask = np.asarray(mask, dtype=np.float64)
    det = 1.0 - sx * sy
    if abs(sx) >= 1.0 or abs(sy) >= 1.0 or abs(det) < 1e-9:
        raise ArgumentError(f"shear ({sx}, {sy}) is too extreme to invert")
    if sx == 0.0 and sy == 0.0:
        return mask.copy()
    inv = np.array([[1.0, -sy], [-sx, 1.0]]) / det
    center = (np.asarray(mask.shape, dtype=np.float64) - 1.0) / 2.0
    offset = center - inv @ center
    out = ndimage.affine_transform(mask, inv, offset=offset, order=1, mode="nearest")
    return np.clip(out, 0.0, 1.0)


@dataclass(frozen=True)
class MaskAugDraws:
    """The sampled augmentation decisions for one mask, kept for audit/replay."""

    rotate_shear: bool = False
    theta: float = 0.0
    shear_x: float = 0.0
    shear_y: float = 0.0
    smooth: bool = False
    window: int = 1

    def to_dict(self) -> dict:
        return {
            "rotate_shear": self.rotate_shear,
            "theta": self.theta,
            "shear_x": self.shear_x,
            "shear_y": self.shear_y,
            "smooth": self.smooth,
            "window": self.window,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MaskAugDraws":
        return cls(
            rotate_shear=bool(data["rotate_shear"]),
            theta=float(data["theta"]),
            shear_x=float(data["shear_x"]),
            shear_y=float(data["shear_y"]),
            smooth=bool(data["smooth"]),
            window=int(data["window"]),
        )


def sample_aug_draws(
    kind: GeneratorKind, policy: MaskAugPolicy, rng: np.random.Generator
) -> MaskAugDraws | None:
    """Draw the augmentation decisions for one mask; None if kind is ineligible.

    Draw order is fixed: geometry coin, (theta, sx, sy) if it hit, smooth
    coin, window if it hit.
    """
    if kind not in policy.eligible:
        return None
    rotate_shear = bool(rng.random() < policy.p_aug)
    theta = sx = sy = 0.0
    if rotate_shear:
        theta = float(rng.uniform(-policy.max_rotate, policy.max_rotate))
        sx, sy = (float(v) for v in rng.uniform(-policy.max_shear, policy.max_shear, size=2))
    smooth = bool(rng.random() < policy.p_smooth)
    window = 1
    if smooth:
        window = int(rng.choice(policy.smooth_windows))
    return MaskAugDraws(
        rotate_shear=rotate_shear, theta=theta, shear_x=sx, shear_y=sy, smooth=smooth, window=window
    )


def apply_aug_draws(mask: np.ndarray, draws: MaskAugDraws | None) -> np.ndarray:
    """Apply previously sampled augmentation decisions to a mask."""
    if draws is None:
        return mask
    out = mask
    if draws.rotate_shear:
        out = rotate_mask(out, draws.theta)
        out = shear_mask(out, draws.shear_x, draws.shear_y)
    if draws.smooth:
        out = smooth_mask(out, draws.window)
    return out


def augment_mask(
    mask: np.ndarray, kind: GeneratorKind, policy: MaskAugPolicy, rng: np.random.Generator
) -> np.ndarray:
    """Sample augmentation decisions for ``kind`` and apply them to ``mask``."""
    policy.validate()
    return apply_aug_draws(mask, sample_aug_draws(kind, policy, rng))

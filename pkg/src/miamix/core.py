"""Core value conventions, elementary blend operations, and the RNG contract.

Conventions used throughout the package:

* an image is a float64 array of shape (H, W, C) with C in {1, 3} and
  values in [0, 1] (8-bit sources are divided by 255 on ingest),
* a mix mask is a float64 array of shape (H, W) in [0, 1] holding the
  per-pixel weight of the *first* image of a pair,
* a soft label is a float64 probability vector of shape (L,).

All operations are pure: arrays are never mutated in place, so any number
of workers may share inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

LABEL_SUM_TOL = 1e-6

_U64 = 2**64


def validate_image(image: np.ndarray) -> np.ndarray:
    """Check image shape/range and return it as a float64 array."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 3 or image.shape[2] not in (1, 3):
        raise ArgumentError(
            f"expected an (H, W, C) image with C in {{1, 3}}, got shape {image.shape}"
        )
    if image.size == 0:
        raise ArgumentError("image has no pixels")
    if image.min() < 0.0 or image.max() > 1.0:
        raise ArgumentError("image values must lie in [0, 1]")
    return image


def validate_mask(mask: np.ndarray) -> np.ndarray:
    """Check mask shape/range and return it as a float64 array."""
    mask = np.asarray(mask, dtype=np.float64)
    if mask.ndim != 2:
        raise ArgumentError(f"expected an (H, W) mask, got shape {mask.shape}")
    if mask.size == 0:
        raise ArgumentError("mask has no pixels")
    if mask.min() < 0.0 or mask.max() > 1.0:
        raise ArgumentError("mask values must lie in [0, 1]")
    return mask


def validate_label(probs: np.ndarray) -> np.ndarray:
    """Check that probs is a probability vector and return it as float64."""
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 1 or probs.size == 0:
        raise ArgumentError(f"expected a non-empty 1-D label vector, got shape {probs.shape}")
    if probs.min() < 0.0:
        raise ArgumentError("label probabilities must be non-negative")
    if abs(float(probs.sum()) - 1.0) > LABEL_SUM_TOL:
        raise ArgumentError("label probabilities must sum to 1")
    return probs


@dataclass(frozen=True)
class RngStream:
    """Keyed source of reproducible random substreams.

    A stream is identified by (seed, stream_id); ``gen(*tags)`` mints a
    fresh generator for one purpose (one integer tag path). Equal keys
    yield bit-identical draw sequences regardless of thread scheduling or
    call order, which is what makes per-sample work safe to farm out.
    Adding a new purpose tag never perturbs draws made under other tags.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= int(value) < _U64:
                raise ArgumentError(f"{name} must be an unsigned 64-bit integer, got {value!r}")

    def gen(self, *tags: int) -> np.random.Generator:
        key = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, *tags))
        return np.random.Generator(np.random.PCG64(key))


def make_one_hot(class_index: int, num_classes: int) -> np.ndarray:
    """Return the one-hot probability vector for class_index out of num_classes."""
    if num_classes < 1:
        raise ArgumentError(f"num_classes must be >= 1, got {num_classes}")
    if not 0 <= class_index < num_classes:
        raise ArgumentError(f"class index {class_index} out of range for {num_classes} classes")
    probs = np.zeros(num_classes, dtype=np.float64)
    probs[class_index] = 1.0
    return probs


def mask_mean(mask: np.ndarray) -> float:
    """Exactly rounded arithmetic mean of all mask elements.

    Uses compensated summation: the mean drives label weights, so constant
    masks must average to their value bit-for-bit regardless of size.
    """
    mask = np.asarray(mask, dtype=np.float64)
    if mask.size == 0:
        raise ArgumentError("cannot take the mean of an empty mask")
    return math.fsum(mask.ravel()) / mask.size


def apply_mask(mask: np.ndarray, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Blend two images per pixel: mask * first + (1 - mask) * second.

    The single-channel mask is broadcast across color channels.
    """
    mask = np.asarray(mask, dtype=np.float64)
    first = np.asarray(first, dtype=np.float64)
    second = np.asarray(second, dtype=np.float64)
    if first.shape != second.shape:
        raise ArgumentError(f"image shapes differ: {first.shape} vs {second.shape}")
    if first.ndim != 3:
        raise ArgumentError(f"expected (H, W, C) images, got shape {first.shape}")
    if mask.shape != first.shape[:2]:
        raise ArgumentError(
            f"mask shape {mask.shape} does not match image spatial dims {first.shape[:2]}"
        )
    weight = mask[:, :, None]
    return weight * first + (1.0 - weight) * second


def blend_labels(lam: float, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Convex label combination lam * first + (1 - lam) * second."""
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"lambda must lie in [0, 1], got {lam}")
    first = np.asarray(first, dtype=np.float64)
    second = np.asarray(second, dtype=np.float64)
    if first.shape != second.shape or first.ndim != 1:
        raise ArgumentError(f"label shapes differ: {first.shape} vs {second.shape}")
    return lam * first + (1.0 - lam) * second

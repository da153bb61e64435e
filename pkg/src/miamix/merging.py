"""Merging of stacked mix masks and the label weight they imply.

Merging accumulates revealed (partner-image) area: the product mode
multiplies keep-weights pointwise, the sum mode adds the reveal
complements and clips, so both shrink the mask. The label weight of the
merged sample is the merged mask's mean, never the sum of sampled ratios.
"""

from __future__ import annotations

import enum

import numpy as np

from .core import mask_mean
from .errors import ArgumentError


class MergeMode(enum.Enum):
    PRODUCT = "product"
    CLIPPED_SUM = "sum"


def _stack(masks) -> np.ndarray:
    masks = list(masks)
    if not masks:
        raise ArgumentError("cannot merge an empty mask list")
    shape = np.asarray(masks[0]).shape
    for m in masks:
        if np.asarray(m).shape != shape:
            raise ArgumentError(f"mask dims differ: {np.asarray(m).shape} vs {shape}")
    return np.stack([np.asarray(m, dtype=np.float64) for m in masks])


def merge_product(masks) -> np.ndarray:
    """Pointwise product of all masks."""
    stack = _stack(masks)
    if stack.shape[0] == 1:
        return stack[0].copy()
    return np.prod(stack, axis=0)


def merge_clipped_sum(masks, literal: bool = False) -> np.ndarray:
    """Clipped-sum merge, accumulated over reveal complements.

    Summing mostly-one keep masks directly saturates at 1, so the revealed
    fractions (1 - mask) are summed and clipped instead, then complemented
    back; on binary masks with disjoint zero regions this equals the
    product merge. ``literal=True`` exposes the plain clip(sum(masks), 0, 1)
    for experimentation.
    """
    stack = _stack(masks)
    if stack.shape[0] == 1:
        return stack[0].copy()
    if literal:
        return np.clip(np.sum(stack, axis=0), 0.0, 1.0)
    revealed = np.clip(np.sum(1.0 - stack, axis=0), 0.0, 1.0)
    return 1.0 - revealed


def merge(masks, mode: MergeMode) -> np.ndarray:
    if mode is MergeMode.PRODUCT:
        return merge_product(masks)
    if mode is MergeMode.CLIPPED_SUM:
        return merge_clipped_sum(masks)
    raise ArgumentError(f"unknown merge mode: {mode!r}")


def merged_lambda(mask_merged: np.ndarray) -> float:
    """Label weight of the first image: the mean of the merged mask."""
    return mask_mean(mask_merged)

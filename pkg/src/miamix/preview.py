"""Contact-sheet rendering: mixed samples above their merged masks."""

from __future__ import annotations

import numpy as np

from .core import RngStream, make_one_hot
from .dataset_io import decode_image
from .errors import ArgumentError
from .generators import lowfreq_field
from .pipeline import MiamixConfig, mix_batch

# Substream tag for synthetic source imagery; distinct from pipeline tags.
TAG_SYNTH = 100


def synthetic_image(dims: tuple[int, int], channels: int, rng: np.random.Generator) -> np.ndarray:
    """Smooth random color field in [0, 1]; visually distinct per stream."""
    planes = []
    for _ in range(channels):
        field = lowfreq_field(dims, rng, decay_power=2.5)
        lo, hi = float(field.min()), float(field.max())
        if hi - lo < 1e-12:
            planes.append(np.full(dims, 0.5))
        else:
            planes.append((field - lo) / (hi - lo))
    return np.stack(planes, axis=-1)


def synthetic_batch(
    count: int, dims: tuple[int, int], channels: int, seed: int
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Deterministic synthetic images with one class per sample."""
    images = [
        synthetic_image(dims, channels, RngStream(seed, i).gen(TAG_SYNTH)) for i in range(count)
    ]
    labels = [make_one_hot(i, count) for i in range(count)]
    return images, labels


def contact_sheet(
    cfg: MiamixConfig,
    rows: int,
    cols: int,
    dims: tuple[int, int] = (64, 64),
    channels: int = 3,
    entries=None,
) -> np.ndarray:
    """Render a rows x cols tile grid alternating sample rows and mask rows.

    Even tile rows hold mixed samples, the row below holds their merged
    masks in grayscale (0 = partner-image region), so a rows x cols grid
    shows (rows / 2) * cols sample/mask pairs.
    """
    if rows < 2 or rows % 2 != 0:
        raise ArgumentError(f"grid rows must be even and >= 2 (sample/mask pairs), got {rows}")
    if cols < 1:
        raise ArgumentError(f"grid cols must be >= 1, got {cols}")
    pairs = (rows // 2) * cols
    if entries is not None:
        if len(entries) < pairs:
            raise ArgumentError(f"need {pairs} manifest entries for the grid, got {len(entries)}")
        images = [decode_image(e.path) for e in entries[:pairs]]
        shape = images[0].shape
        for im in images:
            if im.shape != shape:
                raise ArgumentError("preview requires manifest images of identical dims")
        num_classes = max(e.class_index for e in entries[:pairs]) + 1
        labels = [make_one_hot(e.class_index, num_classes) for e in entries[:pairs]]
        channels = shape[2]
    else:
        images, labels = synthetic_batch(pairs, dims, channels, cfg.seed)

    samples = mix_batch(images, labels, cfg, keep_masks=True)
    h, w = samples[0].image.shape[:2]
    sheet = np.zeros((rows * h, cols * w, channels), dtype=np.float64)
    for pair_row in range(rows // 2):
        for col in range(cols):
            sample = samples[pair_row * cols + col]
            mask_tile = np.repeat(sample.merged_mask[:, :, None], channels, axis=2)
            top = 2 * pair_row * h
            sheet[top : top + h, col * w : (col + 1) * w] = sample.image
            sheet[top + h : top + 2 * h, col * w : (col + 1) * w] = mask_tile
    return sheet

"""Sampling of layer counts, mixing methods, and mixing ratios.

The k mixing ratios of one sample come from a (k+1)-component Dirichlet
with parameters (alpha, ..., alpha, k * alpha); the first k components are
the per-mask ratios and the last one is the first image's retained budget.
For k = 1 this reduces to the classic Beta(alpha, alpha) draw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .generators import METHODS, GeneratorKind


@dataclass(frozen=True)
class RatioDraw:
    """One Dirichlet draw: k per-mask ratios plus the leftover budget."""

    k: int
    lambdas: tuple[float, ...]
    residual: float


@dataclass(frozen=True)
class MethodDraw:
    methods: tuple[GeneratorKind, ...]


def sample_layer_count(k_choices, rng: np.random.Generator) -> int:
    """Uniform draw of the number of mixing layers from k_choices."""
    choices = tuple(sorted(set(int(k) for k in k_choices)))
    if not choices:
        raise ConfigError("k_choices must not be empty")
    if choices[0] < 1:
        raise ConfigError(f"layer counts must be >= 1, got {choices}")
    return choices[int(rng.integers(0, len(choices)))]


def sample_methods(k: int, weights, rng: np.random.Generator) -> MethodDraw:
    """k independent categorical draws over the method set with the given weights."""
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (len(METHODS),):
        raise ConfigError(f"expected {len(METHODS)} method weights, got shape {weights.shape}")
    if weights.min() < 0.0:
        raise ConfigError("method weights must be non-negative")
    total = float(weights.sum())
    if total <= 0.0:
        raise ConfigError("method weights must not all be zero")
    idx = rng.choice(len(METHODS), size=k, p=weights / total)
    return MethodDraw(methods=tuple(METHODS[int(i)] for i in idx))


def sample_lambdas(k: int, alpha: float, rng: np.random.Generator) -> RatioDraw:
    """Dirichlet(alpha, ..., alpha, k * alpha) via normalized Gamma draws."""
    if alpha <= 0.0:
        raise ConfigError(f"alpha must be positive, got {alpha}")
    if k < 1:
        raise ConfigError(f"layer count must be >= 1, got {k}")
    shapes = np.full(k + 1, alpha, dtype=np.float64)
    shapes[k] = k * alpha
    gammas = rng.gamma(shape=shapes, scale=1.0)
    total = float(gammas.sum())
    while total <= 0.0:  # guards against underflow at very small alpha
        gammas = rng.gamma(shape=shapes, scale=1.0)
        total = float(gammas.sum())
    parts = gammas / total
    return RatioDraw(k=k, lambdas=tuple(float(v) for v in parts[:k]), residual=float(parts[k]))


def sample_beta(alpha: float, rng: np.random.Generator) -> float:
    """Single-mask ratio draw, distributed as Beta(alpha, alpha)."""
    return sample_lambdas(1, alpha, rng).lambdas[0]

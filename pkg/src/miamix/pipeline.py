"""End-to-end multi-stage mixing over a batch.

For each sample the engine: pairs it with a partner (or with itself),
augments both views independently, samples the layer count, methods, and
ratios, generates and augments one mask per layer, merges the masks, and
blends pixels and labels with the merged mask's realized mean.

Every random decision comes from a purpose-tagged substream keyed by
(seed, global sample index, purpose), so outputs are reproducible for any
worker count and adding a draw to one stage never shifts the others.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import RngStream, apply_mask, blend_labels
from .errors import ArgumentError, ConfigError
from .generators import METHODS, GeneratorKind, generate
from .maskaug import MaskAugDraws, MaskAugPolicy, apply_aug_draws, sample_aug_draws
from .merging import MergeMode, merge, merged_lambda
from .sampling import sample_lambdas, sample_layer_count, sample_methods

# Purpose tags for substream derivation. Appending new tags is safe;
# renumbering existing ones changes every output.
TAG_PAIRING = 0
TAG_VIEW_FIRST = 1
TAG_VIEW_PARTNER = 2
TAG_K = 3
TAG_METHODS = 4
TAG_LAMBDAS = 5
TAG_MASK = 6
TAG_MASK_AUG = 7


@dataclass(frozen=True)
class ViewAugPolicy:
    """Input-view augmentation: horizontal flip plus reflect-pad random crop."""

    hflip_p: float = 0.5
    crop_padding: int = 4
    enabled: bool = True

    def validate(self) -> None:
        if not 0.0 <= self.hflip_p <= 1.0:
            raise ConfigError(f"hflip_p must lie in [0, 1], got {self.hflip_p}")
        if self.crop_padding < 0:
            raise ConfigError(f"crop_padding must be >= 0, got {self.crop_padding}")


@dataclass(frozen=True)
class MiamixConfig:
    """All engine parameters with their default operating point."""

    alpha: float = 1.0
    k_choices: tuple[int, ...] = (1, 2)
    method_weights: tuple[float, ...] = (2.0, 1.0, 1.0, 1.0, 1.0)
    p_self: float = 0.10
    mask_aug: MaskAugPolicy = field(default_factory=MaskAugPolicy)
    merge_mode: MergeMode = MergeMode.PRODUCT
    view_aug: ViewAugPolicy = field(default_factory=ViewAugPolicy)
    seed: int = 0
    pair_with_replacement: bool = False
    force_lambda: float | None = None

    def validate(self) -> None:
        if self.alpha <= 0.0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not self.k_choices or any(int(k) < 1 for k in self.k_choices):
            raise ConfigError(f"k_choices must be a non-empty set of positive ints, got {self.k_choices!r}")
        weights = np.asarray(self.method_weights, dtype=np.float64)
        if weights.shape != (len(METHODS),):
            raise ConfigError(f"expected {len(METHODS)} method weights, got {self.method_weights!r}")
        if weights.min() < 0.0 or weights.sum() <= 0.0:
            raise ConfigError("method weights must be non-negative and not all zero")
        if not 0.0 <= self.p_self <= 1.0:
            raise ConfigError(f"p_self must lie in [0, 1], got {self.p_self}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.force_lambda is not None and not 0.0 <= self.force_lambda <= 1.0:
            raise ConfigError(f"force_lambda must lie in [0, 1], got {self.force_lambda}")
        self.mask_aug.validate()
        self.view_aug.validate()

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "k_choices": list(self.k_choices),
            "method_weights": list(self.method_weights),
            "p_self": self.p_self,
            "mask_aug": {
                "p_smooth": self.mask_aug.p_smooth,
                "p_aug": self.mask_aug.p_aug,
                "smooth_windows": list(self.mask_aug.smooth_windows),
                "max_rotate": self.mask_aug.max_rotate,
                "max_shear": self.mask_aug.max_shear,
                "eligible": sorted(k.value for k in self.mask_aug.eligible),
            },
            "merge_mode": self.merge_mode.value,
            "view_aug": {
                "hflip_p": self.view_aug.hflip_p,
                "crop_padding": self.view_aug.crop_padding,
                "enabled": self.view_aug.enabled,
            },
            "seed": self.seed,
            "pair_with_replacement": self.pair_with_replacement,
            "force_lambda": self.force_lambda,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MiamixConfig":
        aug = data["mask_aug"]
        view = data["view_aug"]
        cfg = cls(
            alpha=float(data["alpha"]),
            k_choices=tuple(int(k) for k in data["k_choices"]),
            method_weights=tuple(float(w) for w in data["method_weights"]),
            p_self=float(data["p_self"]),
            mask_aug=MaskAugPolicy(
                p_smooth=float(aug["p_smooth"]),
                p_aug=float(aug["p_aug"]),
                smooth_windows=tuple(int(w) for w in aug["smooth_windows"]),
                max_rotate=float(aug["max_rotate"]),
                max_shear=float(aug["max_shear"]),
                eligible=frozenset(GeneratorKind(v) for v in aug["eligible"]),
            ),
            merge_mode=MergeMode(data["merge_mode"]),
            view_aug=ViewAugPolicy(
                hflip_p=float(view["hflip_p"]),
                crop_padding=int(view["crop_padding"]),
                enabled=bool(view["enabled"]),
            ),
            seed=int(data["seed"]),
            pair_with_replacement=bool(data["pair_with_replacement"]),
            force_lambda=None if data.get("force_lambda") is None else float(data["force_lambda"]),
        )
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class MixPlan:
    """The full sampled recipe for one mixed sample."""

    index_first: int
    index_partner: int
    is_self_mix: bool
    k: int
    methods: tuple[GeneratorKind, ...]
    lambdas: tuple[float, ...]
    mask_aug_draws: tuple[MaskAugDraws | None, ...]
    stream_id: int


@dataclass
class MixedSample:
    image: np.ndarray
    label: np.ndarray
    lambda_merged: float
    plan: MixPlan
    merged_mask: np.ndarray | None = None  # kept only on request, for previews/audit


def pair_samples(
    batch_size: int,
    p_self: float,
    rng: np.random.Generator,
    with_replacement: bool = False,
) -> list[tuple[int, int, bool]]:
    """Assign a partner to every batch index.

    A uniform random permutation (or independent uniform draws when
    with_replacement is set) proposes partners; each sample then keeps
    itself as partner with probability p_self.
    """
    if batch_size < 1:
        raise ArgumentError(f"batch_size must be >= 1, got {batch_size}")
    if not 0.0 <= p_self <= 1.0:
        raise ArgumentError(f"p_self must lie in [0, 1], got {p_self}")
    if with_replacement:
        partners = rng.integers(0, batch_size, size=batch_size)
    else:
        partners = rng.permutation(batch_size)
    self_coins = rng.random(batch_size) < p_self
    return [
        (i, i if self_coins[i] else int(partners[i]), bool(self_coins[i]))
        for i in range(batch_size)
    ]


def view_augment(image: np.ndarray, policy: ViewAugPolicy, rng: np.random.Generator) -> np.ndarray:
    """One independent augmentation draw of an input view.

    Horizontal flip with probability hflip_p, then reflect-pad by
    crop_padding and crop back to the original size at a random offset.
    Output dims always equal input dims; padding is clamped to the largest
    amount reflect-padding supports on tiny images.
    """
    image = np.asarray(image, dtype=np.float64)
    if not policy.enabled:
        return image
    h, w = image.shape[:2]
    out = image
    if rng.random() < policy.hflip_p:
        out = out[:, ::-1, :]
    pad = min(policy.crop_padding, h - 1, w - 1)
    if pad > 0:
        padded = np.pad(out, ((pad, pad), (pad, pad), (0, 0)), mode="reflect")
        dy, dx = (int(v) for v in rng.integers(0, 2 * pad + 1, size=2))
        out = padded[dy : dy + h, dx : dx + w]
    return np.ascontiguousarray(out)


def mix_one(
    first_image: np.ndarray,
    first_label: np.ndarray,
    partner_image: np.ndarray,
    partner_label: np.ndarray,
    cfg: MiamixConfig,
    stream: RngStream,
    plan: MixPlan | None = None,
    index_first: int = 0,
    index_partner: int = 0,
    is_self_mix: bool = False,
    keep_mask: bool = False,
) -> MixedSample:
    """Mix one pair of augmented views into a sample.

    When ``plan`` is given its layer count, methods, ratios, and
    augmentation decisions are reused instead of sampled (the replay
    path); mask shape parameters are always re-derived from ``stream``.
    """
    if first_image.shape != partner_image.shape:
        raise ArgumentError(
            f"view shapes differ: {first_image.shape} vs {partner_image.shape}"
        )
    if first_label.shape != partner_label.shape:
        raise ArgumentError(
            f"label shapes differ: {first_label.shape} vs {partner_label.shape}"
        )
    dims = first_image.shape[:2]

    if plan is None:
        k = sample_layer_count(cfg.k_choices, stream.gen(TAG_K))
        methods = sample_methods(k, cfg.method_weights, stream.gen(TAG_METHODS)).methods
        if cfg.force_lambda is not None:
            lambdas = (float(cfg.force_lambda),) * k
        else:
            lambdas = sample_lambdas(k, cfg.alpha, stream.gen(TAG_LAMBDAS)).lambdas
        draws = tuple(
            sample_aug_draws(methods[j], cfg.mask_aug, stream.gen(TAG_MASK_AUG, j))
            for j in range(k)
        )
        plan = MixPlan(
            index_first=index_first,
            index_partner=index_partner,
            is_self_mix=is_self_mix,
            k=k,
            methods=methods,
            lambdas=lambdas,
            mask_aug_draws=draws,
            stream_id=stream.stream_id,
        )

    masks = [
        apply_aug_draws(generate(m, lam, dims, stream.gen(TAG_MASK, j)), d)
        for j, (m, lam, d) in enumerate(zip(plan.methods, plan.lambdas, plan.mask_aug_draws))
    ]
    mask_merged = merge(masks, cfg.merge_mode)
    lam_merged = merged_lambda(mask_merged)
    image = apply_mask(mask_merged, first_image, partner_image)
    label = blend_labels(lam_merged, first_label, partner_label)
    return MixedSample(
        image=image,
        label=label,
        lambda_merged=lam_merged,
        plan=plan,
        merged_mask=mask_merged if keep_mask else None,
    )


def mix_batch(
    images,
    labels,
    cfg: MiamixConfig,
    workers: int = 1,
    index_offset: int = 0,
    batch_index: int = 0,
    keep_masks: bool = False,
) -> list[MixedSample]:
    """Mix a whole batch; output order matches input order.

    Sample i draws from substreams keyed by its global index
    (index_offset + i), and partner views are augmented under the
    partner's own key, so results are bit-identical for any worker count.
    """
    cfg.validate()
    images = [np.asarray(im, dtype=np.float64) for im in images]
    labels = [np.asarray(lb, dtype=np.float64) for lb in labels]
    n = len(images)
    if n == 0:
        raise ArgumentError("empty batch")
    if len(labels) != n:
        raise ArgumentError(f"{n} images but {len(labels)} labels")
    dims = images[0].shape
    for im in images:
        if im.shape != dims:
            raise ArgumentError(f"all batch images must share dims; got {im.shape} vs {dims}")

    pair_rng = RngStream(cfg.seed, batch_index).gen(TAG_PAIRING)
    pairs = pair_samples(n, cfg.p_self, pair_rng, with_replacement=cfg.pair_with_replacement)

    def build(i: int) -> MixedSample:
        _, partner, is_self = pairs[i]
        first_global = index_offset + i
        partner_global = index_offset + partner
        stream = RngStream(cfg.seed, first_global)
        first_view = view_augment(images[i], cfg.view_aug, stream.gen(TAG_VIEW_FIRST))
        partner_view = view_augment(
            images[partner], cfg.view_aug, RngStream(cfg.seed, partner_global).gen(TAG_VIEW_PARTNER)
        )
        return mix_one(
            first_view,
            labels[i],
            partner_view,
            labels[partner],
            cfg,
            stream,
            index_first=first_global,
            index_partner=partner_global,
            is_self_mix=is_self,
            keep_mask=keep_masks,
        )

    if workers <= 1:
        return [build(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(build, range(n)))


def mixup_only_config(cfg: MiamixConfig) -> MiamixConfig:
    """The plain single-layer linear-blend baseline of the same config."""
    return replace(cfg, k_choices=(1,), method_weights=(1.0, 0.0, 0.0, 0.0, 0.0))

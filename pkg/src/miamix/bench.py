"""Throughput benchmark: identity pass-through vs plain blending vs full engine."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import ArgumentError
from .pipeline import MiamixConfig, mix_batch, mixup_only_config
from .preview import synthetic_batch


@dataclass(frozen=True)
class BenchRow:
    name: str
    samples: int
    seconds: float

    @property
    def rate(self) -> float:
        return self.samples / max(self.seconds, 1e-9)


@dataclass(frozen=True)
class BenchReport:
    identity: BenchRow
    mixup: BenchRow
    full: BenchRow

    @property
    def ratio_full_vs_identity(self) -> float:
        return self.full.seconds / max(self.identity.seconds, 1e-9)

    @property
    def ratio_full_vs_mixup(self) -> float:
        return self.full.seconds / max(self.mixup.seconds, 1e-9)

    def format(self) -> str:
        lines = [f"{'pipeline':<10} {'samples':>8} {'seconds':>9} {'samples/sec':>12}"]
        for row in (self.identity, self.mixup, self.full):
            lines.append(f"{row.name:<10} {row.samples:>8d} {row.seconds:>9.3f} {row.rate:>12.1f}")
        lines.append(f"overhead miamix/identity = {self.ratio_full_vs_identity:.2f}")
        lines.append(f"overhead miamix/mixup    = {self.ratio_full_vs_mixup:.2f}")
        return "\n".join(lines)


def run_bench(
    num_samples: int,
    dims: tuple[int, int] = (64, 64),
    channels: int = 3,
    batch_size: int = 256,
    cfg: MiamixConfig | None = None,
) -> BenchReport:
    """Time the three pipeline variants over num_samples synthetic images.

    One image pool of up to batch_size samples is generated up front
    (excluded from timing) and cycled through in batches; per-batch global
    indexes advance so plans differ across batches.
    """
    if num_samples < 1:
        raise ArgumentError(f"num_samples must be >= 1, got {num_samples}")
    if batch_size < 1:
        raise ArgumentError(f"batch_size must be >= 1, got {batch_size}")
    cfg = cfg if cfg is not None else MiamixConfig()
    cfg.validate()

    pool_n = min(batch_size, num_samples)
    images, labels = synthetic_batch(pool_n, dims, channels, cfg.seed)

    def batches():
        done = 0
        index = 0
        while done < num_samples:
            take = min(pool_n, num_samples - done)
            yield index, done, take
            done += take
            index += 1

    def time_identity() -> float:
        start = time.perf_counter()
        for _, _, take in batches():
            out = [(images[i].copy(), labels[i].copy()) for i in range(take)]
            del out
        return time.perf_counter() - start

    def time_config(run_cfg: MiamixConfig) -> float:
        start = time.perf_counter()
        for batch_index, offset, take in batches():
            mix_batch(
                images[:take],
                labels[:take],
                run_cfg,
                index_offset=offset,
                batch_index=batch_index,
            )
        return time.perf_counter() - start

    identity_s = time_identity()
    mixup_s = time_config(mixup_only_config(cfg))
    full_s = time_config(cfg)
    return BenchReport(
        identity=BenchRow("identity", num_samples, identity_s),
        mixup=BenchRow("mixup", num_samples, mixup_s),
        full=BenchRow("miamix", num_samples, full_s),
    )

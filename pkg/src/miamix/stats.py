"""Distributional diagnostics over the sampling and mask stages.

Mirrors the per-sample draw structure of the pipeline (same substream
tags) without touching pixels, and reports:

* per-method realized-ratio error |mask_mean - (1 - lambda)|,
* merged-ratio (label weight) moments and histogram,
* Dirichlet marginal moments per layer count,
* mask-augmentation ratio-preservation error quantiles.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from typing import NamedTuple

import numpy as np

from .core import RngStream, mask_mean
from .errors import ArgumentError
from .maskaug import apply_aug_draws, sample_aug_draws
from .merging import merge, merged_lambda
from .pipeline import TAG_K, TAG_LAMBDAS, TAG_MASK, TAG_MASK_AUG, TAG_METHODS, MiamixConfig
from .generators import generate
from .sampling import sample_lambdas, sample_layer_count, sample_methods


class StatsRow(NamedTuple):
    section: str
    group: str
    metric: str
    value: float


def _quantile(values: list[float], q: float) -> float:
    return float(np.quantile(np.asarray(values), q))


def run_stats(cfg: MiamixConfig, num_draws: int, dims: tuple[int, int] = (32, 32)) -> list[StatsRow]:
    """Sample num_draws mix plans with masks and aggregate the diagnostics."""
    if num_draws < 1:
        raise ArgumentError(f"num_draws must be >= 1, got {num_draws}")
    cfg.validate()

    ratio_err: dict[str, list[float]] = defaultdict(list)
    aug_err: dict[str, list[float]] = defaultdict(list)
    lam_merged_all: list[float] = []
    dirichlet: dict[int, dict[str, list[float]]] = defaultdict(lambda: defaultdict(list))

    for i in range(num_draws):
        stream = RngStream(cfg.seed, i)
        k = sample_layer_count(cfg.k_choices, stream.gen(TAG_K))
        methods = sample_methods(k, cfg.method_weights, stream.gen(TAG_METHODS)).methods
        draw = sample_lambdas(k, cfg.alpha, stream.gen(TAG_LAMBDAS))
        if cfg.force_lambda is not None:
            lambdas = (float(cfg.force_lambda),) * k
        else:
            lambdas = draw.lambdas
        bucket = dirichlet[k]
        bucket["lambda1"].append(draw.lambdas[0])
        bucket["sum"].append(sum(draw.lambdas))
        bucket["residual"].append(draw.residual)

        masks = []
        for j, (method, lam) in enumerate(zip(methods, lambdas)):
            mask = generate(method, lam, dims, stream.gen(TAG_MASK, j))
            mean = mask_mean(mask)
            ratio_err[method.value].append(abs(mean - (1.0 - lam)))
            draws = sample_aug_draws(method, cfg.mask_aug, stream.gen(TAG_MASK_AUG, j))
            augmented = apply_aug_draws(mask, draws)
            if draws is not None and (draws.rotate_shear or draws.smooth):
                aug_err[method.value].append(abs(mask_mean(augmented) - mean))
            masks.append(augmented)
        lam_merged_all.append(merged_lambda(merge(masks, cfg.merge_mode)))

    rows: list[StatsRow] = []
    for method in sorted(ratio_err):
        errs = ratio_err[method]
        rows += [
            StatsRow("realized_lambda_error", method, "count", float(len(errs))),
            StatsRow("realized_lambda_error", method, "mean", float(np.mean(errs))),
            StatsRow("realized_lambda_error", method, "p50", _quantile(errs, 0.50)),
            StatsRow("realized_lambda_error", method, "p90", _quantile(errs, 0.90)),
            StatsRow("realized_lambda_error", method, "max", float(np.max(errs))),
        ]
    lam_arr = np.asarray(lam_merged_all)
    rows += [
        StatsRow("lambda_merged", "all", "count", float(lam_arr.size)),
        StatsRow("lambda_merged", "all", "mean", float(lam_arr.mean())),
        StatsRow("lambda_merged", "all", "std", float(lam_arr.std())),
        StatsRow("lambda_merged", "all", "min", float(lam_arr.min())),
        StatsRow("lambda_merged", "all", "max", float(lam_arr.max())),
    ]
    hist, edges = np.histogram(lam_arr, bins=10, range=(0.0, 1.0))
    for count, lo, hi in zip(hist, edges[:-1], edges[1:]):
        rows.append(StatsRow("lambda_merged_hist", "all", f"{lo:.1f}-{hi:.1f}", float(count)))
    for k in sorted(dirichlet):
        bucket = dirichlet[k]
        lam1 = np.asarray(bucket["lambda1"])
        rows += [
            StatsRow("dirichlet", f"k={k}", "count", float(lam1.size)),
            StatsRow("dirichlet", f"k={k}", "lambda1_mean", float(lam1.mean())),
            StatsRow("dirichlet", f"k={k}", "lambda1_var", float(lam1.var())),
            StatsRow("dirichlet", f"k={k}", "sum_mean", float(np.mean(bucket["sum"]))),
            StatsRow("dirichlet", f"k={k}", "residual_mean", float(np.mean(bucket["residual"]))),
        ]
    for method in sorted(aug_err):
        errs = aug_err[method]
        rows += [
            StatsRow("aug_ratio_error", method, "count", float(len(errs))),
            StatsRow("aug_ratio_error", method, "p50", _quantile(errs, 0.50)),
            StatsRow("aug_ratio_error", method, "p95", _quantile(errs, 0.95)),
            StatsRow("aug_ratio_error", method, "max", float(np.max(errs))),
        ]
    return rows


def write_stats_csv(rows: list[StatsRow], fp) -> None:
    writer = csv.writer(fp)
    writer.writerow(["section", "group", "metric", "value"])
    for row in rows:
        writer.writerow([row.section, row.group, row.metric, repr(row.value)])

"""Rebuild mixed outputs from a mix log and verify them byte-for-byte.

The replayer consumes only ``mixlog.jsonl`` (header config + per-sample
records) and the referenced source images: view augmentation and mask
shape parameters are re-derived from the recorded (seed, stream ids), and
the layer recipe (methods, ratios, augmentation decisions) comes straight
from the record.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import RngStream, make_one_hot
from .dataset_io import decode_image, encode_png_bytes, read_mixlog
from .errors import DataError
from .generators import GeneratorKind
from .pipeline import (
    TAG_VIEW_FIRST,
    TAG_VIEW_PARTNER,
    MiamixConfig,
    MixedSample,
    MixPlan,
    mix_one,
    view_augment,
)


@dataclass
class ReplayReport:
    total: int
    mismatched_images: list[str]
    max_lambda_error: float
    max_label_error: float

    @property
    def ok(self) -> bool:
        return not self.mismatched_images


def _resolve(path_str: str, root: Path) -> Path:
    path = Path(path_str)
    return path if path.is_absolute() else root / path


def replay_record(record, cfg: MiamixConfig, num_classes: int | None, root: Path) -> MixedSample:
    """Recompute one mixed sample from its sidecar record."""
    first = decode_image(_resolve(record.source_paths[0], root))
    partner = decode_image(_resolve(record.source_paths[1], root))
    stream = RngStream(record.seed, record.stream_id)
    first_view = view_augment(first, cfg.view_aug, stream.gen(TAG_VIEW_FIRST))
    partner_view = view_augment(
        partner, cfg.view_aug, RngStream(record.seed, record.index_partner).gen(TAG_VIEW_PARTNER)
    )
    if num_classes is not None and record.label_first is not None:
        y_first = make_one_hot(record.label_first, num_classes)
        y_partner = make_one_hot(record.label_partner, num_classes)
    else:
        # Labels unknown: reuse the recorded blend so only pixels are checked.
        y_first = y_partner = np.asarray(record.merged_label, dtype=np.float64)
    plan = MixPlan(
        index_first=record.index_first,
        index_partner=record.index_partner,
        is_self_mix=record.is_self_mix,
        k=len(record.methods),
        methods=tuple(GeneratorKind(m) for m in record.methods),
        lambdas=record.sampled_lambdas,
        mask_aug_draws=record.aug_draws(),
        stream_id=record.stream_id,
    )
    return mix_one(
        first_view, y_first, partner_view, y_partner, cfg, stream, plan=plan, keep_mask=True
    )


def replay_mixlog(log_path, out_dir=None) -> ReplayReport:
    """Replay every record of a mix log and compare against the written PNGs.

    If ``out_dir`` is given, the rebuilt PNGs are also written there.
    """
    log_path = Path(log_path)
    root = log_path.parent
    header, records = read_mixlog(log_path)
    if header.get("config") is None:
        raise DataError(f"{log_path}: log header carries no config; cannot replay")
    cfg = MiamixConfig.from_dict(header["config"])
    num_classes = header.get("num_classes")

    out_path = Path(out_dir) if out_dir is not None else None
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)

    mismatched: list[str] = []
    max_lambda_error = 0.0
    max_label_error = 0.0
    for record in records:
        sample = replay_record(record, cfg, num_classes, root)
        rebuilt = encode_png_bytes(sample.image)
        original = (root / record.output_path).read_bytes()
        if rebuilt != original:
            mismatched.append(record.output_path)
        if out_path is not None:
            (out_path / record.output_path).write_bytes(rebuilt)
        max_lambda_error = max(
            max_lambda_error, abs(sample.lambda_merged - record.lambda_merged)
        )
        if num_classes is not None and record.label_first is not None:
            diff = max(
                abs(float(a) - float(b))
                for a, b in zip(sample.label, record.merged_label)
            )
            max_label_error = max(max_label_error, diff)
    return ReplayReport(
        total=len(records),
        mismatched_images=mismatched,
        max_lambda_error=max_lambda_error,
        max_label_error=max_label_error,
    )

"""Manifest ingest, image codecs, and persistence of mixed outputs.

Manifest: UTF-8 JSON lines. An optional first line ``{"num_classes": L}``
declares the label space; every other line is ``{"path": "...", "label": N}``.
Relative paths resolve against the manifest's directory. Without a header,
num_classes is max label + 1.

Mix log: ``mixlog.jsonl`` written next to the output PNGs. Line 1 is a
header ``{"format": "miamix-mixlog/1", "seed": ..., "num_classes": ...,
"config": {...}}``; each following line serializes one SidecarRecord —
the complete recipe needed to rebuild that output byte-for-byte from the
source images alone.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import ArgumentError, DataError
from .maskaug import MaskAugDraws
from .pipeline import MiamixConfig, MixedSample

MIXLOG_NAME = "mixlog.jsonl"
MIXLOG_FORMAT = "miamix-mixlog/1"


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    class_index: int


def load_manifest(path) -> tuple[list[ManifestEntry], int]:
    """Parse a manifest file into entries plus the number of classes."""
    path = Path(path)
    base = path.parent
    entries: list[ManifestEntry] = []
    declared_classes: int | None = None
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise DataError(f"{path}:{lineno}: expected a JSON object")
            if "num_classes" in record and "path" not in record:
                if entries or declared_classes is not None:
                    raise DataError(f"{path}:{lineno}: num_classes header must be the first record")
                declared_classes = int(record["num_classes"])
                if declared_classes < 1:
                    raise DataError(f"{path}:{lineno}: num_classes must be >= 1")
                continue
            if "path" not in record or "label" not in record:
                raise DataError(f"{path}:{lineno}: record needs 'path' and 'label' fields")
            label = record["label"]
            if not isinstance(label, int) or label < 0:
                raise DataError(f"{path}:{lineno}: label must be a non-negative integer")
            entry_path = Path(record["path"])
            if not entry_path.is_absolute():
                entry_path = base / entry_path
            if not entry_path.exists():
                raise DataError(f"{path}:{lineno}: image file not found: {entry_path}")
            entries.append(ManifestEntry(path=str(entry_path), class_index=label))
    if not entries:
        raise DataError(f"{path}: manifest contains no entries")
    num_classes = declared_classes if declared_classes is not None else (
        max(e.class_index for e in entries) + 1
    )
    for lineno_like, entry in enumerate(entries):
        if entry.class_index >= num_classes:
            raise DataError(
                f"{path}: entry {lineno_like + 1} ({entry.path}) has label "
                f"{entry.class_index} >= num_classes {num_classes}"
            )
    return entries, num_classes


def decode_image(path) -> np.ndarray:
    """Decode an 8-bit PNG/PPM/PGM file to a float64 (H, W, C) array in [0, 1]."""
    try:
        with PILImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode not in ("L", "RGB"):
                raise DataError(f"{path}: unsupported image mode {mode!r} (need 8-bit gray or RGB)")
            arr = np.asarray(im, dtype=np.float64) / 255.0
    except DataError:
        raise
    except FileNotFoundError:
        raise
    except (OSError, SyntaxError, ValueError, UnidentifiedImageError) as exc:
        raise DataError(f"{path}: cannot decode image: {exc}") from exc
    if arr.ndim == 2:
        arr = arr[:, :, None]
    return arr


def quantize_u8(image: np.ndarray) -> np.ndarray:
    """Clamp to [0, 1] and round to 8 bits, halves to even."""
    return np.rint(np.clip(image, 0.0, 1.0) * 255.0).astype(np.uint8)


def encode_png_bytes(image: np.ndarray) -> bytes:
    """Deterministic PNG encoding of a float image (see quantize_u8)."""
    arr = quantize_u8(np.asarray(image))
    if arr.ndim != 3 or arr.shape[2] not in (1, 3):
        raise ArgumentError(f"expected an (H, W, C) image with C in {{1, 3}}, got {arr.shape}")
    if arr.shape[2] == 1:
        pil = PILImage.fromarray(arr[:, :, 0], mode="L")
    else:
        pil = PILImage.fromarray(arr, mode="RGB")
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()


def encode_png(image: np.ndarray, path) -> None:
    data = encode_png_bytes(image)
    with open(path, "wb") as fp:
        fp.write(data)


@dataclass(frozen=True)
class SidecarRecord:
    """One mix-log line: outputs plus the full plan needed to replay them."""

    output_path: str
    source_paths: tuple[str, str]
    is_self_mix: bool
    methods: tuple[str, ...]
    sampled_lambdas: tuple[float, ...]
    lambda_merged: float
    merged_label: tuple[float, ...]
    seed: int
    stream_id: int
    index_first: int
    index_partner: int
    mask_aug_draws: tuple[dict | None, ...]
    label_first: int | None = None
    label_partner: int | None = None

    def to_json_obj(self) -> dict:
        return {
            "output_path": self.output_path,
            "source_paths": list(self.source_paths),
            "is_self_mix": self.is_self_mix,
            "methods": list(self.methods),
            "sampled_lambdas": list(self.sampled_lambdas),
            "lambda_merged": self.lambda_merged,
            "merged_label": list(self.merged_label),
            "seed": self.seed,
            "stream_id": self.stream_id,
            "index_first": self.index_first,
            "index_partner": self.index_partner,
            "mask_aug_draws": list(self.mask_aug_draws),
            "label_first": self.label_first,
            "label_partner": self.label_partner,
        }

    @classmethod
    def from_json_obj(cls, data: dict) -> "SidecarRecord":
        return cls(
            output_path=str(data["output_path"]),
            source_paths=tuple(data["source_paths"]),
            is_self_mix=bool(data["is_self_mix"]),
            methods=tuple(data["methods"]),
            sampled_lambdas=tuple(float(v) for v in data["sampled_lambdas"]),
            lambda_merged=float(data["lambda_merged"]),
            merged_label=tuple(float(v) for v in data["merged_label"]),
            seed=int(data["seed"]),
            stream_id=int(data["stream_id"]),
            index_first=int(data["index_first"]),
            index_partner=int(data["index_partner"]),
            mask_aug_draws=tuple(data["mask_aug_draws"]),
            label_first=None if data.get("label_first") is None else int(data["label_first"]),
            label_partner=None if data.get("label_partner") is None else int(data["label_partner"]),
        )

    def aug_draws(self) -> tuple[MaskAugDraws | None, ...]:
        return tuple(None if d is None else MaskAugDraws.from_dict(d) for d in self.mask_aug_draws)


def output_name(stream_id: int) -> str:
    return f"mix_{stream_id:06d}.png"


def encode_outputs(
    samples: list[MixedSample],
    out_dir,
    sources: list[str] | None = None,
    source_labels: list[int] | None = None,
    config: MiamixConfig | None = None,
    num_classes: int | None = None,
    append: bool = False,
) -> list[SidecarRecord]:
    """Write one PNG per sample plus mix-log lines; returns the records.

    ``sources``/``source_labels`` map global sample indexes to manifest
    paths and class indexes; without them placeholder paths are recorded.
    The first (non-append) call truncates the log and writes the header.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / MIXLOG_NAME

    def source_of(index: int) -> str:
        return sources[index] if sources is not None else f"<memory:{index}>"

    def label_of(index: int) -> int | None:
        return source_labels[index] if source_labels is not None else None

    records = []
    mode = "a" if append else "w"
    with open(log_path, mode, encoding="utf-8") as log:
        if not append:
            header = {
                "format": MIXLOG_FORMAT,
                "seed": config.seed if config is not None else None,
                "num_classes": num_classes,
                "config": config.to_dict() if config is not None else None,
            }
            log.write(json.dumps(header) + "\n")
        for sample in samples:
            plan = sample.plan
            name = output_name(plan.stream_id)
            encode_png(sample.image, out_dir / name)
            record = SidecarRecord(
                output_path=name,
                source_paths=(source_of(plan.index_first), source_of(plan.index_partner)),
                is_self_mix=plan.is_self_mix,
                methods=tuple(m.value for m in plan.methods),
                sampled_lambdas=tuple(plan.lambdas),
                lambda_merged=sample.lambda_merged,
                merged_label=tuple(float(v) for v in sample.label),
                seed=config.seed if config is not None else 0,
                stream_id=plan.stream_id,
                index_first=plan.index_first,
                index_partner=plan.index_partner,
                mask_aug_draws=tuple(
                    None if d is None else d.to_dict() for d in plan.mask_aug_draws
                ),
                label_first=label_of(plan.index_first),
                label_partner=label_of(plan.index_partner),
            )
            log.write(json.dumps(record.to_json_obj()) + "\n")
            records.append(record)
    return records


def read_mixlog(log_path) -> tuple[dict, list[SidecarRecord]]:
    """Read a mix log back into its header and records."""
    log_path = Path(log_path)
    with open(log_path, "r", encoding="utf-8") as fp:
        lines = [line for line in (raw.strip() for raw in fp) if line]
    if not lines:
        raise DataError(f"{log_path}: empty mix log")
    header = json.loads(lines[0])
    if header.get("format") != MIXLOG_FORMAT:
        raise DataError(f"{log_path}: not a {MIXLOG_FORMAT} log")
    records = [SidecarRecord.from_json_obj(json.loads(line)) for line in lines[1:]]
    return header, records

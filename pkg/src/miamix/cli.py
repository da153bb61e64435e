"""Command-line frontend: mix, preview, stats, and bench.

Config precedence: built-in defaults < --config file < explicit flags.
The config file is flat ``key = value`` text using the flag names
(``--print-config`` emits exactly this format). Exit codes: 0 success,
2 argument/config error, 3 I/O error, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from dataclasses import replace
from pathlib import Path

import numpy as np

from .bench import run_bench
from .core import make_one_hot
from .dataset_io import decode_image, encode_outputs, encode_png, load_manifest
from .errors import ArgumentError, ConfigError, DataError, InvariantError
from .maskaug import MaskAugPolicy
from .merging import MergeMode
from .pipeline import MiamixConfig, mix_batch
from .preview import contact_sheet
from .stats import run_stats, write_stats_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INVARIANT = 4

CONFIG_KEYS = ("alpha", "k", "weights", "p-self", "p-aug", "p-smooth", "merge", "seed")


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"{flag} expects a comma-separated integer list, got {text!r}") from None


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"{flag} expects a comma-separated number list, got {text!r}") from None


def _parse_dims(text: str, flag: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ConfigError(f"{flag} expects HxW, got {text!r}")
    return int(parts[0]), int(parts[1])


def format_config(cfg: MiamixConfig) -> str:
    merge = "product" if cfg.merge_mode is MergeMode.PRODUCT else "sum"
    values = {
        "alpha": repr(cfg.alpha),
        "k": ",".join(str(k) for k in cfg.k_choices),
        "weights": ",".join(repr(w) for w in cfg.method_weights),
        "p-self": repr(cfg.p_self),
        "p-aug": repr(cfg.mask_aug.p_aug),
        "p-smooth": repr(cfg.mask_aug.p_smooth),
        "merge": merge,
        "seed": str(cfg.seed),
    }
    return "\n".join(f"{key} = {values[key]}" for key in CONFIG_KEYS)


def parse_config_file(path) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError:
        raise
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def build_config(args: argparse.Namespace) -> MiamixConfig:
    """Merge defaults, config file, and explicit flags into a validated config."""
    cfg = MiamixConfig()
    file_values = parse_config_file(args.config) if args.config else {}

    def pick(flag_value, file_key: str, parse):
        if flag_value is not None:
            return flag_value
        if file_key in file_values:
            return parse(file_values[file_key])
        return None

    alpha = pick(args.alpha, "alpha", float)
    k = pick(args.k and _parse_int_list(args.k, "--k"), "k", lambda v: _parse_int_list(v, "k"))
    weights = pick(
        args.weights and _parse_float_list(args.weights, "--weights"),
        "weights",
        lambda v: _parse_float_list(v, "weights"),
    )
    p_self = pick(args.p_self, "p-self", float)
    p_aug = pick(args.p_aug, "p-aug", float)
    p_smooth = pick(args.p_smooth, "p-smooth", float)
    merge = pick(args.merge, "merge", str)
    seed = pick(args.seed, "seed", int)

    if alpha is not None:
        cfg = replace(cfg, alpha=alpha)
    if k is not None:
        cfg = replace(cfg, k_choices=k)
    if weights is not None:
        cfg = replace(cfg, method_weights=weights)
    if p_self is not None:
        cfg = replace(cfg, p_self=p_self)
    if p_aug is not None or p_smooth is not None:
        aug = cfg.mask_aug
        aug = MaskAugPolicy(
            p_smooth=aug.p_smooth if p_smooth is None else p_smooth,
            p_aug=aug.p_aug if p_aug is None else p_aug,
            smooth_windows=aug.smooth_windows,
            max_rotate=aug.max_rotate,
            max_shear=aug.max_shear,
            eligible=aug.eligible,
        )
        cfg = replace(cfg, mask_aug=aug)
    if merge is not None:
        if merge not in ("product", "sum"):
            raise ConfigError(f"--merge must be 'product' or 'sum', got {merge!r}")
        cfg = replace(cfg, merge_mode=MergeMode.PRODUCT if merge == "product" else MergeMode.CLIPPED_SUM)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    if getattr(args, "force_lambda", None) is not None:
        cfg = replace(cfg, force_lambda=args.force_lambda)
    cfg.validate()
    return cfg


def add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("engine config")
    group.add_argument("--alpha", type=float, default=None, help="ratio-sampling concentration")
    group.add_argument("--k", type=str, default=None, help="layer-count choices, e.g. 1,2")
    group.add_argument(
        "--weights",
        type=str,
        default=None,
        help="method weights over mixup,cutmix,fmix,gridmix,agmix",
    )
    group.add_argument("--p-self", dest="p_self", type=float, default=None, help="self-mix probability")
    group.add_argument("--p-aug", dest="p_aug", type=float, default=None, help="mask rotate+shear probability")
    group.add_argument("--p-smooth", dest="p_smooth", type=float, default=None, help="mask smoothing probability")
    group.add_argument("--merge", choices=("product", "sum"), default=None, help="mask merge mode")
    group.add_argument("--seed", type=int, default=None, help="global RNG seed")
    group.add_argument("--config", type=str, default=None, help="config file (key = value lines)")
    group.add_argument(
        "--print-config",
        dest="print_config",
        action="store_true",
        help="print the effective config and exit",
    )


def cmd_mix(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    if args.print_config:
        print(format_config(cfg))
        return EXIT_OK
    entries, num_classes = load_manifest(args.manifest)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    sources = [e.path for e in entries]
    class_indexes = [e.class_index for e in entries]

    batch_size = args.batch_size if args.batch_size > 0 else len(entries)
    lam_total = 0.0
    count = 0
    method_counts: Counter = Counter()
    self_mix = 0
    for batch_index, start in enumerate(range(0, len(entries), batch_size)):
        chunk = entries[start : start + batch_size]
        images = [decode_image(e.path) for e in chunk]
        labels = [make_one_hot(e.class_index, num_classes) for e in chunk]
        samples = mix_batch(
            images,
            labels,
            cfg,
            workers=args.workers,
            index_offset=start,
            batch_index=batch_index,
        )
        encode_outputs(
            samples,
            out_dir,
            sources=sources,
            source_labels=class_indexes,
            config=cfg,
            num_classes=num_classes,
            append=batch_index > 0,
        )
        for sample in samples:
            lam_total += sample.lambda_merged
            count += 1
            self_mix += int(sample.plan.is_self_mix)
            for method in sample.plan.methods:
                method_counts[method.value] += 1
    histogram = " ".join(f"{name}={method_counts[name]}" for name in sorted(method_counts))
    print(f"mixed {count} samples -> {out_dir}")
    print(f"mean lambda_merged = {lam_total / count:.4f}")
    print(f"self-mixed = {self_mix}")
    print(f"method layers: {histogram}")
    return EXIT_OK


def cmd_preview(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    if args.print_config:
        print(format_config(cfg))
        return EXIT_OK
    rows, cols = _parse_dims(args.grid, "--grid")
    entries = None
    if args.manifest:
        entries, _ = load_manifest(args.manifest)
    dims = _parse_dims(args.dims, "--dims")
    sheet = contact_sheet(cfg, rows, cols, dims=dims, entries=entries)
    encode_png(sheet, args.out)
    print(f"wrote contact sheet {args.out} ({rows}x{cols} tiles)")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    if args.print_config:
        print(format_config(cfg))
        return EXIT_OK
    dims = _parse_dims(args.dims, "--dims")
    rows = run_stats(cfg, args.draws, dims=dims)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fp:
            write_stats_csv(rows, fp)
        print(f"wrote {len(rows)} stats rows to {args.out}")
    else:
        write_stats_csv(rows, sys.stdout)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    if args.print_config:
        print(format_config(cfg))
        return EXIT_OK
    dims = _parse_dims(args.dims, "--dims")
    report = run_bench(args.num, dims=dims, batch_size=args.batch_size, cfg=cfg)
    print(report.format())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miamix", description="Multi-stage mixed-sample data augmentation engine"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mix = sub.add_parser("mix", help="mix a manifest of images into an output directory")
    p_mix.add_argument("--manifest", required=True, help="JSON-lines manifest path")
    p_mix.add_argument("--out", required=True, help="output directory")
    p_mix.add_argument("--batch-size", dest="batch_size", type=int, default=256)
    p_mix.add_argument("--workers", type=int, default=1)
    add_config_flags(p_mix)
    p_mix.set_defaults(func=cmd_mix)

    p_prev = sub.add_parser("preview", help="render a contact sheet of samples and masks")
    p_prev.add_argument("--out", required=True, help="output PNG path")
    p_prev.add_argument("--grid", default="2x5", help="tile grid ROWSxCOLS (rows even)")
    p_prev.add_argument("--dims", default="64x64", help="synthetic image dims HxW")
    p_prev.add_argument("--manifest", default=None, help="optional manifest for real images")
    p_prev.add_argument(
        "--force-lambda",
        dest="force_lambda",
        type=float,
        default=None,
        help="force every sampled ratio to this value",
    )
    add_config_flags(p_prev)
    p_prev.set_defaults(func=cmd_preview)

    p_stats = sub.add_parser("stats", help="emit CSV distribution diagnostics")
    p_stats.add_argument("--draws", type=int, default=10000)
    p_stats.add_argument("--dims", default="32x32", help="mask dims HxW")
    p_stats.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_stats.add_argument(
        "--force-lambda", dest="force_lambda", type=float, default=None,
        help="force every sampled ratio to this value",
    )
    add_config_flags(p_stats)
    p_stats.set_defaults(func=cmd_stats)

    p_bench = sub.add_parser("bench", help="measure pipeline throughput")
    p_bench.add_argument("--num", type=int, default=10000, help="samples per variant")
    p_bench.add_argument("--dims", default="64x64", help="image dims HxW")
    p_bench.add_argument("--batch-size", dest="batch_size", type=int, default=256)
    add_config_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())

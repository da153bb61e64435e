#!/usr/bin/env python3
"""Write a small synthetic PNG dataset plus manifest, for trying the CLI."""

import argparse
import json
import sys
from pathlib import Path

from miamix.dataset_io import encode_png
from miamix.preview import synthetic_batch


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", help="directory to create the dataset in")
    parser.add_argument("--count", type=int, default=32)
    parser.add_argument("--size", type=int, default=32, help="square image side in pixels")
    parser.add_argument("--classes", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    images, _ = synthetic_batch(args.count, (args.size, args.size), 3, args.seed)
    manifest = out / "manifest.jsonl"
    with open(manifest, "w", encoding="utf-8") as fp:
        fp.write(json.dumps({"num_classes": args.classes}) + "\n")
        for i, image in enumerate(images):
            name = f"img_{i:04d}.png"
            encode_png(image, out / name)
            fp.write(json.dumps({"path": name, "label": i % args.classes}) + "\n")
    print(f"wrote {args.count} images and {manifest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

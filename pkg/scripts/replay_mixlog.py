#!/usr/bin/env python3
"""Audit a mix run: rebuild every output from its mixlog.jsonl record and
compare the PNG bytes against what the run wrote."""

import argparse
import sys

from miamix.replay import replay_mixlog


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("mixlog", help="path to mixlog.jsonl")
    parser.add_argument("--out", default=None, help="also write the rebuilt PNGs here")
    args = parser.parse_args()

    report = replay_mixlog(args.mixlog, out_dir=args.out)
    print(f"replayed {report.total} records")
    print(f"max |lambda_merged - recorded| = {report.max_lambda_error:.3e}")
    print(f"max |label - recorded|         = {report.max_label_error:.3e}")
    if report.mismatched_images:
        print(f"BYTE MISMATCH in {len(report.mismatched_images)} outputs:")
        for name in report.mismatched_images[:20]:
            print(f"  {name}")
        return 1
    print("all outputs reproduced byte-for-byte")
    return 0


if __name__ == "__main__":
    sys.exit(main())

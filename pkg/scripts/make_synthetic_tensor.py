#!/usr/bin/env python3
"""Generate a synthetic re-rating tensor CSV.

Draws one latent Gaussian per user-item pair (mean uniform on the inner
scale, variance exponential) and rounds per-trial draws onto the integer
scale. Useful for exercising the ingest/estimate/simulate pipeline without a
real study export.
"""

import argparse
import sys

import numpy as np


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--users", type=int, default=67)
    ap.add_argument("--items", type=int, default=5)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--scale-min", type=int, default=1)
    ap.add_argument("--scale-max", type=int, default=5)
    ap.add_argument("--rate", type=float, default=2.11, help="exponential rate of latent variances")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="output path (default stdout)")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    lo, hi = args.scale_min, args.scale_max
    lines = ["user,item,trial,rating"]
    for u in range(args.users):
        for i in range(args.items):
            mu = rng.uniform(lo + 0.5, hi - 0.5)
            sigma = np.sqrt(rng.exponential(1.0 / args.rate))
            for t in range(1, args.trials + 1):
                rating = int(np.clip(round(rng.normal(mu, sigma)), lo, hi))
                lines.append(f"u{u},i{i},{t},{rating}")
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(lines) - 1} records to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

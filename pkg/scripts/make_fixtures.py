#!/usr/bin/env python3
"""Generate a synthetic dermoscopy dataset (images, masks, manifest).

The full-size default mirrors the PH2 protocol: 200 images at 768x560 with
an 80/80/40 normal/atypical/melanoma mix.  Use --scale to produce a smaller,
faster variant for local experiments.

    python3 scripts/make_fixtures.py --out ./fixtures
    skinsafe dataset verify --manifest ./fixtures/manifest.csv
"""

import argparse

from skinsafe.synthetic import PH2_SIZE, SyntheticConfig, generate_dataset


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--counts", type=int, nargs=3, default=(80, 80, 40),
                        metavar=("NORMAL", "ATYPICAL", "MELANOMA"))
    parser.add_argument("--scale", type=float, default=1.0,
                        help="resolution/lesion scale factor (1.0 = PH2 size)")
    parser.add_argument("--seed", type=int, default=20240701)
    parser.add_argument("--hair-probability", type=float, default=0.4)
    return parser.parse_args()


def main():
    args = parse_args()
    config = SyntheticConfig(
        width=round(PH2_SIZE[0] * args.scale),
        height=round(PH2_SIZE[1] * args.scale),
        counts=tuple(args.counts),
        hair_probability=args.hair_probability,
        lesion_scale=args.scale,
        seed=args.seed,
    )
    manifest = generate_dataset(args.out, config)
    print(f"wrote {sum(args.counts)} images; manifest: {manifest}")


if __name__ == "__main__":
    main()

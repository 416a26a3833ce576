#!/usr/bin/env python3
"""One-shot converter from a PH2 distribution to a manifest CSV.

PH2 ships as a directory of per-image folders plus an index table
(PH2_dataset.txt, a `||`-delimited export of the spreadsheet).  This script
walks the distribution and emits the manifest format the rest of the tooling
consumes: image_id,image_path,mask_path,label.

Expected layout (names as distributed):

    <root>/PH2 Dataset images/IMD003/IMD003_Dermoscopic_Image/IMD003.bmp
    <root>/PH2 Dataset images/IMD003/IMD003_lesion/IMD003_lesion.bmp
    <root>/PH2_dataset.txt

Clinical diagnosis mapping: Common Nevus -> normal, Atypical Nevus ->
atypical, Melanoma -> melanoma.  Numeric codes 0/1/2 in the table mean the
same three classes.  Run once; commit only the manifest, never the images.
"""

import argparse
import csv
import os
import re
import sys

LABELS_BY_CODE = {"0": "normal", "1": "atypical", "2": "melanoma"}
LABELS_BY_NAME = {
    "common nevus": "normal",
    "atypical nevus": "atypical",
    "melanoma": "melanoma",
}


def parse_index(path):
    """Yield (image_name, label) from the ||-delimited PH2 index table."""
    header = None
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            if "||" not in line:
                continue
            cells = [c.strip() for c in line.strip().strip("|").split("||")]
            if header is None:
                header = [c.lower() for c in cells]
                continue
            row = dict(zip(header, cells))
            name = row.get("name") or cells[0]
            if not re.match(r"^IMD\d+$", name):
                continue
            raw = (row.get("clinical diagnosis") or "").strip().lower()
            label = LABELS_BY_CODE.get(raw) or LABELS_BY_NAME.get(raw)
            if label is None:
                print(f"warning: {name}: unrecognized diagnosis {raw!r}, skipped",
                      file=sys.stderr)
                continue
            yield name, label


def locate(root, name):
    image = os.path.join(root, "PH2 Dataset images", name,
                         f"{name}_Dermoscopic_Image", f"{name}.bmp")
    mask = os.path.join(root, "PH2 Dataset images", name,
                        f"{name}_lesion", f"{name}_lesion.bmp")
    return image, mask if os.path.exists(mask) else ""


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ph2-root", required=True,
                        help="directory containing 'PH2 Dataset images'")
    parser.add_argument("--index", default=None,
                        help="index table (default: <root>/PH2_dataset.txt)")
    parser.add_argument("--out", required=True, help="manifest CSV to write")
    args = parser.parse_args()

    index = args.index or os.path.join(args.ph2_root, "PH2_dataset.txt")
    rows = []
    missing = 0
    for name, label in parse_index(index):
        image, mask = locate(args.ph2_root, name)
        if not os.path.exists(image):
            print(f"warning: {name}: image not found at {image}", file=sys.stderr)
            missing += 1
            continue
        rows.append([name, image, mask, label])
    if not rows:
        sys.exit("no usable rows found; check --ph2-root and --index")
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image_id", "image_path", "mask_path", "label"])
        writer.writerows(rows)
    counts = {}
    for row in rows:
        counts[row[3]] = counts.get(row[3], 0) + 1
    print(f"wrote {len(rows)} rows to {args.out} "
          f"({counts}); {missing} images missing")


if __name__ == "__main__":
    main()

"""Dermoscopy dataset manifests: loading, verification, stratified splits.

A manifest is a UTF-8 CSV with header `image_id,image_path,mask_path,label`.
Relative paths resolve against the manifest's directory; the mask column may
be empty.  The PH2 distribution itself is not redistributable, so its
spreadsheet index is converted to this format once by scripts/ph2_to_manifest.py.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .classify import LesionClass

MANIFEST_HEADER = ["image_id", "image_path", "mask_path", "label"]
PH2_RESOLUTION = (768, 560)  # (width, height)
PH2_CLASS_COUNTS = {"normal": 80, "atypical": 80, "melanoma": 40}


class BadHeader(Exception):
    pass


class BadLabel(Exception):
    def __init__(self, row: int, label: str):
        self.row = row
        super().__init__(f"row {row}: unknown label {label!r}")


class DuplicateId(Exception):
    def __init__(self, row: int, image_id: str):
        self.row = row
        super().__init__(f"row {row}: duplicate image_id {image_id!r}")


class BadFractions(Exception):
    pass


@dataclass(frozen=True)
class Ph2Record:
    image_id: str
    image_path: str
    mask_path: Optional[str]
    label: LesionClass


@dataclass
class DatasetReport:
    counts: dict[str, int]
    resolution_flags: list[str] = field(default_factory=list)
    missing_files: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def ok(self) -> bool:
        return not self.missing_files

    def to_json(self) -> str:
        return json.dumps({
            "counts": self.counts,
            "total": self.total,
            "resolution_flags": self.resolution_flags,
            "missing_files": self.missing_files,
            "warnings": self.warnings,
        }, indent=2)

    def to_text(self) -> str:
        lines = [f"records: {self.total}"]
        lines += [f"  {cls}: {count}" for cls, count in self.counts.items()]
        lines.append(f"resolution flags: {len(self.resolution_flags)}")
        lines += [f"  {flag}" for flag in self.resolution_flags[:10]]
        lines.append(f"missing files: {len(self.missing_files)}")
        lines += [f"  {path}" for path in self.missing_files[:10]]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


def load_manifest(path: str) -> list[Ph2Record]:
    """Parse a manifest CSV into records, in file order."""
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base, p)

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise BadHeader(f"{path}: empty manifest file") from None
        if [h.strip() for h in header] != MANIFEST_HEADER:
            raise BadHeader(f"{path}: expected header {','.join(MANIFEST_HEADER)}")
        records: list[Ph2Record] = []
        seen: set[str] = set()
        for row_num, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != len(MANIFEST_HEADER):
                raise BadHeader(f"{path}: row {row_num} has {len(row)} columns")
            image_id, image_path, mask_path, label_text = (cell.strip() for cell in row)
            if image_id in seen:
                raise DuplicateId(row_num, image_id)
            seen.add(image_id)
            try:
                label = LesionClass.parse(label_text)
            except ValueError:
                raise BadLabel(row_num, label_text) from None
            records.append(Ph2Record(
                image_id=image_id,
                image_path=resolve(image_path),
                mask_path=resolve(mask_path) if mask_path else None,
                label=label,
            ))
    return records


def verify_dataset(records: Sequence[Ph2Record],
                   expected_resolution: tuple[int, int] = PH2_RESOLUTION) -> DatasetReport:
    """Class counts, off-resolution images, and missing files."""
    counts = {cls.value: 0 for cls in LesionClass}
    report = DatasetReport(counts=counts)
    for record in records:
        counts[record.label.value] += 1
        for path in filter(None, [record.image_path, record.mask_path]):
            if not os.path.exists(path):
                report.missing_files.append(path)
        if os.path.exists(record.image_path):
            try:
                with Image.open(record.image_path) as img:
                    if img.size != expected_resolution:
                        report.resolution_flags.append(
                            f"{record.image_id}: {img.size[0]}x{img.size[1]}")
            except (UnidentifiedImageError, OSError):
                report.missing_files.append(record.image_path)
    if not records:
        report.warnings.append("manifest is empty")
    return report


def stratified_split(records: Sequence[Ph2Record], fractions: Sequence[float],
                     seed: int) -> list[list[Ph2Record]]:
    """Per-class proportional partition from a seeded shuffle.

    Split sizes use largest-remainder rounding per class; record order inside
    each split follows the manifest.
    """
    if not fractions or any(f < 0 for f in fractions):
        raise BadFractions(f"fractions must be non-negative: {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise BadFractions(f"fractions must sum to 1, got {sum(fractions)}")
    rng = np.random.default_rng(seed)
    splits: list[list[tuple[int, Ph2Record]]] = [[] for _ in fractions]
    for cls in LesionClass:
        indexed = [(i, r) for i, r in enumerate(records) if r.label is cls]
        order = rng.permutation(len(indexed))
        shuffled = [indexed[i] for i in order]
        n = len(shuffled)
        ideal = [f * n for f in fractions]
        base = [int(x) for x in ideal]
        remainders = sorted(range(len(fractions)),
                            key=lambda j: (ideal[j] - base[j], -j), reverse=True)
        for j in remainders[:n - sum(base)]:
            base[j] += 1
        cursor = 0
        for j, size in enumerate(base):
            splits[j].extend(shuffled[cursor:cursor + size])
            cursor += size
    return [[r for _, r in sorted(split)] for split in splits]

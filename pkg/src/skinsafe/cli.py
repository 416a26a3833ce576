"""Command-line entry points.

Subcommands: ttsb, dataset verify, train, eval, analyze, serve.
Exit codes: 0 success, 2 usage or input error, 3 domain error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

import click
import numpy as np

from . import classify as clf
from . import dataset as ds
from . import imaging
from .features import DegenerateLesion, FeatureVector, InsufficientData, extract_all, extract_with_segmentation
from .ttsb import (
    EnvironmentFlags,
    SpfLevel,
    TtsbInput,
    UnknownSpfLevel,
    BurnRisk,
    compute_ttsb,
    skin_type_for_rank,
)

DOMAIN_ERROR = 3
REFERENCE_DIAGONAL = {"normal": 96.3, "atypical": 95.7, "melanoma": 97.5}

PIPELINE_ERRORS = (imaging.ImageTooSmall, imaging.NoLesionFound,
                   imaging.LesionTouchesBorder, DegenerateLesion)


class DomainError(click.ClickException):
    exit_code = DOMAIN_ERROR


@click.group()
def main():
    """Sun-exposure burn-time engine and dermoscopy lesion analysis."""


# ---------------------------------------------------------------------------
# ttsb

@main.command()
@click.option("--uv", type=float, required=True, help="UV index (0-14).")
@click.option("--skin", type=click.IntRange(1, 6), required=True, help="Skin type rank.")
@click.option("--spf", default="0", show_default=True, help="SPF level (0..50, 50+).")
@click.option("--env", "envs", multiple=True,
              help="Environment flag (repeatable): snow, cloud, sand, wet_sand, "
                   "grass, wet_grass, building, water, shade.")
@click.option("--altitude-ft", type=float, default=0.0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["plain", "json"]), default="plain")
def ttsb(uv, skin, spf, envs, altitude_ft, fmt):
    """Minutes of sun exposure before burn onset."""
    try:
        active = {}
        for name in envs:
            active.update({k: True for k in EnvironmentFlags.one_of(name).active()})
        inp = TtsbInput(uv_index=uv, skin=skin_type_for_rank(skin),
                        spf=SpfLevel.of(spf), env=EnvironmentFlags(**active),
                        altitude_ft=altitude_ft)
    except (UnknownSpfLevel, ValueError) as exc:
        raise click.UsageError(str(exc))
    outcome = compute_ttsb(inp)
    if fmt == "json":
        click.echo(json.dumps({
            "kind": outcome.kind.value,
            "minutes": outcome.minutes,
            "denominator": outcome.denominator,
        }))
    elif outcome.kind is BurnRisk.NO_BURN_RISK:
        click.echo("NO-BURN-RISK")
    else:
        click.echo(f"{outcome.minutes:.1f}")


# ---------------------------------------------------------------------------
# dataset

@main.group()
def dataset():
    """Dataset manifest operations."""


@dataset.command("verify")
@click.option("--manifest", type=click.Path(), required=True)
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
def dataset_verify(manifest, fmt):
    """Class counts, resolution check, and missing files for a manifest."""
    records = _load_manifest(manifest)
    report = ds.verify_dataset(records)
    click.echo(report.to_json() if fmt == "json" else report.to_text())
    if not report.ok():
        raise DomainError(f"{len(report.missing_files)} referenced files are missing")


def _load_manifest(path):
    try:
        return ds.load_manifest(path)
    except FileNotFoundError:
        raise click.UsageError(f"manifest not found: {path}")
    except (ds.BadHeader, ds.BadLabel, ds.DuplicateId) as exc:
        raise click.UsageError(str(exc))


def _extract_one(args):
    image_id, image_path = args
    try:
        vector = extract_all(imaging.load_rgb(image_path))
        return image_id, vector.values.tolist(), None
    except PIPELINE_ERRORS + (imaging.ImageDecodeError,) as exc:
        return image_id, None, f"{type(exc).__name__}: {exc}"


def _dataset_features(records, jobs, skip_failures):
    """Feature vectors per record, extraction order-independent."""
    tasks = [(r.image_id, r.image_path) for r in records]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_extract_one, tasks, chunksize=4))
    else:
        results = [_extract_one(t) for t in tasks]
    features, labels, failures = [], [], []
    for record, (image_id, values, err) in zip(records, results):
        if err is not None:
            failures.append(f"{image_id}: {err}")
            continue
        features.append(FeatureVector(values=np.array(values)))
        labels.append(record.label)
    if failures and not skip_failures:
        raise DomainError("feature extraction failed for: " + "; ".join(failures))
    for line in failures:
        click.echo(f"skipped {line}", err=True)
    return features, labels


@main.command()
@click.option("--manifest", type=click.Path(), required=True)
@click.option("--out-model", type=click.Path(), required=True)
@click.option("--k", type=int, default=clf.DEFAULT_K, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--skip-failures", is_flag=True,
              help="Drop images that fail the pipeline instead of aborting.")
def train(manifest, out_model, k, jobs, skip_failures):
    """Train the two-stage classifier from a manifest and save it."""
    records = _load_manifest(manifest)
    features, labels = _dataset_features(records, jobs, skip_failures)
    try:
        model = clf.train(features, labels, k=k)
    except (InsufficientData, ValueError, clf.LayoutMismatch) as exc:
        raise click.UsageError(str(exc))
    clf.save_model(model, out_model)
    click.echo(f"model trained on {len(features)} samples -> {out_model}")


@main.command("eval")
@click.option("--manifest", type=click.Path(), required=True)
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--k", type=int, default=clf.DEFAULT_K, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]),
              default="table")
@click.option("--skip-failures", is_flag=True)
def evaluate(manifest, folds, seed, k, jobs, fmt, skip_failures):
    """Stratified cross-validation with confusion-matrix reporting."""
    records = _load_manifest(manifest)
    features, labels = _dataset_features(records, jobs, skip_failures)
    try:
        overall, stage_one, stage_two = clf.cross_validate(
            features, labels, folds=folds, seed=seed, k=k)
    except (InsufficientData, ValueError) as exc:
        raise click.UsageError(str(exc))
    click.echo(_render_eval(overall, stage_one, stage_two, fmt,
                            folds=folds, seed=seed, k=k))


def _render_eval(overall, stage_one, stage_two, fmt, **params):
    if fmt == "json":
        return json.dumps({
            "params": params,
            "overall": {
                "classes": overall.classes,
                "row_percentages": overall.row_percentages().tolist(),
                "per_class_accuracy": overall.per_class_accuracy(),
                "overall_accuracy": overall.overall_accuracy(),
            },
            "stage_one": {
                "classes": stage_one.classes,
                "row_percentages": stage_one.row_percentages().tolist(),
            },
            "stage_two": {
                "classes": stage_two.classes,
                "row_percentages": stage_two.row_percentages().tolist(),
            },
            "reference_diagonal": REFERENCE_DIAGONAL,
        }, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        for title, matrix in [("overall", overall), ("stage_one", stage_one),
                              ("stage_two", stage_two)]:
            writer.writerow([title])
            writer.writerows(matrix.to_csv_rows())
        return buf.getvalue().rstrip("\n")
    sections = [
        overall.to_text("overall (3-class)", REFERENCE_DIAGONAL),
        stage_one.to_text("stage I (normal vs abnormal)",
                          {"normal": REFERENCE_DIAGONAL["normal"], "abnormal": 97.5}),
        stage_two.to_text("stage II (atypical vs melanoma, truly-abnormal samples)",
                          {"atypical": REFERENCE_DIAGONAL["atypical"],
                           "melanoma": REFERENCE_DIAGONAL["melanoma"]}),
        "per-class accuracy: " + "  ".join(
            f"{cls} {acc:.1f}%" for cls, acc in overall.per_class_accuracy().items()),
        f"overall accuracy: {100 * overall.overall_accuracy():.1f}%",
        "reference diagonals are the published report targets, not this run",
    ]
    return "\n\n".join(sections[:3]) + "\n\n" + "\n".join(sections[3:])


# ---------------------------------------------------------------------------
# analyze

@main.command()
@click.option("--image", type=click.Path(), required=True)
@click.option("--model", "model_path", type=click.Path(), required=True)
@click.option("--emit-mask", type=click.Path(), default=None,
              help="Write the segmentation mask as a 1-bit PNG.")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
def analyze(image, model_path, emit_mask, fmt):
    """Classify a single dermoscopy image."""
    try:
        model = clf.load_model(model_path)
    except (clf.CorruptModel, clf.IncompatibleVersion) as exc:
        raise click.UsageError(str(exc))
    try:
        rgb = imaging.load_rgb(image)
    except imaging.ImageDecodeError as exc:
        raise click.UsageError(str(exc))
    try:
        vector, seg = extract_with_segmentation(rgb)
    except PIPELINE_ERRORS as exc:
        raise DomainError(f"{type(exc).__name__}: {exc}")
    cls, stage_one_score, stage_two_score = clf.classify(model, vector)
    if emit_mask:
        imaging.save_mask_png(seg.mask, emit_mask)
    body = {
        "lesion_class": cls.value,
        "stage_one_score": stage_one_score,
        "stage_two_score": stage_two_score,
        "area_px": seg.area_px,
        "bbox": list(seg.bbox),
        "advisory": cls is not clf.LesionClass.NORMAL,
    }
    if fmt == "json":
        click.echo(json.dumps(body))
    else:
        click.echo(f"class: {cls.value}")
        click.echo(f"stage I score: {stage_one_score:.3f}")
        if stage_two_score is not None:
            click.echo(f"stage II score: {stage_two_score:.3f}")
        click.echo(f"lesion area: {seg.area_px} px")
        if body["advisory"]:
            click.echo("advisory: seek medical help (abnormal lesion)")


# ---------------------------------------------------------------------------
# serve

@main.command()
@click.option("--port", type=int, default=8000, show_default=True, envvar="PORT")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--model", "model_path", type=click.Path(), default=None,
              envvar="MODEL_PATH")
@click.option("--data-dir", type=click.Path(), default="./data", envvar="DATA_DIR",
              show_default=True)
@click.option("--uv-source", type=click.Choice(["fixture", "http"]),
              default="fixture", envvar="UV_SOURCE", show_default=True)
@click.option("--uv-fixture", type=click.Path(), default=None, envvar="UV_FIXTURE_PATH")
@click.option("--uv-http-url", default=None, envvar="UV_HTTP_URL")
@click.option("--tz", default="UTC", envvar="TZ_DEFAULT", show_default=True)
@click.option("--static-dir", type=click.Path(), default=None, envvar="STATIC_DIR",
              help="Serve the web client from this directory.")
def serve(port, host, model_path, data_dir, uv_source, uv_fixture, uv_http_url,
          tz, static_dir):
    """Run the HTTP service until interrupted."""
    import uvicorn

    from .server import ServerConfig, create_app
    from .uvsource import ProviderConfig

    config = ServerConfig(
        model_path=model_path,
        data_dir=data_dir,
        provider=ProviderConfig(source=uv_source, fixture_path=uv_fixture,
                                http_url=uv_http_url, timezone=tz),
        static_dir=static_dir,
    )
    try:
        app = create_app(config)
    except (clf.CorruptModel, clf.IncompatibleVersion, OSError) as exc:
        raise click.UsageError(f"cannot start server: {exc}")
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()

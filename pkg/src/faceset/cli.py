"""Command-line entry points: eval, curate, ingest, passes.

Reports are JSON on stdout or ``--out``; diagnostics go to stderr at the
level selected by the FACESET_LOG environment variable (error, info, or
debug). Exit codes: 0 success, 2 input error, 3 numeric failure. A report
file is only ever written on exit 0.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import shutil
import sys
from pathlib import Path

from .curator import curate_subset
from .errors import FacesetError, InputError
from .ingest.embfile import (
    KIND_FEATURES,
    KIND_PROBABILITIES,
    read_embeddings,
)
from .ingest.imaging import process_manifest
from .ingest.manifest import load_manifest
from .metrics import (
    DEFAULT_MATCH_THRESHOLD,
    DEFAULT_SPLITS,
    fid_details,
    inception_score,
    match_classify,
    pairwise_variability,
)
from .report import (
    assert_finite_numbers,
    describe_input,
    report_header,
    sha256_file,
    training_passes,
)

log = logging.getLogger("faceset.cli")

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def configure_logging() -> None:
    raw = os.environ.get("FACESET_LOG", "error").strip().lower()
    level = LOG_LEVELS.get(raw)
    if level is None:
        print(f"faceset: ignoring unknown FACESET_LOG value {raw!r}", file=sys.stderr)
        level = logging.ERROR
    logging.basicConfig(stream=sys.stderr, level=level, format="%(name)s: %(message)s")


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_eval(args: argparse.Namespace) -> dict:
    report = report_header()
    inputs: dict = {}
    applied: dict = {}

    probs = embeddings = reference = None
    if args.probs:
        probs = read_embeddings(args.probs, expect_kind=KIND_PROBABILITIES)
        inputs["probs"] = describe_input(args.probs, probs)
    if args.embeddings:
        embeddings = read_embeddings(args.embeddings, expect_kind=KIND_FEATURES)
        inputs["embeddings"] = describe_input(args.embeddings, embeddings)
    if args.reference:
        reference = read_embeddings(args.reference, expect_kind=KIND_FEATURES)
        inputs["reference"] = describe_input(args.reference, reference)
    if probs is None and embeddings is None:
        raise InputError("nothing to evaluate: pass --probs and/or --embeddings")
    report["inputs"] = inputs

    if probs is not None:
        mean, variance = inception_score(probs, args.splits)
        report["inception"] = {"mean": mean, "variance": variance, "splits": args.splits}
        applied["splits"] = args.splits
    if embeddings is not None:
        report["variability"] = pairwise_variability(embeddings).as_dict()
    if embeddings is not None and reference is not None:
        detail = fid_details(reference, embeddings)
        report["fid"] = detail.value
        applied["regularization_fired"] = detail.regularized
        applied["clamped_eigenvalues"] = detail.clamped_eigenvalues
        match = match_classify(embeddings, reference, args.threshold)
        report["match"] = match.as_dict()
        applied["threshold"] = args.threshold
    report["applied"] = applied
    return report


def cmd_curate(args: argparse.Namespace) -> dict:
    pool = read_embeddings(args.embeddings, expect_kind=KIND_FEATURES)
    result = curate_subset(pool, args.k)
    report = report_header()
    report["inputs"] = {"embeddings": describe_input(args.embeddings, pool)}
    report["k"] = args.k
    report.update(result.as_dict())
    if args.copy_to:
        if not args.manifest:
            raise InputError("--copy-to needs --manifest to resolve source paths")
        manifest = load_manifest(args.manifest)
        by_id = manifest.by_id()
        dest = Path(args.copy_to)
        try:
            dest.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise InputError(f"cannot create {dest}: {exc}") from exc
        copied = []
        for selected in result.selected_ids:
            entry = by_id.get(selected)
            if entry is None:
                raise InputError(f"selected id {selected!r} not present in manifest")
            source = Path(entry.source_path)
            target = dest / f"{selected}{source.suffix}"
            try:
                shutil.copyfile(source, target)
            except OSError as exc:
                raise InputError(f"cannot copy {source} -> {target}: {exc}") from exc
            copied.append(str(target))
        report["copied_to"] = copied
    return report


def cmd_ingest(args: argparse.Namespace) -> dict:
    manifest = load_manifest(args.manifest)
    summary = process_manifest(
        manifest,
        out_dir=args.out_dir,
        records_path=args.records,
        target=args.size,
        mode=args.resample,
    )
    if manifest.entries and summary.produced == 0:
        raise InputError(
            f"every manifest entry failed; first error: "
            f"{summary.failures[0]['error']}: {summary.failures[0]['message']}"
        )
    report = report_header()
    report["inputs"] = {
        "manifest": {
            "path": str(args.manifest),
            "sha256": sha256_file(args.manifest),
            "entries": len(manifest.entries),
        }
    }
    report["applied"] = {"size": args.size, "resample": args.resample}
    report.update(summary.as_dict())
    return report


def cmd_passes(args: argparse.Namespace) -> dict:
    report = report_header()
    report["total_images"] = args.total_images
    report["dataset_size"] = args.dataset_size
    report["passes"] = training_passes(args.total_images, args.dataset_size)
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faceset",
        description="Evaluate, curate, and package face-image datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="compute quality/variability metrics")
    p_eval.add_argument("--probs", help="EMB1 class-probability file (kind=1)")
    p_eval.add_argument("--embeddings", help="EMB1 feature file for the evaluated set")
    p_eval.add_argument("--reference", help="EMB1 feature file for the reference set")
    p_eval.add_argument("--splits", type=int, default=DEFAULT_SPLITS)
    p_eval.add_argument("--threshold", type=float, default=DEFAULT_MATCH_THRESHOLD)
    p_eval.add_argument("--out", help="write the JSON report here instead of stdout")
    p_eval.add_argument("--seed", type=int, default=None, help="reserved")
    p_eval.set_defaults(handler=cmd_eval)

    p_curate = sub.add_parser("curate", help="select a maximally-varied subset")
    p_curate.add_argument("--embeddings", required=True, help="EMB1 pool file")
    p_curate.add_argument("--k", type=int, required=True, help="subset size")
    p_curate.add_argument("--copy-to", dest="copy_to", help="materialize selected images here")
    p_curate.add_argument("--manifest", help="manifest resolving ids to source images")
    p_curate.add_argument("--out", help="write the JSON result here instead of stdout")
    p_curate.add_argument("--seed", type=int, default=None, help="reserved")
    p_curate.set_defaults(handler=cmd_curate)

    p_ingest = sub.add_parser("ingest", help="crop/resize images per a manifest")
    p_ingest.add_argument("--manifest", required=True)
    p_ingest.add_argument("--out-dir", dest="out_dir", help="directory for output images")
    p_ingest.add_argument("--records", help="also pack outputs into this FSRC file")
    p_ingest.add_argument("--size", type=int, default=256)
    p_ingest.add_argument(
        "--resample", choices=["nearest", "bilinear"], default="bilinear"
    )
    p_ingest.add_argument("--out", help="write the JSON summary here instead of stdout")
    p_ingest.set_defaults(handler=cmd_ingest)

    p_passes = sub.add_parser("passes", help="training passes over a dataset")
    p_passes.add_argument("total_images", type=int)
    p_passes.add_argument("dataset_size", type=int)
    p_passes.add_argument("--out", help="write the JSON result here instead of stdout")
    p_passes.set_defaults(handler=cmd_passes)
    return parser


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
        assert_finite_numbers(report)
    except FacesetError as exc:
        print(f"faceset {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    _emit(report, getattr(args, "out", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""CLI: ``extract inception|faces --input DIR|MANIFEST --out PREFIX``.

Emits EMB1 files and JSON sidecars; prints a JSON summary on stdout.
Exit codes: 0 success, 2 unusable input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .emb1 import Emb1Error
from .features import DEFAULT_MODEL
from .imageio import ImageReadError
from .pipeline import ExtractionJob, JobError, extract_faces, extract_inception


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extract",
        description="Produce embedding/probability interchange files from images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("inception", "classifier features and class probabilities"),
        ("faces", "face embeddings and landmark manifest"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="image directory or manifest JSON")
        p.add_argument("--out", required=True, help="output path prefix")
        p.add_argument("--batch", type=int, default=32)
        p.add_argument(
            "--deterministic",
            action="store_true",
            default=True,
            help="force deterministic inference (the built-in backend always is)",
        )
        p.add_argument("--model", default=DEFAULT_MODEL)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("FACESET_LOG", "error").strip().lower(), logging.ERROR
    )
    logging.basicConfig(stream=sys.stderr, level=level, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    job = None
    try:
        job = ExtractionJob(
            input_path=args.input,
            out_prefix=args.out,
            batch_size=args.batch,
            deterministic=args.deterministic,
            model=args.model,
        )
        if args.command == "inception":
            summary = extract_inception(job)
        else:
            summary = extract_faces(job)
    except (JobError, Emb1Error, ImageReadError, ValueError, OSError) as exc:
        print(f"extract {args.command}: error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(summary.as_dict(), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())

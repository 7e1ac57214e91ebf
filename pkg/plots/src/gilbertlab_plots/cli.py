"""Command line entry point.

    gilbertlab-plot theta-curves --input sweep.csv --out theta.svg
    gilbertlab-plot lambda-crossing --input critical_curves.csv \
        --input critical.json --out lc.png
    gilbertlab-plot pivotal-ratio --input pivotal_profile.csv --out ratio.svg
    gilbertlab-plot gap --input gap.json --out gap.svg

Exit codes: 0 success, 2 usage error, 3 schema mismatch (the message names
the offending column), 7 missing input file.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, render
from .schemas import SchemaError

EXIT_SCHEMA = 3
EXIT_MISSING = 7


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gilbertlab-plot",
        description="Render figures from gilbertlab output files.",
    )
    parser.add_argument("kind", choices=FIGURE_KINDS)
    parser.add_argument("--input", action="append", required=True,
                        help="input file; repeat for figures with overlays")
    parser.add_argument("--out", required=True, help="image path (.png or .svg)")
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(kind=args.kind, inputs=tuple(args.input), output=args.out))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc.filename or exc}", file=sys.stderr)
        return EXIT_MISSING
    print(f"{args.kind} -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: qc-extract."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import run_extraction
from .export import civec_text
from .molecules import BUILTIN, load_molecule
from .scf import ExtractionError

EXIT_OK = 0
EXIT_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qc-extract",
        description=(
            "Run HF + CISD in the STO-6G basis and export the wavefunction "
            "as a CIVEC determinant file."
        ),
    )
    parser.add_argument(
        "--molecule",
        required=True,
        help=f"builtin name ({', '.join(sorted(BUILTIN))}) or a YAML spec path",
    )
    parser.add_argument("--out", required=True, help="output CIVEC path")
    parser.add_argument(
        "--frozen-core",
        type=int,
        default=None,
        help="doubly occupied spatial orbitals excluded from excitations "
        "(default: the molecule spec's value)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_molecule(args.molecule)
        result = run_extraction(spec, n_frozen=args.frozen_core)
        text = civec_text(result)
    except ExtractionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    print(
        f"wrote {out} (scf {result.energy_scf:.9f}, cisd {result.energy_cisd:.9f}, "
        f"{len(result.coefficients)} determinants)"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

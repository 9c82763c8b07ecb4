"""Command line front end.

Exit codes: 0 success, 2 unreadable or invalid input, 3 numerical
consistency failure, 4 optimizer failure. The report command writes
its outputs before signalling optimizer trouble so partial results
survive a bad optimization landscape.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .ci import build_state, load_civec
from .errors import NumericalConsistencyError, OptimizerError, ValidationError
from .measures import DEFAULT_RESTARTS, DEFAULT_SEED, SIDE_LEFT, SIDE_RIGHT
from .reduction import SSR_NUMBER, SSR_PARITY, constant_orbitals
from .report import (
    Report,
    RunConfig,
    raise_on_failed_optimizations,
    run_entropy_cost,
    run_report,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_OPTIMIZER = 4


def _parse_ssr_list(text: str) -> tuple[str, ...]:
    kinds = tuple(tok.strip() for tok in text.split(",") if tok.strip())
    for kind in kinds:
        if kind not in (SSR_PARITY, SSR_NUMBER):
            raise ValidationError(
                f"--ssr accepts a comma list of parity,number; got {kind!r}"
            )
    if not kinds:
        raise ValidationError("--ssr needs at least one kind")
    return kinds


def _parse_pairs(text: str) -> tuple[tuple[int, int], ...] | None:
    if text == "all":
        return None
    pairs = []
    for token in text.split(","):
        token = token.strip()
        a, sep, b = token.partition("-")
        if not sep:
            raise ValidationError(f"pair {token!r} is not of the form i-j")
        try:
            i, j = int(a), int(b)
        except ValueError:
            raise ValidationError(f"pair {token!r} is not of the form i-j") from None
        if not i < j:
            raise ValidationError(f"pair {token!r} must list the lower orbital first")
        pairs.append((i, j))
    if not pairs:
        raise ValidationError("--pairs needs 'all' or at least one i-j entry")
    return tuple(pairs)


def _parse_sides(text: str) -> tuple[str, ...]:
    if text == "both":
        return (SIDE_LEFT, SIDE_RIGHT)
    if text in (SIDE_LEFT, SIDE_RIGHT):
        return (text,)
    raise ValidationError(f"--sides must be both, left or right; got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbcorr",
        description="Classical and quantum correlation between orbitals of a CI state",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    report = sub.add_parser("report", help="pairwise correlation decomposition")
    report.add_argument("--input", required=True, help="CIVEC wavefunction file")
    report.add_argument("--ssr", default="parity,number", help="comma list of parity,number")
    report.add_argument("--pairs", default="all", help="'all' or comma list like 2-3,2-4")
    report.add_argument("--sides", default="both", help="both, left or right")
    report.add_argument("--seed", type=int, default=DEFAULT_SEED)
    report.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    report.add_argument(
        "--format", default="both", choices=("csv", "json", "both"), help="output format"
    )
    report.add_argument("--out", default=None, help="output directory (default: stdout)")

    cost = sub.add_parser("entropy-cost", help="entropy created by sector dephasing")
    cost.add_argument("--input", required=True, help="CIVEC wavefunction file")
    cost.add_argument("--ssr", default="parity,number", help="comma list of parity,number")

    validate = sub.add_parser("validate", help="parse a CIVEC file and summarize it")
    validate.add_argument("--input", required=True, help="CIVEC wavefunction file")

    return parser


def _load(path_text: str):
    path = Path(path_text)
    try:
        civec = load_civec(path)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    return civec, build_state(civec)


def _write_report(report: Report, fmt: str, out: str | None, stdout) -> None:
    if out is None:
        stdout.write(report.to_json() if fmt == "json" else report.to_csv())
        return
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("csv", "both"):
        target = out_dir / "report.csv"
        target.write_text(report.to_csv())
        written.append(target)
    if fmt in ("json", "both"):
        target = out_dir / "report.json"
        target.write_text(report.to_json())
        written.append(target)
    for target in written:
        stdout.write(f"wrote {target}\n")


def _cmd_report(args, stdout) -> int:
    config = RunConfig(
        ssr_kinds=_parse_ssr_list(args.ssr),
        pairs=_parse_pairs(args.pairs),
        sides=_parse_sides(args.sides),
        seed=args.seed,
        restarts=args.restarts,
    )
    _, state = _load(args.input)
    report = run_report(state, config, source=args.input)
    _write_report(report, args.format, args.out, stdout)
    raise_on_failed_optimizations(report)
    return EXIT_OK


def _cmd_entropy_cost(args, stdout) -> int:
    kinds = _parse_ssr_list(args.ssr)
    _, state = _load(args.input)
    costs = run_entropy_cost(state, kinds)
    for kind in kinds:
        stdout.write(f"{kind} {format(costs[kind], '.12g')}\n")
    return EXIT_OK


def _cmd_validate(args, stdout) -> int:
    civec, state = _load(args.input)
    skipped = constant_orbitals(state)
    stdout.write(
        f"ok: modes={civec.n_modes} electrons={civec.n_electrons} "
        f"kind={civec.kind} terms={len(state.terms)} "
        f"constant_orbitals={','.join(map(str, skipped)) if skipped else 'none'}\n"
    )
    return EXIT_OK


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "report": _cmd_report,
        "entropy-cost": _cmd_entropy_cost,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args, stdout)
    except OptimizerError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_OPTIMIZER
    except NumericalConsistencyError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except ValidationError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Run the pairwise correlation report for one wavefunction file and
render the result as heatmaps.

Writes report.csv / report.json plus one PNG per superselection rule
showing mutual information, its classical and quantum shares, and the
logarithmic negativity over all orbital pairs.

Usage:
    python3 scripts/molecule_report.py --input data/h2o.civec --out reports/h2o
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from orbcorr.ci import build_state, load_civec
from orbcorr.report import Report, RunConfig, run_report


@dataclass(frozen=True)
class Config:
    input_path: Path
    out_dir: Path
    seed: int
    restarts: int


def parse_args(argv=None) -> Config:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--input", required=True, type=Path)
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--restarts", type=int, default=24)
    args = parser.parse_args(argv)
    out = args.out if args.out is not None else Path("reports") / args.input.stem
    return Config(args.input, out, args.seed, args.restarts)


def pair_matrix(report: Report, n_orb: int, ssr: str, getter) -> np.ndarray:
    grid = np.full((n_orb, n_orb), np.nan)
    for row in report.rows:
        if row.ssr != ssr:
            continue
        value = getter(row)
        if value is None:
            continue
        i, j = row.pair
        grid[i - 1, j - 1] = value
        grid[j - 1, i - 1] = value
    return grid


def draw(ax, grid: np.ndarray, title: str) -> None:
    masked = np.ma.masked_invalid(grid)
    image = ax.imshow(masked, cmap="viridis", origin="upper")
    n = grid.shape[0]
    ax.set_xticks(range(n), [str(k + 1) for k in range(n)])
    ax.set_yticks(range(n), [str(k + 1) for k in range(n)])
    ax.set_title(title)
    plt.colorbar(image, ax=ax, fraction=0.046)


def main(argv=None) -> int:
    config = parse_args(argv)
    state = build_state(load_civec(config.input_path))
    n_orb = state.n_orbitals
    report = run_report(
        state,
        RunConfig(seed=config.seed, restarts=config.restarts),
        source=str(config.input_path),
    )

    config.out_dir.mkdir(parents=True, exist_ok=True)
    (config.out_dir / "report.csv").write_text(report.to_csv())
    (config.out_dir / "report.json").write_text(report.to_json())

    for ssr in ("none", "parity", "number"):
        if ssr == "none":
            panels = [
                ("mutual information (bits)", lambda r: r.mutual_information),
                ("log negativity (bits)", lambda r: r.negativity),
            ]
        else:
            panels = [
                ("mutual information (bits)", lambda r: r.mutual_information),
                ("classical share (bits)", lambda r: max(r.classical.values(), default=None)),
                ("discord (bits)", lambda r: max(r.discord.values(), default=None)),
                ("log negativity (bits)", lambda r: r.negativity),
            ]
        fig, axes = plt.subplots(1, len(panels), figsize=(4.6 * len(panels), 4.2))
        axes = np.atleast_1d(axes)
        for ax, (title, getter) in zip(axes, panels):
            draw(ax, pair_matrix(report, n_orb, ssr, getter), title)
        fig.suptitle(f"{config.input_path.name}, superselection: {ssr}")
        fig.tight_layout()
        fig.savefig(config.out_dir / f"heatmap_{ssr}.png", dpi=160)
        plt.close(fig)

    print(f"wrote report and heatmaps to {config.out_dir}")
    if report.failed_optimizations:
        print(f"warning: {len(report.failed_optimizations)} optimizations never converged")
        return 4
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

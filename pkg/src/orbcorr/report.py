"""Pairwise correlation reports over a CI wavefunction.

For every requested orbital pair the report carries one row per
superselection setting: the unconstrained row ("none") plus one row per
requested rule. Classical and quantum shares only exist under a rule,
so the none row leaves those cells empty and serves as the reference
against which the constrained rows quote percentage fractions.

All floating point cells are rendered with repr-stable %.12g formatting
and the JSON payload is dumped with sorted keys, so a fixed seed yields
byte-identical outputs run to run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .errors import OptimizerError, ValidationError
from .fock import SparsePureState
from .measures import (
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    SIDE_LEFT,
    SIDE_RIGHT,
    OptimizationOutcome,
    classical_correlation,
    mutual_information,
)
from .negativity import fermionic_log_negativity, qubit_log_negativity
from .reduction import (
    SSR_NONE,
    SSR_NUMBER,
    SSR_PARITY,
    check_ssr_kind,
    constant_orbitals,
    projection_entropy_cost,
    reduced_density_from_state,
)

CSV_COLUMNS = (
    "pair",
    "ssr",
    "I",
    "I_fraction_vs_none",
    "C_left",
    "C_right",
    "D_left",
    "D_right",
    "E",
    "E_fraction_vs_none",
    "discord_without_entanglement_flag",
)

DISCORD_FLAG_THRESHOLD = 1e-4
NEGATIVITY_FLOOR = 1e-9


@dataclass(frozen=True)
class RunConfig:
    """Settings for one report run."""

    ssr_kinds: tuple[str, ...] = (SSR_PARITY, SSR_NUMBER)
    pairs: tuple[tuple[int, int], ...] | None = None  # None selects all active pairs
    sides: tuple[str, ...] = (SIDE_LEFT, SIDE_RIGHT)
    seed: int = DEFAULT_SEED
    restarts: int = DEFAULT_RESTARTS

    def __post_init__(self):
        for kind in self.ssr_kinds:
            check_ssr_kind(kind, allow_none=False)
        if len(set(self.ssr_kinds)) != len(self.ssr_kinds):
            raise ValidationError("duplicate superselection kinds requested")
        for side in self.sides:
            if side not in (SIDE_LEFT, SIDE_RIGHT):
                raise ValidationError(f"unknown side {side!r}")
        if not self.sides:
            raise ValidationError("at least one measurement side is required")


@dataclass(frozen=True)
class PairRow:
    """One (pair, ssr) line of the report; None means not applicable."""

    pair: tuple[int, int]
    ssr: str
    mutual_information: float
    info_fraction_pct: float
    classical: dict[str, float] = field(default_factory=dict)
    discord: dict[str, float] = field(default_factory=dict)
    negativity: float = 0.0
    negativity_fraction_pct: float = 100.0
    negativity_qubit: float = 0.0
    discord_without_entanglement: bool = False
    entangled_only_fermionically: bool = False
    outcomes: dict[str, OptimizationOutcome] = field(default_factory=dict)


@dataclass(frozen=True)
class Report:
    """Full result set for one run, renderable as CSV or JSON."""

    config: RunConfig
    n_modes: int
    n_electrons: int
    n_terms: int
    skipped_orbitals: tuple[int, ...]
    rows: tuple[PairRow, ...]
    source: str | None = None

    @property
    def failed_optimizations(self) -> tuple[tuple[tuple[int, int], str, str], ...]:
        failures = []
        for row in self.rows:
            for side, outcome in row.outcomes.items():
                if not outcome.converged:
                    failures.append((row.pair, row.ssr, side))
        return tuple(failures)

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for row in self.rows:
            constrained = row.ssr != SSR_NONE
            shown_negativity = 0.0 if row.negativity < NEGATIVITY_FLOOR else row.negativity
            cells = [
                f"{row.pair[0]}-{row.pair[1]}",
                row.ssr,
                _fmt(row.mutual_information),
                _fmt(row.info_fraction_pct),
                _fmt(row.classical.get(SIDE_LEFT)),
                _fmt(row.classical.get(SIDE_RIGHT)),
                _fmt(row.discord.get(SIDE_LEFT)),
                _fmt(row.discord.get(SIDE_RIGHT)),
                _fmt(shown_negativity),
                _fmt(row.negativity_fraction_pct),
                "true" if constrained and row.discord_without_entanglement else "false",
            ]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        pairs: dict[str, list] = {}
        for row in self.rows:
            entry = {
                "ssr": row.ssr,
                "mutual_information": row.mutual_information,
                "mutual_information_pct_of_none": row.info_fraction_pct,
                "classical": {k: v for k, v in sorted(row.classical.items())},
                "discord": {k: v for k, v in sorted(row.discord.items())},
                "negativity_fermionic": row.negativity,
                "negativity_fermionic_pct_of_none": row.negativity_fraction_pct,
                "negativity_qubit": row.negativity_qubit,
                "flags": {
                    "discord_without_entanglement": row.discord_without_entanglement,
                    "entangled_only_fermionically": row.entangled_only_fermionically,
                },
                "optimization": {
                    side: {
                        "params": list(outcome.params),
                        "min_conditional_entropy": outcome.min_conditional_entropy,
                        "sweep_best": outcome.sweep_best,
                        "n_restarts": outcome.n_restarts,
                        "n_converged": outcome.n_converged,
                        "n_evaluations": outcome.n_evaluations,
                    }
                    for side, outcome in sorted(row.outcomes.items())
                },
            }
            pairs.setdefault(f"{row.pair[0]}-{row.pair[1]}", []).append(entry)
        return {
            "source": self.source,
            "config": {
                "ssr_kinds": list(self.config.ssr_kinds),
                "sides": list(self.config.sides),
                "seed": self.config.seed,
                "restarts": self.config.restarts,
            },
            "state": {
                "n_modes": self.n_modes,
                "n_electrons": self.n_electrons,
                "n_terms": self.n_terms,
                "skipped_constant_orbitals": list(self.skipped_orbitals),
            },
            "pairs": pairs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return format(float(value), ".12g")


def _fraction_pct(value: float, reference: float) -> float:
    # A vanishing reference pins the shared scale: report zero over zero
    # as a full share so constrained rows of an uncorrelated pair read 100%.
    if reference <= 0.0:
        return 100.0 if value <= 0.0 else float("inf")
    return 100.0 * value / reference


def pair_modes(pair: tuple[int, int]) -> tuple[int, int, int, int]:
    i, j = pair
    return (2 * i - 1, 2 * i, 2 * j - 1, 2 * j)


def select_pairs(state: SparsePureState, config: RunConfig) -> tuple[tuple[int, int], ...]:
    """Requested pairs, or every pair of non-constant orbitals."""
    n_orb = state.n_orbitals
    if config.pairs is not None:
        for i, j in config.pairs:
            if not (1 <= i < j <= n_orb):
                raise ValidationError(f"pair {i}-{j} out of range for {n_orb} orbitals")
        return tuple(config.pairs)
    skipped = set(constant_orbitals(state))
    active = [k for k in range(1, n_orb + 1) if k not in skipped]
    return tuple(combinations(active, 2))


def analyze_pair(
    state: SparsePureState, pair: tuple[int, int], config: RunConfig
) -> list[PairRow]:
    rdm = reduced_density_from_state(state, pair_modes(pair))
    info_none = mutual_information(rdm, SSR_NONE)
    neg_none = fermionic_log_negativity(rdm, SSR_NONE)
    rows = [
        PairRow(
            pair=pair,
            ssr=SSR_NONE,
            mutual_information=info_none,
            info_fraction_pct=100.0,
            negativity=neg_none,
            negativity_fraction_pct=100.0,
            negativity_qubit=qubit_log_negativity(rdm, SSR_NONE),
        )
    ]
    for kind in config.ssr_kinds:
        info = mutual_information(rdm, kind)
        negativity = fermionic_log_negativity(rdm, kind)
        negativity_qubit = qubit_log_negativity(rdm, kind)
        classical: dict[str, float] = {}
        discord: dict[str, float] = {}
        outcomes: dict[str, OptimizationOutcome] = {}
        for side in config.sides:
            outcome = classical_correlation(
                rdm, kind, side, seed=config.seed, restarts=config.restarts
            )
            outcomes[side] = outcome
            classical[side] = outcome.value
            discord[side] = max(0.0, info - outcome.value)
        rows.append(
            PairRow(
                pair=pair,
                ssr=kind,
                mutual_information=info,
                info_fraction_pct=_fraction_pct(info, info_none),
                classical=classical,
                discord=discord,
                negativity=negativity,
                negativity_fraction_pct=_fraction_pct(negativity, neg_none),
                negativity_qubit=negativity_qubit,
                discord_without_entanglement=(
                    max(discord.values()) > DISCORD_FLAG_THRESHOLD
                    and negativity < NEGATIVITY_FLOOR
                ),
                entangled_only_fermionically=(
                    negativity > NEGATIVITY_FLOOR
                    and negativity_qubit <= NEGATIVITY_FLOOR
                ),
                outcomes=outcomes,
            )
        )
    return rows


def run_report(
    state: SparsePureState, config: RunConfig, source: str | None = None
) -> Report:
    """Correlation decomposition of every selected pair of the state."""
    pairs = select_pairs(state, config)
    skipped = constant_orbitals(state) if config.pairs is None else ()
    rows: list[PairRow] = []
    for pair in pairs:
        rows.extend(analyze_pair(state, pair, config))
    return Report(
        config=config,
        n_modes=state.n_modes,
        n_electrons=state.terms[0][0].particle_count,
        n_terms=len(state.terms),
        skipped_orbitals=skipped,
        rows=tuple(rows),
        source=source,
    )


def raise_on_failed_optimizations(report: Report) -> None:
    failures = report.failed_optimizations
    if failures:
        detail = "; ".join(f"pair {i}-{j} {ssr} {side}" for (i, j), ssr, side in failures)
        raise OptimizerError(f"no converged restart for {detail}")


def run_entropy_cost(state: SparsePureState, kinds: tuple[str, ...]) -> dict[str, float]:
    """Entropy in bits created by dephasing the state into local sectors."""
    out = {}
    for kind in kinds:
        check_ssr_kind(kind, allow_none=False)
        out[kind] = projection_entropy_cost(state, kind)
    return out

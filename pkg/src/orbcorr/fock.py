"""Sparse fermionic Fock-space primitives.

Spin-orbitals ("modes") are indexed 1..2n and totally ordered. An
occupation pattern is written mode 1 first, so the pattern "1100" on
four modes occupies modes 1 and 2. Basis kets are wedge products of
creation operators taken in ascending mode order, which fixes every
sign in the package: creating or annihilating on mode mu picks up
(-1)**(number of occupied modes strictly below mu).

Everything here is exact integer/complex arithmetic on sparse data;
no dense matrices are ever built in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import ValidationError

NORM_TOL = 1e-10

SPIN_UP = "u"
SPIN_DOWN = "d"


@dataclass(frozen=True, slots=True)
class ModeLabel:
    """Provenance tag for one spin-orbital mode.

    orbital is 1-based; spin-up sits on mode 2k-1 and spin-down on
    mode 2k so the two modes of one spatial orbital stay adjacent.
    """

    orbital: int
    spin: str
    sym: str | None = None

    def __post_init__(self):
        if self.orbital < 1:
            raise ValidationError(f"orbital index must be >= 1, got {self.orbital}")
        if self.spin not in (SPIN_UP, SPIN_DOWN):
            raise ValidationError(f"spin must be '{SPIN_UP}' or '{SPIN_DOWN}', got {self.spin!r}")

    @property
    def mode(self) -> int:
        return 2 * self.orbital - (1 if self.spin == SPIN_UP else 0)


def default_labels(n_orbitals: int) -> tuple[ModeLabel, ...]:
    """Interleaved up/down labels for n spatial orbitals."""
    out = []
    for k in range(1, n_orbitals + 1):
        out.append(ModeLabel(k, SPIN_UP))
        out.append(ModeLabel(k, SPIN_DOWN))
    return tuple(out)


@dataclass(frozen=True, slots=True)
class OccupationPattern:
    """Occupations of `width` ordered modes, packed into an int.

    Bit (width - mu) of `bits` holds mode mu, so the binary rendering
    of `bits` reads in mode order, mode 1 leftmost.
    """

    bits: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValidationError(f"pattern width must be >= 1, got {self.width}")
        if not 0 <= self.bits < (1 << self.width):
            raise ValidationError(f"bits 0b{self.bits:b} do not fit in width {self.width}")

    @classmethod
    def from_string(cls, s: str) -> "OccupationPattern":
        if not s or set(s) - {"0", "1"}:
            raise ValidationError(f"occupation string must be nonempty 0/1, got {s!r}")
        return cls(int(s, 2), len(s))

    @classmethod
    def from_occupied(cls, modes: Iterable[int], width: int) -> "OccupationPattern":
        bits = 0
        for mu in modes:
            if not 1 <= mu <= width:
                raise ValidationError(f"mode {mu} outside 1..{width}")
            bits |= 1 << (width - mu)
        return cls(bits, width)

    def occupied(self, mode: int) -> bool:
        self._check_mode(mode)
        return bool((self.bits >> (self.width - mode)) & 1)

    def prefix_count(self, mode: int) -> int:
        """Number of occupied modes strictly below `mode`."""
        self._check_mode(mode)
        return (self.bits >> (self.width - mode + 1)).bit_count()

    @property
    def particle_count(self) -> int:
        return self.bits.bit_count()

    def with_mode_set(self, mode: int) -> "OccupationPattern":
        return OccupationPattern(self.bits | (1 << (self.width - mode)), self.width)

    def with_mode_cleared(self, mode: int) -> "OccupationPattern":
        return OccupationPattern(self.bits & ~(1 << (self.width - mode)), self.width)

    def substring(self, modes: Sequence[int]) -> "OccupationPattern":
        """Pattern restricted to `modes`, keeping their relative order."""
        bits = 0
        for mu in modes:
            bits = (bits << 1) | (1 if self.occupied(mu) else 0)
        return OccupationPattern(bits, len(modes))

    def _check_mode(self, mode: int) -> None:
        if not 1 <= mode <= self.width:
            raise ValidationError(f"mode {mode} outside 1..{self.width}")

    def __str__(self) -> str:
        return format(self.bits, f"0{self.width}b")


class SignedPattern(NamedTuple):
    """Result of one ladder operator: a +-1 sign and the new pattern."""

    sign: int
    pattern: OccupationPattern


def apply_creation(pattern: OccupationPattern, mode: int) -> SignedPattern | None:
    """f_mode^dagger acting on a basis ket; None when the mode is filled."""
    if pattern.occupied(mode):
        return None
    sign = -1 if pattern.prefix_count(mode) & 1 else 1
    return SignedPattern(sign, pattern.with_mode_set(mode))


def apply_annihilation(pattern: OccupationPattern, mode: int) -> SignedPattern | None:
    """f_mode acting on a basis ket; None when the mode is empty."""
    if not pattern.occupied(mode):
        return None
    sign = -1 if pattern.prefix_count(mode) & 1 else 1
    return SignedPattern(sign, pattern.with_mode_cleared(mode))


# An operator string is a sequence of (mode, is_creation) factors written
# left to right in operator order; application therefore starts from the
# last element.
OperatorString = Sequence[tuple[int, bool]]


def apply_operator_string(pattern: OccupationPattern, ops: OperatorString) -> SignedPattern | None:
    sign = 1
    for mode, is_creation in reversed(ops):
        step = apply_creation(pattern, mode) if is_creation else apply_annihilation(pattern, mode)
        if step is None:
            return None
        sign *= step.sign
        pattern = step.pattern
    return SignedPattern(sign, pattern)


@dataclass(frozen=True)
class SparsePureState:
    """Normalized fixed-particle-number pure state on 2n modes.

    terms maps each occupation pattern to its complex amplitude. All
    patterns must share one width and one particle count, and the
    amplitudes must be normalized within NORM_TOL.
    """

    terms: tuple[tuple[OccupationPattern, complex], ...]
    labels: tuple[ModeLabel, ...] | None = None

    def __post_init__(self):
        if not self.terms:
            raise ValidationError("state must have at least one term")
        width = self.terms[0][0].width
        count = self.terms[0][0].particle_count
        seen: set[int] = set()
        norm_sq = 0.0
        for pat, amp in self.terms:
            if pat.width != width:
                raise ValidationError(f"pattern {pat} has width {pat.width}, expected {width}")
            if pat.particle_count != count:
                raise ValidationError(
                    f"pattern {pat} has {pat.particle_count} particles, expected {count}"
                )
            if pat.bits in seen:
                raise ValidationError(f"duplicate pattern {pat}")
            seen.add(pat.bits)
            norm_sq += abs(amp) ** 2
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm^2 = {norm_sq!r} deviates from 1 beyond {NORM_TOL}")
        if self.labels is not None and len(self.labels) != width:
            raise ValidationError(f"{len(self.labels)} labels for width {width}")

    @classmethod
    def from_amplitudes(
        cls,
        amplitudes: dict[OccupationPattern, complex] | Iterable[tuple[OccupationPattern, complex]],
        labels: tuple[ModeLabel, ...] | None = None,
        normalize: bool = False,
    ) -> "SparsePureState":
        items = list(amplitudes.items()) if isinstance(amplitudes, dict) else list(amplitudes)
        if normalize:
            norm = sum(abs(a) ** 2 for _, a in items) ** 0.5
            if norm == 0.0:
                raise ValidationError("cannot normalize a zero state")
            items = [(p, a / norm) for p, a in items]
        return cls(tuple((p, complex(a)) for p, a in items), labels)

    @property
    def n_modes(self) -> int:
        return self.terms[0][0].width

    @property
    def n_orbitals(self) -> int:
        if self.n_modes % 2:
            raise ValidationError("mode count is odd, no orbital pairing")
        return self.n_modes // 2

    @property
    def particle_count(self) -> int:
        return self.terms[0][0].particle_count

    def amplitude(self, pattern: OccupationPattern) -> complex:
        for pat, amp in self.terms:
            if pat == pattern:
                return amp
        return 0.0


@dataclass(frozen=True)
class SparseDensityOperator:
    """Hermitian unit-trace operator as (value, ket, bra) triplets."""

    triplets: tuple[tuple[complex, OccupationPattern, OccupationPattern], ...]
    labels: tuple[ModeLabel, ...] | None = None

    def __post_init__(self):
        if not self.triplets:
            raise ValidationError("density operator must have at least one triplet")
        width = self.triplets[0][1].width
        table: dict[tuple[int, int], complex] = {}
        trace = 0.0 + 0.0j
        for val, ket, bra in self.triplets:
            if ket.width != width or bra.width != width:
                raise ValidationError("mixed pattern widths in density operator")
            key = (ket.bits, bra.bits)
            if key in table:
                raise ValidationError(f"duplicate triplet for |{ket}><{bra}|")
            table[key] = val
            if ket.bits == bra.bits:
                trace += val
        for (k, b), val in table.items():
            mirror = table.get((b, k), 0.0 + 0.0j)
            if abs(val - mirror.conjugate()) > NORM_TOL:
                raise ValidationError(f"hermiticity violated at ({k:b}, {b:b})")
        if abs(trace - 1.0) > NORM_TOL:
            raise ValidationError(f"trace {trace!r} deviates from 1 beyond {NORM_TOL}")

    @property
    def n_modes(self) -> int:
        return self.triplets[0][1].width


def outer_product(state: SparsePureState) -> SparseDensityOperator:
    """|psi><psi| as an explicit triplet list. Quadratic in term count."""
    trips = []
    for ket, a in state.terms:
        for bra, b in state.terms:
            trips.append((a * b.conjugate(), ket, bra))
    return SparseDensityOperator(tuple(trips), state.labels)


def expectation_of_operator_string(state: SparsePureState, ops: OperatorString) -> complex:
    """<psi| O |psi> for a product O of ladder operators, sparse throughout."""
    ket_terms: dict[int, complex] = {}
    width = state.n_modes
    for pat, amp in state.terms:
        moved = apply_operator_string(pat, ops)
        if moved is None:
            continue
        key = moved.pattern.bits
        ket_terms[key] = ket_terms.get(key, 0.0 + 0.0j) + moved.sign * amp
    acc = 0.0 + 0.0j
    for pat, amp in state.terms:
        if pat.bits in ket_terms:
            acc += amp.conjugate() * ket_terms[pat.bits]
    return acc

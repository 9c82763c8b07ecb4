"""Reading, validating and materializing CI wavefunction files.

The CIVEC text format stores one determinant expansion per file:

    CIVEC 1
    modes 14 electrons 10
    mode 1 orbital 1 spin u sym a1
    ref 11111111110000 0.9782
    single i=5 a=11 c=-0.0123
    double i=5 j=6 a=11 b=12 c=0.0210
    # comments and blank lines are ignored

A file is either excitation-kind (one `ref` line plus `single`/`double`
lines whose amplitudes multiply f_a^dag f_i and f_a^dag f_b^dag f_i f_j
acting on the reference) or determinant-kind (explicit `det <pattern>
<coefficient>` lines). Mixing the two kinds is an error. Coefficients
are stored unnormalized; build_state normalizes and records the norm.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError
from .fock import (
    ModeLabel,
    OccupationPattern,
    SparsePureState,
    apply_operator_string,
    default_labels,
)

FORMAT_NAME = "CIVEC"
FORMAT_VERSION = 1

# Amplitudes below this fraction of the norm carry no information at the
# working precision and are dropped during state construction.
AMPLITUDE_CUTOFF = 1e-12

EXCITATION_KIND = "excitation"
DETERMINANT_KIND = "determinant"


@dataclass(frozen=True)
class SingleExcitation:
    i: int
    a: int
    c: float


@dataclass(frozen=True)
class DoubleExcitation:
    i: int
    j: int
    a: int
    b: int
    c: float


@dataclass(frozen=True)
class CIVector:
    """Parsed CIVEC file contents, still unnormalized."""

    n_modes: int
    n_electrons: int
    kind: str
    labels: tuple[ModeLabel, ...]
    ref: tuple[OccupationPattern, float] | None = None
    singles: tuple[SingleExcitation, ...] = ()
    doubles: tuple[DoubleExcitation, ...] = ()
    dets: tuple[tuple[OccupationPattern, float], ...] = ()

    @property
    def n_orbitals(self) -> int:
        return self.n_modes // 2


def _parse_int(token: str, what: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {token!r}", line_no) from None


def _parse_float(token: str, what: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected number {what}, got {token!r}", line_no) from None


def _parse_pattern(token: str, n_modes: int, n_electrons: int, line_no: int) -> OccupationPattern:
    if set(token) - {"0", "1"}:
        raise ParseError(f"occupation pattern must be 0/1, got {token!r}", line_no)
    if len(token) != n_modes:
        raise ParseError(
            f"pattern {token!r} has {len(token)} modes, header declares {n_modes}", line_no
        )
    pattern = OccupationPattern.from_string(token)
    if pattern.particle_count != n_electrons:
        raise ParseError(
            f"pattern {token!r} holds {pattern.particle_count} electrons, "
            f"header declares {n_electrons}",
            line_no,
        )
    return pattern


_KEYED = re.compile(r"^([a-z]+)=(\S+)$")


def _keyed_fields(parts: list[str], expected: tuple[str, ...], line_no: int) -> dict[str, str]:
    if len(parts) != len(expected):
        raise ParseError(
            f"expected fields {' '.join(k + '=...' for k in expected)}", line_no
        )
    out: dict[str, str] = {}
    for part, want in zip(parts, expected):
        m = _KEYED.match(part)
        if not m or m.group(1) != want:
            raise ParseError(f"expected field {want}=..., got {part!r}", line_no)
        out[want] = m.group(2)
    return out


def parse_civec(text: str) -> CIVector:
    """Parse CIVEC text. Raises ParseError with a line number on bad input."""
    lines = text.splitlines()
    n_modes = n_electrons = None
    header_seen = False
    mode_lines: dict[int, ModeLabel] = {}
    ref: tuple[OccupationPattern, float] | None = None
    singles: list[SingleExcitation] = []
    doubles: list[DoubleExcitation] = []
    dets: list[tuple[OccupationPattern, float]] = []
    seen_patterns: set[int] = set()
    seen_single_keys: set[tuple[int, int]] = set()
    seen_double_keys: set[tuple[frozenset[int], frozenset[int]]] = set()

    def require_header(line_no: int) -> None:
        if n_modes is None:
            raise ParseError("modes/electrons header required before this line", line_no)

    def require_ref(line_no: int) -> None:
        if ref is None:
            raise ParseError("ref line required before excitation lines", line_no)

    def forbid_mixing(line_no: int, incoming: str) -> None:
        has_excitation = ref is not None or singles or doubles
        if incoming == DETERMINANT_KIND and has_excitation:
            raise ParseError("det lines cannot be mixed with ref/single/double lines", line_no)
        if incoming == EXCITATION_KIND and dets:
            raise ParseError("ref/single/double lines cannot be mixed with det lines", line_no)

    for idx, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]

        if not header_seen:
            if key != FORMAT_NAME:
                raise ParseError(f"file must start with '{FORMAT_NAME} {FORMAT_VERSION}'", idx)
            if len(parts) != 2 or _parse_int(parts[1], "format version", idx) != FORMAT_VERSION:
                raise ParseError(f"unsupported format version {parts[1:]!r}", idx)
            header_seen = True
            continue

        if key == "modes":
            if n_modes is not None:
                raise ParseError("duplicate modes/electrons header", idx)
            fields = parts[1:]
            if len(fields) != 3 or fields[1] != "electrons":
                raise ParseError("expected 'modes <count> electrons <count>'", idx)
            n_modes = _parse_int(fields[0], "mode count", idx)
            n_electrons = _parse_int(fields[2], "electron count", idx)
            if n_modes < 2 or n_modes % 2:
                raise ParseError(f"mode count must be positive and even, got {n_modes}", idx)
            if not 1 <= n_electrons <= n_modes:
                raise ParseError(f"electron count {n_electrons} outside 1..{n_modes}", idx)
            continue

        require_header(idx)

        if key == "mode":
            rest = parts[1:]
            sym = None
            if len(rest) == 7 and rest[5] == "sym":
                sym = rest[6]
                rest = rest[:5]
            if len(rest) != 5 or rest[1] != "orbital" or rest[3] != "spin":
                raise ParseError("expected 'mode <m> orbital <k> spin <u|d> [sym <tag>]'", idx)
            mu = _parse_int(rest[0], "mode index", idx)
            orbital = _parse_int(rest[2], "orbital index", idx)
            spin = rest[4]
            if spin not in ("u", "d"):
                raise ParseError(f"spin must be u or d, got {spin!r}", idx)
            if not 1 <= mu <= n_modes:
                raise ParseError(f"mode index {mu} outside 1..{n_modes}", idx)
            label = ModeLabel(orbital, spin, sym)
            if label.mode != mu:
                raise ParseError(
                    f"mode {mu} labeled orbital {orbital} spin {spin}, "
                    f"but that orbital/spin sits on mode {label.mode}",
                    idx,
                )
            if mu in mode_lines:
                raise ParseError(f"duplicate label for mode {mu}", idx)
            mode_lines[mu] = label

        elif key == "ref":
            forbid_mixing(idx, EXCITATION_KIND)
            if ref is not None:
                raise ParseError("duplicate ref line", idx)
            if len(parts) != 3:
                raise ParseError("expected 'ref <pattern> <coefficient>'", idx)
            pattern = _parse_pattern(parts[1], n_modes, n_electrons, idx)
            ref = (pattern, _parse_float(parts[2], "coefficient", idx))
            seen_patterns.add(pattern.bits)

        elif key == "single":
            forbid_mixing(idx, EXCITATION_KIND)
            require_ref(idx)
            f = _keyed_fields(parts[1:], ("i", "a", "c"), idx)
            i = _parse_int(f["i"], "for i", idx)
            a = _parse_int(f["a"], "for a", idx)
            c = _parse_float(f["c"], "for c", idx)
            for name, mu in (("i", i), ("a", a)):
                if not 1 <= mu <= n_modes:
                    raise ParseError(f"{name}={mu} outside 1..{n_modes}", idx)
            if not ref[0].occupied(i):
                raise ParseError(f"i={i} is not occupied in the reference", idx)
            if ref[0].occupied(a):
                raise ParseError(f"a={a} is already occupied in the reference", idx)
            if (i, a) in seen_single_keys:
                raise ParseError(f"duplicate single excitation i={i} a={a}", idx)
            seen_single_keys.add((i, a))
            singles.append(SingleExcitation(i, a, c))

        elif key == "double":
            forbid_mixing(idx, EXCITATION_KIND)
            require_ref(idx)
            f = _keyed_fields(parts[1:], ("i", "j", "a", "b", "c"), idx)
            i = _parse_int(f["i"], "for i", idx)
            j = _parse_int(f["j"], "for j", idx)
            a = _parse_int(f["a"], "for a", idx)
            b = _parse_int(f["b"], "for b", idx)
            c = _parse_float(f["c"], "for c", idx)
            for name, mu in (("i", i), ("j", j), ("a", a), ("b", b)):
                if not 1 <= mu <= n_modes:
                    raise ParseError(f"{name}={mu} outside 1..{n_modes}", idx)
            if i == j or a == b:
                raise ParseError("double excitation needs distinct i,j and distinct a,b", idx)
            for name, mu in (("i", i), ("j", j)):
                if not ref[0].occupied(mu):
                    raise ParseError(f"{name}={mu} is not occupied in the reference", idx)
            for name, mu in (("a", a), ("b", b)):
                if ref[0].occupied(mu):
                    raise ParseError(f"{name}={mu} is already occupied in the reference", idx)
            dkey = (frozenset((i, j)), frozenset((a, b)))
            if dkey in seen_double_keys:
                raise ParseError(f"duplicate double excitation i={i} j={j} a={a} b={b}", idx)
            seen_double_keys.add(dkey)
            doubles.append(DoubleExcitation(i, j, a, b, c))

        elif key == "det":
            forbid_mixing(idx, DETERMINANT_KIND)
            if len(parts) != 3:
                raise ParseError("expected 'det <pattern> <coefficient>'", idx)
            pattern = _parse_pattern(parts[1], n_modes, n_electrons, idx)
            if pattern.bits in seen_patterns:
                raise ParseError(f"duplicate determinant {parts[1]}", idx)
            seen_patterns.add(pattern.bits)
            dets.append((pattern, _parse_float(parts[2], "coefficient", idx)))

        else:
            raise ParseError(f"unknown line kind {key!r}", idx)

    if not header_seen:
        raise ParseError("empty file, expected CIVEC header", 1)
    if n_modes is None:
        raise ParseError("missing modes/electrons header", len(lines))
    if ref is None and not dets:
        raise ParseError("file declares no determinants", len(lines))

    labels = list(default_labels(n_modes // 2))
    for mu, label in mode_lines.items():
        labels[mu - 1] = label

    kind = DETERMINANT_KIND if dets else EXCITATION_KIND
    return CIVector(
        n_modes=n_modes,
        n_electrons=n_electrons,
        kind=kind,
        labels=tuple(labels),
        ref=ref,
        singles=tuple(singles),
        doubles=tuple(doubles),
        dets=tuple(dets),
    )


def load_civec(path: str | Path) -> CIVector:
    return parse_civec(Path(path).read_text())


def serialize_civec(civ: CIVector, comment: str | None = None) -> str:
    """Render a CIVector back to text. repr() keeps floats bit-exact."""
    out = [f"{FORMAT_NAME} {FORMAT_VERSION}"]
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"modes {civ.n_modes} electrons {civ.n_electrons}")
    defaults = default_labels(civ.n_orbitals)
    for label in civ.labels:
        if label != defaults[label.mode - 1]:
            extra = f" sym {label.sym}" if label.sym is not None else ""
            out.append(f"mode {label.mode} orbital {label.orbital} spin {label.spin}{extra}")
    if civ.kind == EXCITATION_KIND:
        out.append(f"ref {civ.ref[0]} {civ.ref[1]!r}")
        for s in civ.singles:
            out.append(f"single i={s.i} a={s.a} c={s.c!r}")
        for d in civ.doubles:
            out.append(f"double i={d.i} j={d.j} a={d.a} b={d.b} c={d.c!r}")
    else:
        for pattern, c in civ.dets:
            out.append(f"det {pattern} {c!r}")
    return "\n".join(out) + "\n"


def write_civec(civ: CIVector, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(serialize_civec(civ, comment))


def build_state(civ: CIVector, cutoff: float = AMPLITUDE_CUTOFF) -> SparsePureState:
    """Materialize the normalized sparse state a CIVector describes.

    Excitation amplitudes are applied literally as ladder-operator
    strings on the reference, so the resulting determinant signs are
    correct for any reference pattern, contiguous or not.
    """
    amplitudes: dict[OccupationPattern, complex] = {}

    def add(pattern: OccupationPattern, value: complex) -> None:
        amplitudes[pattern] = amplitudes.get(pattern, 0.0 + 0.0j) + value

    if civ.kind == EXCITATION_KIND:
        ref_pattern, ref_c = civ.ref
        add(ref_pattern, ref_c)
        for s in civ.singles:
            moved = apply_operator_string(ref_pattern, [(s.a, True), (s.i, False)])
            if moved is None:
                raise ValidationError(f"single i={s.i} a={s.a} annihilates the reference")
            add(moved.pattern, moved.sign * s.c)
        for d in civ.doubles:
            ops = [(d.a, True), (d.b, True), (d.i, False), (d.j, False)]
            moved = apply_operator_string(ref_pattern, ops)
            if moved is None:
                raise ValidationError(
                    f"double i={d.i} j={d.j} a={d.a} b={d.b} annihilates the reference"
                )
            add(moved.pattern, moved.sign * d.c)
    else:
        for pattern, c in civ.dets:
            add(pattern, c)

    norm = sum(abs(v) ** 2 for v in amplitudes.values()) ** 0.5
    if norm == 0.0:
        raise ValidationError("all coefficients are zero")
    kept = [(p, v / norm) for p, v in amplitudes.items() if abs(v) / norm >= cutoff]
    renorm = sum(abs(v) ** 2 for _, v in kept) ** 0.5
    return SparsePureState(
        tuple((p, v / renorm) for p, v in kept),
        labels=civ.labels,
    )

"""Minimal-basis construction from Slater-orbital Gaussian fits.

Each atomic orbital is a fixed six-Gaussian expansion of a Slater-type
orbital. The unit-exponent expansions are obtained by maximizing the
overlap between the normalized expansion and the Slater function; the
shared-exponent 2s/2p set maximizes the summed 2s and 2p overlaps. Any
Slater exponent zeta is then reached by scaling all Gaussian exponents
by zeta**2, which leaves coefficients over normalized primitives
unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import erfcx


def slater_gaussian_moments(zeta: float, alpha: float, nmax: int) -> np.ndarray:
    """Radial moments m_n = integral r^n exp(-zeta r - alpha r^2) dr, n <= nmax.

    The n = 0 seed uses erfcx to stay finite for small alpha.
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    out = np.empty(nmax + 1)
    half = zeta / (2.0 * np.sqrt(alpha))
    out[0] = 0.5 * np.sqrt(np.pi / alpha) * erfcx(half)
    if nmax >= 1:
        out[1] = (1.0 - zeta * out[0]) / (2.0 * alpha)
    for n in range(2, nmax + 1):
        out[n] = ((n - 1) * out[n - 2] - zeta * out[n - 1]) / (2.0 * alpha)
    return out


def slater_overlap(kind: str, zeta: float, alpha: float) -> float:
    """Overlap of a normalized Slater orbital with a normalized Gaussian.

    Both are centered at the origin; for p orbitals the same axis is
    used on both sides.
    """
    if kind == "1s":
        radial = slater_gaussian_moments(zeta, alpha, 2)[2]
        return float(
            np.sqrt(zeta**3 / np.pi) * (2.0 * alpha / np.pi) ** 0.75 * 4.0 * np.pi * radial
        )
    if kind == "2s":
        radial = slater_gaussian_moments(zeta, alpha, 3)[3]
        return float(
            np.sqrt(zeta**5 / (3.0 * np.pi))
            * (2.0 * alpha / np.pi) ** 0.75
            * 4.0
            * np.pi
            * radial
        )
    if kind == "2p":
        radial = slater_gaussian_moments(zeta, alpha, 4)[4]
        return float(
            np.sqrt(zeta**5 / np.pi)
            * (2.0 * alpha / np.pi) ** 0.75
            * 2.0
            * np.sqrt(alpha)
            * (4.0 * np.pi / 3.0)
            * radial
        )
    raise ValueError(f"unknown orbital kind {kind!r}")


def gaussian_overlap_matrix(kind: str, alphas: np.ndarray) -> np.ndarray:
    """Overlaps among normalized same-center primitives of one kind."""
    a = alphas[:, None]
    b = alphas[None, :]
    ratio = 2.0 * np.sqrt(a * b) / (a + b)
    power = 1.5 if kind in ("1s", "2s") else 2.5
    return ratio**power


def _best_fit(kinds: tuple[str, ...], alphas: np.ndarray) -> tuple[float, list[np.ndarray]]:
    """Summed optimal overlap and per-kind coefficients at fixed exponents."""
    total = 0.0
    coeff_sets = []
    for kind in kinds:
        v = np.array([slater_overlap(kind, 1.0, a) for a in alphas])
        s = gaussian_overlap_matrix(kind, alphas)
        t = np.linalg.solve(s, v)
        quality = float(np.sqrt(v @ t))
        total += quality
        coeff_sets.append(t / quality)
    return total, coeff_sets


def fit_slater_expansion(
    kinds: tuple[str, ...], start: np.ndarray
) -> tuple[np.ndarray, list[np.ndarray], float]:
    """Fit shared Gaussian exponents to one or more unit-zeta Slater orbitals.

    Maximizes the sum of normalized-overlap qualities over the log
    exponents. Returns descending exponents, one coefficient vector per
    kind (for normalized primitives), and the summed overlap at the
    optimum.
    """

    def loss(x: np.ndarray) -> float:
        return -_best_fit(kinds, np.exp(x))[0]

    x = np.log(np.asarray(start, dtype=float))
    for method, tol in (("Nelder-Mead", 1e-14), ("Nelder-Mead", 1e-15)):
        result = minimize(
            loss,
            x,
            method=method,
            options={"xatol": 1e-12, "fatol": tol, "maxfev": 40000},
        )
        x = result.x
    alphas = np.exp(x)
    order = np.argsort(alphas)[::-1]
    alphas = alphas[order]
    total, coeff_sets = _best_fit(kinds, alphas)
    return alphas, [c[order] for c in coeff_sets], total


# Published unit-zeta six-Gaussian 1s expansion (normalized primitives).
STO6G_1S_EXPONENTS = np.array(
    [
        23.10303149,
        4.235915534,
        1.185056519,
        0.4070988982,
        0.1580884151,
        0.06510953954,
    ]
)
STO6G_1S_COEFFS = np.array(
    [
        0.009163596281,
        0.04936149294,
        0.1685383049,
        0.3705627997,
        0.4164915298,
        0.1303340841,
    ]
)

# Shared-exponent 2s/2p set regenerated by fit_slater_expansion with the
# same procedure that reproduces the published 1s values above.
STO6G_2SP_EXPONENTS = np.array(
    [
        10.309065321059,
        2.040393034421,
        0.634147921417,
        0.243978773772,
        0.105960164483,
        0.048569279218,
    ]
)
STO6G_2S_COEFFS = np.array(
    [
        -0.013252371915,
        -0.046991572879,
        -0.033786235158,
        0.250238666088,
        0.595116593674,
        0.240710203229,
    ]
)
STO6G_2P_COEFFS = np.array(
    [
        0.003759537487,
        0.03767863347,
        0.173895569912,
        0.418035099875,
        0.425860883881,
        0.101710371903,
    ]
)

# Slater exponents per element and shell, standard molecular values.
SLATER_ZETA = {
    "H": {"1s": 1.24},
    "He": {"1s": 1.69},
    "C": {"1s": 5.67, "2sp": 1.72},
    "O": {"1s": 7.66, "2sp": 2.25},
}

ATOMIC_NUMBER = {"H": 1, "He": 2, "C": 6, "O": 8}


@dataclass(frozen=True)
class ContractedAO:
    """One cartesian atomic orbital as a normalized Gaussian contraction."""

    center: tuple[float, float, float]
    lmn: tuple[int, int, int]
    exponents: tuple[float, ...]
    coefficients: tuple[float, ...]
    label: str


def _primitive_norm(alpha: float, lmn: tuple[int, int, int]) -> float:
    l, m, n = lmn
    dfact = 1.0
    for k in (l, m, n):
        for j in range(2 * k - 1, 0, -2):
            dfact *= j
    return (2.0 * alpha / np.pi) ** 0.75 * (4.0 * alpha) ** (0.5 * (l + m + n)) / np.sqrt(dfact)


def _contract(
    center: np.ndarray,
    lmn: tuple[int, int, int],
    zeta: float,
    unit_exps: np.ndarray,
    unit_coeffs: np.ndarray,
    label: str,
) -> ContractedAO:
    exps = unit_exps * zeta**2
    raw = unit_coeffs * np.array([_primitive_norm(a, lmn) for a in exps])
    # Renormalize the contraction; the fit is not exactly norm one.
    self_overlap = 0.0
    for ci, ai in zip(raw, exps):
        for cj, aj in zip(raw, exps):
            p = ai + aj
            l, m, n = lmn
            dfact = 1.0
            for k in (l, m, n):
                for j in range(2 * k - 1, 0, -2):
                    dfact *= j
            angular = dfact / (2.0 * p) ** (l + m + n)
            self_overlap += ci * cj * angular * (np.pi / p) ** 1.5
    raw = raw / np.sqrt(self_overlap)
    return ContractedAO(
        center=tuple(float(x) for x in center),
        lmn=lmn,
        exponents=tuple(float(a) for a in exps),
        coefficients=tuple(float(c) for c in raw),
        label=label,
    )


def atomic_orbitals(element: str, center: np.ndarray) -> list[ContractedAO]:
    """STO-6G cartesian AO list for one atom."""
    if element not in SLATER_ZETA:
        raise ValueError(f"unsupported element {element!r}")
    zetas = SLATER_ZETA[element]
    aos = [
        _contract(
            center, (0, 0, 0), zetas["1s"], STO6G_1S_EXPONENTS, STO6G_1S_COEFFS, f"{element} 1s"
        )
    ]
    if "2sp" in zetas:
        zeta = zetas["2sp"]
        aos.append(
            _contract(
                center, (0, 0, 0), zeta, STO6G_2SP_EXPONENTS, STO6G_2S_COEFFS, f"{element} 2s"
            )
        )
        for lmn, axis in (((1, 0, 0), "x"), ((0, 1, 0), "y"), ((0, 0, 1), "z")):
            aos.append(
                _contract(
                    center, lmn, zeta, STO6G_2SP_EXPONENTS, STO6G_2P_COEFFS, f"{element} 2p{axis}"
                )
            )
    return aos

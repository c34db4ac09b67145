"""Blade basis of the 16-dimensional Clifford algebra.

A blade is a bitmask over gamma^0..gamma^3 (upper indices), standing for the
ordered product gamma^{mu_1} gamma^{mu_2} ... with mu_1 < mu_2 < ...
Products reduce with (gamma^mu)^2 = g^{mu mu} and anticommutation of
distinct generators.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..gamma_algebra import METRIC, dirac, identity, is_zero
from ..scalar_ring import GaussianRational, ScalarCoeff

N_BLADES = 16


def bits(blade: int) -> tuple[int, ...]:
    return tuple(mu for mu in range(4) if blade >> mu & 1)


def grade(blade: int) -> int:
    return bin(blade).count("1")


def spatial_count(blade: int) -> int:
    return grade(blade & 0b1110)


@lru_cache(maxsize=None)
def blade_product(a: int, b: int) -> tuple[int, int]:
    """(sign, blade) with gamma_a gamma_b = sign * gamma_{a xor b}."""
    swaps = 0
    for j in bits(b):
        swaps += sum(1 for i in bits(a) if i > j)
    sign = -1 if swaps % 2 else 1
    for mu in bits(a & b):
        sign *= int(METRIC[mu, mu])
    return sign, a ^ b


def is_even(blade: int) -> bool:
    """Commutes with beta = gamma^0 (even) iff it contains an even number of spatial gammas."""
    return spatial_count(blade) % 2 == 0


def dagger_sign(blade: int) -> int:
    """gamma_B^dagger = dagger_sign(B) * gamma_B.

    Reversal of n factors costs (-1)^{n(n-1)/2}; each spatial gamma^k is
    antihermitian.
    """
    n = grade(blade)
    rev = -1 if (n * (n - 1) // 2) % 2 else 1
    return rev * (-1 if spatial_count(blade) % 2 else 1)


@lru_cache(maxsize=None)
def blade_matrix(blade: int) -> np.ndarray:
    rep = dirac()
    out = identity()
    for mu in bits(blade):
        out = out @ rep.gamma_upper[mu]
    return out


# -- 3+1 naming -----------------------------------------------------------
#
# Every blade equals (unit phase) x one of: I, beta, alpha_k, sigma_k,
# beta alpha_k, beta sigma_k, gamma5, beta gamma5.  The table is derived by
# exact matrix comparison in the Dirac representation, not typed in.


def _three_plus_one_basis() -> dict[str, np.ndarray]:
    rep = dirac()
    out = {"I": identity(), "β": rep.beta}
    for k in (1, 2, 3):
        out[f"α{k}"] = rep.alpha[k]
        out[f"σ{k}"] = rep.sigma[k]
        out[f"βα{k}"] = rep.beta @ rep.alpha[k]
        out[f"βσ{k}"] = rep.beta @ rep.sigma[k]
    out["γ5"] = rep.gamma5
    out["βγ5"] = rep.beta @ rep.gamma5
    return out


_PHASES = (
    GaussianRational(1),
    GaussianRational(-1),
    GaussianRational(0, 1),
    GaussianRational(0, -1),
)


@lru_cache(maxsize=None)
def three_plus_one_name(blade: int) -> tuple[GaussianRational, str]:
    """(phase, label) with gamma_blade = phase * label."""
    mat = blade_matrix(blade)
    for label, basis in _three_plus_one_basis().items():
        for ph in _PHASES:
            if is_zero(mat - basis * ScalarCoeff.coerce(ph)):
                return ph, label
    raise AssertionError(f"blade {blade:04b} has no 3+1 name")


def label_blade(label: str) -> tuple[GaussianRational, int]:
    """Inverse of three_plus_one_name: label = phase * gamma_blade."""
    for b in range(N_BLADES):
        ph, lab = three_plus_one_name(b)
        if lab == label:
            return ph.inverse(), b
    raise KeyError(label)

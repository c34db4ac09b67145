"""Electrostatic self-energy of a charge spread over a four-dimensional ball.

Gauss's law on the 3-sphere of area 2 pi^2 r^3 carrying charge r0 e gives the
field magnitude r0 e / (2 pi^2 eps0 r^3).  The energy density integrated over
r >= r0, with the radial measure rotated to i dr, is

    dm = (eps0 / 2 r0) * int_{r0}^inf E(r)^2 * 2 pi^2 r^3 * i dr
       = i e^2 / (8 pi^2 eps0 r0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .scalar_ring import I, ScalarCoeff, sym

__all__ = [
    "QuadratureConfig",
    "QuadratureResult",
    "QuadratureError",
    "field_profile",
    "gauss_flux",
    "self_energy_quadrature",
    "closed_form_delta_m",
    "closed_form_value",
]


class QuadratureError(RuntimeError):
    pass


def field_profile(r: float, r0: float, e_charge: float, eps0: float) -> float:
    """|E(r)| = r0 e / (2 pi^2 eps0 r^3)."""
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    return r0 * e_charge / (2 * math.pi ** 2 * eps0 * r ** 3)


def gauss_flux(r: float, r0: float, e_charge: float, eps0: float) -> float:
    """|E(r)| times the 3-sphere area 2 pi^2 r^3; equals r0 e / eps0 for every r."""
    return field_profile(r, r0, e_charge, eps0) * 2 * math.pi ** 2 * r ** 3


@dataclass(frozen=True)
class QuadratureConfig:
    r0: float = 1.0
    e_charge: float = 1.0
    eps0: float = 1.0
    cutoff_factor: float = 1e6  # upper limit of the numeric part, in units of r0
    epsabs: float = 0.0
    epsrel: float = 1e-13
    limit: int = 200
    target_rel_error: float = 1e-12

    def __post_init__(self):
        if self.r0 <= 0:
            raise ValueError("r0 must be positive")
        if self.cutoff_factor <= 1:
            raise ValueError("cutoff must lie above r0")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float  # absolute, on |value|
    tail: float  # analytic contribution beyond the cutoff (before the i and prefactor)

    @property
    def relative_error_estimate(self) -> float:
        return self.error_estimate / abs(self.value) if self.value else math.inf


def self_energy_quadrature(cfg: QuadratureConfig = QuadratureConfig()) -> QuadratureResult:
    """Numeric dm: adaptive quadrature up to the cutoff plus the analytic r^-3 tail."""
    r0, e, eps0 = cfg.r0, cfg.e_charge, cfg.eps0
    R = cfg.cutoff_factor * r0

    def density(r: float) -> float:
        return field_profile(r, r0, e, eps0) ** 2 * 2 * math.pi ** 2 * r ** 3

    # one subinterval per decade keeps the steep r^-3 profile well resolved
    edges = r0 * np.logspace(0, math.log10(cfg.cutoff_factor), int(math.ceil(math.log10(cfg.cutoff_factor))) + 1)
    edges[-1] = R
    body, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, ev = integrate.quad(density, a, b, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit)
        body += v
        err += ev
    # density = c / r^3 exactly, so int_R^inf = c / (2 R^2)
    c = density(R) * R ** 3
    tail = c / (2 * R ** 2)
    prefactor = eps0 / (2 * r0)
    total = prefactor * (body + tail)
    abs_err = prefactor * err
    if abs_err > cfg.target_rel_error * abs(total):
        raise QuadratureError(
            f"quadrature error estimate {abs_err / abs(total):.2e} (relative) exceeds {cfg.target_rel_error:.0e}"
        )
    return QuadratureResult(complex(0.0, total), abs_err, tail)


def closed_form_delta_m(r0=None, e_charge=None, eps0=None) -> ScalarCoeff:
    """i e^2 / (8 pi^2 eps0 r0) as an exact coefficient; arguments default to symbols."""
    r0 = sym("r0") if r0 is None else ScalarCoeff.coerce(r0)
    e = sym("e") if e_charge is None else ScalarCoeff.coerce(e_charge)
    eps0 = sym("eps0") if eps0 is None else ScalarCoeff.coerce(eps0)
    return I * e ** 2 * ScalarCoeff.coerce("1/8") * sym("pi", -2) * eps0.inverse() * r0.inverse()


def closed_form_value(r0: float, e_charge: float, eps0: float) -> complex:
    return 1j * e_charge ** 2 / (8 * math.pi ** 2 * eps0 * r0)

"""Exact Dirac-basis representation of the Clifford algebra of Minkowski space.

Matrices are 4x4 numpy object arrays whose entries are
:class:`~spreadelectron.scalar_ring.ScalarCoeff`, so products and sums stay
exact and may carry formal symbols.  :meth:`GammaRep.numeric` hands out
complex float copies for the numeric oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .scalar_ring import GaussianRational, ScalarCoeff

__all__ = [
    "METRIC",
    "GammaRep",
    "ConsistencyError",
    "PairCheck",
    "Spinor",
    "build_dirac_rep",
    "check_anticommutators",
    "check_index_roundtrip",
    "check_hermiticity_sandwich",
    "alpha_dot_identity",
    "density",
    "levi_civita",
    "exact",
    "identity",
    "zeros",
    "dagger",
    "trace",
    "is_zero",
    "to_complex",
]

METRIC = np.diag([1, -1, -1, -1])


class ConsistencyError(RuntimeError):
    """A representation failed its construction-time self check."""


# -- exact matrix helpers --------------------------------------------------


def exact(rows) -> np.ndarray:
    """Object array of ScalarCoeff from nested numbers (ints, Fractions, complex ints)."""
    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = ScalarCoeff.coerce(v)
    return out


def zeros(n: int = 4) -> np.ndarray:
    return exact([[0] * n for _ in range(n)])


def identity(n: int = 4) -> np.ndarray:
    return exact([[int(i == j) for j in range(n)] for i in range(n)])


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose; formal symbols are treated as real."""
    out = np.empty(a.shape[::-1], dtype=object)
    for (i, j), v in np.ndenumerate(a):
        out[j, i] = v.conjugate()
    return out


def trace(a: np.ndarray) -> ScalarCoeff:
    total = ScalarCoeff()
    for i in range(a.shape[0]):
        total = total + a[i, i]
    return total


def is_zero(a: np.ndarray) -> bool:
    return all(v.is_zero() for v in a.flat)


def to_complex(a: np.ndarray, bindings=None) -> np.ndarray:
    out = np.empty(a.shape, dtype=complex)
    for idx, v in np.ndenumerate(a):
        out[idx] = v.to_float(bindings)
    return out


def levi_civita(i: int, j: int, k: int) -> int:
    """epsilon_{ijk} for spatial indices 1..3."""
    if len({i, j, k}) < 3:
        return 0
    perm = (i - 1, j - 1, k - 1)
    inversions = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
    return -1 if inversions % 2 else 1


_I = GaussianRational(0, 1)
PAULI = (
    None,
    exact([[0, 1], [1, 0]]),
    exact([[0, -_I], [_I, 0]]),
    exact([[1, 0], [0, -1]]),
)


def _block(a, b, c, d) -> np.ndarray:
    out = np.empty((4, 4), dtype=object)
    out[:2, :2], out[:2, 2:], out[2:, :2], out[2:, 2:] = a, b, c, d
    return out


# -- representation --------------------------------------------------------


@dataclass(frozen=True)
class GammaRep:
    """gamma^mu with upper index; everything else is derived on demand.

    Constructing one directly performs no validation, which is what the
    check functions need in order to report on broken representations.
    Use :func:`build_dirac_rep` for the verified standard basis.
    """

    gamma_upper: tuple
    name: str = "custom"

    @cached_property
    def gamma_lower(self) -> tuple:
        return tuple(self.gamma_upper[mu] * int(METRIC[mu, mu]) for mu in range(4))

    @cached_property
    def beta(self) -> np.ndarray:
        return self.gamma_upper[0]

    @cached_property
    def alpha(self) -> tuple:
        """alpha_k = beta gamma^k, index 0 unused."""
        return (None,) + tuple(self.beta @ self.gamma_upper[k] for k in (1, 2, 3))

    @cached_property
    def sigma_munu(self) -> tuple:
        """sigma^{mu nu} = (i/2)[gamma^mu, gamma^nu]."""
        half_i = ScalarCoeff.coerce(GaussianRational(0, 1) * GaussianRational(1) / 2)
        g = self.gamma_upper
        return tuple(
            tuple((g[a] @ g[b] - g[b] @ g[a]) * half_i for b in range(4)) for a in range(4)
        )

    @cached_property
    def sigma(self) -> tuple:
        """4x4 spin matrices sigma_k = sigma^{ij} for cyclic (i, j, k); index 0 unused."""
        s = self.sigma_munu
        return (None, s[2][3], s[3][1], s[1][2])

    @cached_property
    def gamma5(self) -> np.ndarray:
        g = self.gamma_upper
        return (g[0] @ g[1] @ g[2] @ g[3]) * ScalarCoeff.coerce(_I)

    def numeric(self) -> "NumericRep":
        return NumericRep(tuple(to_complex(g) for g in self.gamma_upper))


@dataclass(frozen=True)
class NumericRep:
    gamma_upper: tuple

    @property
    def beta(self) -> np.ndarray:
        return self.gamma_upper[0]

    def slash(self, a_lower: Sequence[float]) -> np.ndarray:
        """gamma^mu a_mu."""
        return sum(self.gamma_upper[mu] * a_lower[mu] for mu in range(4))


def _dirac_matrices() -> tuple:
    one, zero = identity(2), zeros(2)
    g0 = _block(one, zero, zero, -one)
    gk = tuple(_block(zero, PAULI[k], -PAULI[k], zero) for k in (1, 2, 3))
    return (g0,) + gk


@dataclass(frozen=True)
class PairCheck:
    mu: int
    nu: int
    passed: bool
    detail: str = ""


def check_anticommutators(rep: GammaRep) -> list[PairCheck]:
    """{gamma_mu, gamma_nu} == 2 g_{mu nu} I for all 16 ordered pairs."""
    out = []
    g = rep.gamma_lower
    for mu in range(4):
        for nu in range(4):
            got = g[mu] @ g[nu] + g[nu] @ g[mu]
            want = identity() * (2 * int(METRIC[mu, nu]))
            ok = is_zero(got - want)
            detail = "" if ok else f"expected {2 * int(METRIC[mu, nu])}*I"
            out.append(PairCheck(mu, nu, ok, detail))
    return out


def check_index_roundtrip(rep: GammaRep) -> list[PairCheck]:
    """gamma^0 = gamma_0, gamma^k = -gamma_k, and raising after lowering is the identity."""
    out = []
    for mu in range(4):
        lowered = rep.gamma_lower[mu]
        raised = lowered * int(METRIC[mu, mu])
        sign_ok = is_zero(lowered - rep.gamma_upper[mu] * (1 if mu == 0 else -1))
        out.append(PairCheck(mu, mu, sign_ok and is_zero(raised - rep.gamma_upper[mu])))
    return out


def check_hermiticity_sandwich(rep: GammaRep) -> list[PairCheck]:
    """gamma^0 (gamma^mu)^dagger gamma^0 == gamma^mu."""
    g0 = rep.gamma_upper[0]
    return [
        PairCheck(0, mu, is_zero(g0 @ dagger(rep.gamma_upper[mu]) @ g0 - rep.gamma_upper[mu]))
        for mu in range(4)
    ]


def _check_sigma_cyclic(rep: GammaRep) -> bool:
    # the single-index spin matrix must be diag(pauli_k, pauli_k)
    for k in (1, 2, 3):
        want = _block(PAULI[k], zeros(2), zeros(2), PAULI[k])
        if not is_zero(rep.sigma[k] - want):
            return False
    return True


def build_dirac_rep() -> GammaRep:
    """Standard Dirac basis with beta = diag(1, 1, -1, -1), fully self-checked."""
    rep = GammaRep(_dirac_matrices(), name="dirac")
    failures = [c for c in check_anticommutators(rep) if not c.passed]
    failures += [c for c in check_index_roundtrip(rep) if not c.passed]
    failures += [c for c in check_hermiticity_sandwich(rep) if not c.passed]
    if failures:
        raise ConsistencyError(f"Dirac representation self-check failed: {failures}")
    if not _check_sigma_cyclic(rep):
        raise ConsistencyError("sigma_k != diag(pauli_k, pauli_k)")
    if not is_zero(rep.beta @ rep.beta - identity()):
        raise ConsistencyError("beta^2 != I")
    return rep


DIRAC = None


def dirac() -> GammaRep:
    """Cached verified Dirac representation."""
    global DIRAC
    if DIRAC is None:
        DIRAC = build_dirac_rep()
    return DIRAC


# -- the (alpha.a)(alpha.b) identity -------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    lhs: np.ndarray
    rhs: np.ndarray
    difference: np.ndarray

    @property
    def holds(self) -> bool:
        return is_zero(self.difference)


def alpha_dot_identity(a: Sequence, b: Sequence, rep: GammaRep | None = None) -> IdentityCheck:
    """Both sides of (alpha.a)(alpha.b) = a.b + i sigma.(a x b) as exact matrices.

    Components may be numbers or ScalarCoeff (they commute with the matrices).
    """
    rep = rep or dirac()
    a = [ScalarCoeff.coerce(x) for x in a]
    b = [ScalarCoeff.coerce(x) for x in b]
    adot = sum((rep.alpha[k + 1] * a[k] for k in range(3)), zeros())
    bdot = sum((rep.alpha[k + 1] * b[k] for k in range(3)), zeros())
    lhs = adot @ bdot
    dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    cross = [
        sum(
            (a[i - 1] * b[j - 1] * levi_civita(k, i, j) for i in (1, 2, 3) for j in (1, 2, 3)),
            ScalarCoeff(),
        )
        for k in (1, 2, 3)
    ]
    rhs = identity() * dot
    for k in (1, 2, 3):
        rhs = rhs + rep.sigma[k] * (cross[k - 1] * ScalarCoeff.coerce(_I))
    return IdentityCheck(lhs, rhs, lhs - rhs)


# -- spinors ---------------------------------------------------------------


@dataclass(frozen=True)
class Spinor:
    components: tuple = field()

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("a Dirac spinor has four components")

    def column(self) -> np.ndarray:
        return np.asarray(self.components, dtype=complex)

    @property
    def adjoint(self) -> np.ndarray:
        """Psi-bar = Psi^dagger gamma^0, recomputed on every access."""
        return self.column().conj() @ dirac().numeric().beta


def density(psi: Spinor | Sequence[complex]) -> float:
    """rho = Psi^dagger gamma^0 Psi (real for any Psi since gamma^0 is hermitian)."""
    if not isinstance(psi, Spinor):
        psi = Spinor(tuple(psi))
    return float(np.real(psi.adjoint @ psi.column()))

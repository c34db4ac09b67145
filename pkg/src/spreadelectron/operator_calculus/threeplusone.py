"""3+1 split notation on top of the covariant atoms.

beta = gamma^0, alpha_k = beta gamma^k, sigma_k = (i/2)[gamma^i, gamma^j]
for cyclic (i, j, k), A_mu = (phi, -A).  These constructors return normal-form
OpExpr built from the covariant generators, so the two notations share one
canonical form and every translation identity is checked by plain equality.

Vectors are 3-tuples of OpExpr indexed 0..2 for components 1..3.  ``dot`` and
``cross`` keep operator order (left factor first).
"""

from __future__ import annotations

from ..gamma_algebra import levi_civita
from ..scalar_ring import GaussianRational, ScalarCoeff, sym
from .expr import OpExpr, deriv, field, gamma

__all__ = [
    "beta", "alpha", "sigma", "gamma5", "phi", "A_vec", "E", "B", "E_potential", "B_potential",
    "grad", "dt", "p", "pi_kin", "dot", "cross", "vec", "alpha_dot", "sigma_dot", "laplacian",
    "slash", "A_cov",
]

I = ScalarCoeff.coerce(GaussianRational(0, 1))


def beta() -> OpExpr:
    return gamma(0)


def alpha(k: int) -> OpExpr:
    return beta() * gamma(k)


def sigma(k: int) -> OpExpr:
    i, j = {1: (2, 3), 2: (3, 1), 3: (1, 2)}[k]
    return (gamma(i) * gamma(j) - gamma(j) * gamma(i)) * ScalarCoeff.coerce(GaussianRational(0, "1/2"))


def gamma5() -> OpExpr:
    return gamma(0) * gamma(1) * gamma(2) * gamma(3) * I


def A_cov(mu: int) -> OpExpr:
    """Covariant potential A_mu."""
    return field("A", mu)


def phi() -> OpExpr:
    return field("A", 0)


def A_vec(k: int) -> OpExpr:
    """Vector-potential component A^k = -A_k."""
    return -field("A", k)


def E(k: int, derivs: tuple = ()) -> OpExpr:
    """Electric field component as an independent field atom."""
    return field("E", k, derivs)


def B(k: int, derivs: tuple = ()) -> OpExpr:
    return field("B", k, derivs)


def E_potential(k: int) -> OpExpr:
    """E_k = -d_k phi - d_t A^k in terms of potentials."""
    return -field("A", 0, (k,)) + field("A", k, (0,))


def E_static(k: int) -> OpExpr:
    """E_k = -d_k phi."""
    return -field("A", 0, (k,))


def B_potential(k: int) -> OpExpr:
    """(curl A)_k."""
    out = OpExpr()
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            s = levi_civita(k, i, j)
            if s:
                out = out - field("A", j, (i,)) * s
    return out


def grad(k: int) -> OpExpr:
    return deriv(k)


def dt() -> OpExpr:
    return deriv(0)


def p(k: int) -> OpExpr:
    """Momentum component -i d_k."""
    return deriv(k) * (-I)


def pi_kin(k: int, charge=None) -> OpExpr:
    """Kinetic momentum p_k - e A^k."""
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    return p(k) - A_vec(k) * e


def vec(fn) -> tuple:
    return tuple(fn(k) for k in (1, 2, 3))


def dot(u, v) -> OpExpr:
    out = OpExpr()
    for a, b in zip(u, v):
        out = out + a * b
    return out


def cross(u, v) -> tuple:
    comps = []
    for k in (1, 2, 3):
        c = OpExpr()
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                s = levi_civita(k, i, j)
                if s:
                    c = c + (u[i - 1] * v[j - 1]) * s
        comps.append(c)
    return tuple(comps)


def alpha_dot(v) -> OpExpr:
    return dot(vec(alpha), v)


def sigma_dot(v) -> OpExpr:
    return dot(vec(sigma), v)


def laplacian_phi() -> OpExpr:
    return sum((field("A", 0, (k, k)) for k in (1, 2, 3)), OpExpr())


laplacian = laplacian_phi


def slash(components) -> OpExpr:
    """gamma^mu X_mu for four lower-index components."""
    out = OpExpr()
    for mu in range(4):
        out = out + gamma(mu) * components[mu]
    return out

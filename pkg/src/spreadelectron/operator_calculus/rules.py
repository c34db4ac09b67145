"""Toggleable rewrite rules and ``normalize``.

Products are already in normal form (see :mod:`.expr`); the rules here
encode physical assumptions as atom-level or term-level rewrites:

static          d_0 applied to any field -> 0
lorenz          d^mu A_mu = 0, eliminating d_1 A_1 in favour of the others
curl_free_E     d_i E_j == d_j E_i (spatial), i.e. curl E = 0
em_potentials   E_k -> -d_k phi - d_0 A^k,  B_k -> (curl A)_k
grad_phi_as_E   d_k phi -> -E_k (static fields only), the reverse direction
                for the scalar potential so results read in terms of E
weak_field      drop terms with at least ``weak_field`` field atoms
truncation      drop terms whose formal-symbol degree exceeds a bound

Every atom rule is a linear substitution compatible with the product rule,
so applying rules after the product equals applying them before.  The rule
set is confluent; ``normalize(..., order_seed=k)`` shuffles the rule order
so tests can check that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable

from ..scalar_ring import GaussianRational, ScalarCoeff
from ..gamma_algebra import levi_civita
from .expr import FieldAtom, OpExpr, TermKey, _add_into

__all__ = ["RewriteRuleSet", "RewriteError", "Audit", "normalize", "NO_RULES"]


class RewriteError(RuntimeError):
    pass


@dataclass
class Audit:
    """Mutable log of every term dropped or assumption fired."""

    entries: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    def note(self, rule: str, detail: str = "", n: int = 1) -> None:
        self.counts[rule] = self.counts.get(rule, 0) + n
        if detail:
            self.entries.append((rule, detail))

    def merge(self, other: "Audit") -> None:
        for k, v in other.counts.items():
            self.counts[k] = self.counts.get(k, 0) + v
        self.entries.extend(other.entries)


@dataclass(frozen=True)
class RewriteRuleSet:
    static: bool = False
    lorenz: bool = False
    curl_free_E: bool = False
    em_potentials: bool = False
    grad_phi_as_E: bool = False
    weak_field: int | None = None
    # symbol -> maximum allowed degree (use a negative symbol power, e.g.
    # {"m": -2} keeps at most 1/m^2 by bounding -degree via min_degree).
    max_degree: tuple = ()
    min_degree: tuple = ()

    def __post_init__(self):
        # curl E = -d_t curl A in potentials, so the two only agree for static fields
        if self.curl_free_E and self.em_potentials and not self.static:
            raise ValueError("curl_free_E with em_potentials requires static")
        if self.grad_phi_as_E and not self.static:
            raise ValueError("grad_phi_as_E requires static")
        if self.grad_phi_as_E and self.em_potentials:
            raise ValueError("grad_phi_as_E and em_potentials rewrite in opposite directions")

    def with_(self, **kw) -> "RewriteRuleSet":
        return replace(self, **kw)

    def enabled(self) -> list[str]:
        names = [n for n in ("static", "lorenz", "curl_free_E", "em_potentials", "grad_phi_as_E") if getattr(self, n)]
        if self.weak_field is not None:
            names.append(f"weak_field>={self.weak_field}")
        names += [f"max_deg[{s}]={k}" for s, k in self.max_degree]
        names += [f"min_deg[{s}]={k}" for s, k in self.min_degree]
        return names


NO_RULES = RewriteRuleSet()

AtomMap = dict  # FieldAtom -> GaussianRational


def _rule_static(a: FieldAtom) -> AtomMap | None:
    if 0 in a.derivs:
        return {}
    return None


def _rule_lorenz(a: FieldAtom) -> AtomMap | None:
    # d^mu A_mu = d_0 A_0 - d_1 A_1 - d_2 A_2 - d_3 A_3 = 0
    if a.name != "A" or a.index != 1 or 1 not in a.derivs:
        return None
    rest = list(a.derivs)
    rest.remove(1)
    rest = tuple(rest)
    one = GaussianRational(1)
    return {
        FieldAtom("A", 0, tuple(sorted(rest + (0,)))): one,
        FieldAtom("A", 2, tuple(sorted(rest + (2,)))): -one,
        FieldAtom("A", 3, tuple(sorted(rest + (3,)))): -one,
    }


def _rule_curl_free(a: FieldAtom) -> AtomMap | None:
    # d_i E_j = d_j E_i: carry the smallest spatial index as the component
    if a.name != "E":
        return None
    spatial = [d for d in a.derivs if d != 0]
    if not spatial:
        return None
    low = min(spatial)
    if low >= a.index:
        return None
    ds = list(a.derivs)
    ds.remove(low)
    ds.append(a.index)
    return {FieldAtom("E", low, tuple(sorted(ds))): GaussianRational(1)}


def _rule_em_potentials(a: FieldAtom) -> AtomMap | None:
    one = GaussianRational(1)
    if a.name == "E":
        # E_k = -d_k phi - d_0 A^k = -d_k A_0 + d_0 A_k
        k = a.index
        return {
            FieldAtom("A", 0, tuple(sorted(a.derivs + (k,)))): -one,
            FieldAtom("A", k, tuple(sorted(a.derivs + (0,)))): one,
        }
    if a.name == "B":
        # B_k = eps_kij d_i A^j = -eps_kij d_i A_j
        out: dict = {}
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                s = levi_civita(a.index, i, j)
                if s:
                    at = FieldAtom("A", j, tuple(sorted(a.derivs + (i,))))
                    out[at] = out.get(at, GaussianRational(0)) - s
        return out
    return None


def _rule_grad_phi(a: FieldAtom) -> AtomMap | None:
    # static: E_k = -d_k phi.  The component is the smallest spatial index so
    # the result is already canonical for curl_free_E.
    if a.name != "A" or a.index != 0 or 0 in a.derivs:
        return None
    spatial = [d for d in a.derivs if d != 0]
    if not spatial:
        return None
    k = min(spatial)
    ds = list(a.derivs)
    ds.remove(k)
    return {FieldAtom("E", k, tuple(ds)): -GaussianRational(1)}


_ATOM_RULES: dict[str, Callable[[FieldAtom], AtomMap | None]] = {
    "static": _rule_static,
    "lorenz": _rule_lorenz,
    "curl_free_E": _rule_curl_free,
    "em_potentials": _rule_em_potentials,
    "grad_phi_as_E": _rule_grad_phi,
}


def _rewrite_atom(a: FieldAtom, active: list, rng, budget: list, audit: Audit | None) -> dict:
    """Fully rewrite one atom into a combination of irreducible atoms."""
    names = list(active)
    if rng is not None:
        rng.shuffle(names)
    for name in names:
        res = _ATOM_RULES[name](a)
        if res is None:
            continue
        budget[0] -= 1
        if budget[0] < 0:
            raise RewriteError(f"rewrite budget exhausted at atom {a}")
        if audit is not None:
            audit.note(name)
        out: dict = {}
        for atom, c in res.items():
            for atom2, c2 in _rewrite_atom(atom, active, rng, budget, audit).items():
                v = out.get(atom2, GaussianRational(0)) + c * c2
                if v.is_zero():
                    out.pop(atom2, None)
                else:
                    out[atom2] = v
        return out
    return {a: GaussianRational(1)}


def normalize(
    e: OpExpr,
    rules: RewriteRuleSet = NO_RULES,
    audit: Audit | None = None,
    order_seed: int | None = None,
    step_budget: int = 1_000_000,
) -> OpExpr:
    """Canonical form of ``e`` under ``rules``.  Idempotent."""
    active = [n for n in _ATOM_RULES if getattr(rules, n)]
    rng = random.Random(order_seed) if order_seed is not None else None
    budget = [step_budget]
    acc: dict = {}
    cache: dict = {}
    for key, c in e.terms.items():
        expansions = [((), ScalarCoeff.coerce(1))]
        for a in key.fields:
            if active:
                if a not in cache:
                    cache[a] = _rewrite_atom(a, active, rng, budget, audit)
                options = cache[a]
            else:
                options = {a: GaussianRational(1)}
            nxt = []
            for fs, cc in expansions:
                for atom, ca in options.items():
                    nxt.append((fs + (atom,), cc * ca))
            expansions = nxt
        for fs, cc in expansions:
            _add_into(acc, TermKey(key.blade, tuple(sorted(fs)), key.derivs), c * cc)
    out = OpExpr()
    out.terms = acc
    return _term_rules(out, rules, audit)


def _term_rules(e: OpExpr, rules: RewriteRuleSet, audit: Audit | None) -> OpExpr:
    if rules.weak_field is None and not rules.max_degree and not rules.min_degree:
        return e
    acc: dict = {}
    for key, c in e.terms.items():
        if rules.weak_field is not None and len(key.fields) >= rules.weak_field:
            if audit is not None:
                audit.note("weak_field", f"dropped {len(key.fields)}-field term")
            continue
        kept = {}
        for mono, g in c.parts.items():
            drop = any(mono.degree(s) > k for s, k in rules.max_degree) or any(
                mono.degree(s) < k for s, k in rules.min_degree
            )
            if drop:
                if audit is not None:
                    audit.note("truncation")
            else:
                kept[mono] = g
        if kept:
            acc[key] = ScalarCoeff(kept)
    out = OpExpr()
    out.terms = acc
    return out

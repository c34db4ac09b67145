"""Command-line entry point and report documents.

Every subcommand builds a :class:`ReportDocument`, which is rendered as
deterministic text or as a single JSON document validated against
:data:`REPORT_SCHEMA`.  Exit status: 0 when every check passes, 1 when a
check fails, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .scalar_ring import ScalarCoeff
from .operator_calculus import dumps

__all__ = [
    "OUTPUT_DIR_ENV",
    "REPORT_SCHEMA",
    "SCHEMA_ID",
    "RunConfig",
    "ReportDocument",
    "emit",
    "run",
    "main",
    "parse_matrix",
    "series_line",
]

OUTPUT_DIR_ENV = "SPREADELECTRON_OUTPUT_DIR"
SCHEMA_ID = "spreadelectron.report/1"

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2

_RATIONAL = {
    "type": "object",
    "properties": {"num": {"type": "string", "pattern": "^-?[0-9]+$"}, "den": {"type": "string", "pattern": "^[1-9][0-9]*$"}},
    "required": ["num", "den"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": SCHEMA_ID,
    "type": "object",
    "required": ["schema", "tool", "command", "config", "status", "checks", "contributions", "series", "comparisons", "audit", "trace", "values"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "tool": {
            "type": "object",
            "properties": {"name": {"type": "string"}, "version": {"type": "string"}},
            "required": ["name", "version"],
            "additionalProperties": False,
        },
        "command": {"type": "string"},
        "config": {"type": "object"},
        "status": {"enum": ["pass", "fail"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"name": {"type": "string"}, "passed": {"type": "boolean"}, "detail": {"type": "string"}},
                "required": ["name", "passed", "detail"],
                "additionalProperties": False,
            },
        },
        "contributions": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "label": {"type": "string"},
                    "coefficient": {"type": "string"},
                    "shift": {"type": "string"},
                    "alpha_power": {"type": ["integer", "null"]},
                    "value": {"oneOf": [_RATIONAL, {"type": "null"}]},
                    "float": {"type": ["number", "null"]},
                },
                "required": ["label", "coefficient", "shift", "alpha_power", "value", "float"],
                "additionalProperties": False,
            },
        },
        "series": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "label": {"type": "string"},
                    "power": {"type": "integer"},
                    "num": _RATIONAL["properties"]["num"],
                    "den": _RATIONAL["properties"]["den"],
                    "float": {"type": "number"},
                },
                "required": ["label", "power", "num", "den", "float"],
                "additionalProperties": False,
            },
        },
        "comparisons": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "label": {"type": "string"},
                    "this_work": {"type": "number"},
                    "reference": {"type": "number"},
                    "gap": {"type": "number"},
                },
                "required": ["label", "this_work", "reference", "gap"],
                "additionalProperties": False,
            },
        },
        "audit": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"rule": {"type": "string"}, "count": {"type": "integer"}, "details": {"type": "array", "items": {"type": "string"}}},
                "required": ["rule", "count", "details"],
                "additionalProperties": False,
            },
        },
        "trace": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"label": {"type": "string"}, "expression": {"type": "string"}},
                "required": ["label", "expression"],
                "additionalProperties": False,
            },
        },
        "values": {"type": "object", "additionalProperties": {"type": ["number", "string"]}},
    },
}


# -- configuration and documents ------------------------------------------------------


@dataclass
class RunConfig:
    subcommand: str
    particle: str = "electron"
    order: int = 2
    vacuum_polarization: bool = False
    format: str = "text"
    output: str | None = None
    disabled_assumptions: tuple = ()
    averaging: str = "radial"
    with_v1: bool = False
    matrix: str | None = None
    samples: int = 100
    seed: int = 0
    r0: float = 1.0
    e_charge: float = 1.0
    eps0: float = 1.0

    def echo(self) -> dict:
        keep = {
            "moment": ("particle", "order", "vacuum_polarization", "averaging"),
            "fw": ("with_v1", "disabled_assumptions"),
            "derive wave-equation": ("order",),
            "check identities": ("samples", "seed"),
            "selfenergy": ("r0", "e_charge", "eps0"),
            "quantize": ("matrix",),
        }.get(self.subcommand, ())
        out = {}
        for k in keep:
            v = getattr(self, k)
            out[k] = list(v) if isinstance(v, tuple) else v
        return out


@dataclass
class ReportDocument:
    command: str
    config: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)  # (name, passed, detail)
    contributions: list = field(default_factory=list)  # dicts, see REPORT_SCHEMA
    series: dict = field(default_factory=dict)  # {power: Fraction}
    comparisons: list = field(default_factory=list)  # (label, this work, reference, gap)
    audit: list = field(default_factory=list)  # (rule, count, [details])
    trace: list = field(default_factory=list)  # (label, expression text)
    values: dict = field(default_factory=dict)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(passed), detail))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def to_json(self) -> dict:
        doc = {
            "schema": SCHEMA_ID,
            "tool": {"name": "spreadelectron", "version": __version__},
            "command": self.command,
            "config": self.config,
            "status": "pass" if self.passed else "fail",
            "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in self.checks],
            "contributions": self.contributions,
            "series": [
                {"label": _power_label(k), "power": k, **_rational(v), "float": float(v)}
                for k, v in sorted(self.series.items())
            ],
            "comparisons": [
                {"label": l, "this_work": a, "reference": b, "gap": g} for l, a, b, g in self.comparisons
            ],
            "audit": [{"rule": r, "count": n, "details": list(d)} for r, n, d in self.audit],
            "trace": [{"label": l, "expression": x} for l, x in self.trace],
            "values": self.values,
        }
        jsonschema.validate(doc, REPORT_SCHEMA)
        return doc

    def to_text(self) -> str:
        lines = [f"spreadelectron {__version__}: {self.command}"]
        for k, v in self.config.items():
            lines.append(f"  {k}: {_fmt_value(v)}")
        if self.checks:
            lines.append("")
            lines.append("checks")
            width = max(len(n) for n, _, _ in self.checks)
            for n, ok, d in self.checks:
                lines.append((f"  {'PASS' if ok else 'FAIL'}  {n.ljust(width)}" + (f"  {d}" if d else "")).rstrip())
        if self.values:
            lines.append("")
            lines.append("values")
            width = max(len(k) for k in self.values)
            for k, v in self.values.items():
                lines.append(f"  {k.ljust(width)}  {_fmt_value(v)}")
        if self.trace:
            for label, expr in self.trace:
                lines.append("")
                lines.append(f"trace: {label}")
                lines.extend("  " + x for x in expr.splitlines())
        if self.audit:
            lines.append("")
            lines.append("audit")
            width = max(len(r) for r, _, _ in self.audit)
            for r, n, _ in self.audit:
                lines.append(f"  {r.ljust(width)}  {n}")
        if self.contributions:
            lines.append("")
            lines.append("contributions to (g-2)/2")
            width = max(len(c["label"]) for c in self.contributions)
            cw = max(len(c["coefficient"]) for c in self.contributions)
            for c in self.contributions:
                lines.append(f"  {c['label'].ljust(width)}  {c['coefficient'].ljust(cw)}  {c['shift']}")
        if self.comparisons:
            lines.append("")
            lines.append("comparison (this work, reference, gap)")
            for l, a, b, g in self.comparisons:
                lines.append(f"  {l}: {_g6(a)}, {_g6(b)}, {_g6(g)}")
        if self.series:
            lines.append("")
            lines.append(series_line(self.series))
        lines.append("")
        lines.append(f"status: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _rational(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _power_label(k: int) -> str:
    return f"alpha^{k}"


def _g6(x) -> str:
    return f"{x:.6g}"


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return _g6(v)
    if isinstance(v, (list, tuple)):
        return ", ".join(str(x) for x in v) or "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


_SUPER = {1: "", 2: "²", 3: "³"}


def series_line(series: dict) -> str:
    """(g−2)/2 = 1/2(α/π) − 1/3(α/π)²"""
    parts = []
    for k, v in sorted(series.items()):
        mag = f"{abs(v)}(α/π){_SUPER.get(k, f'^{k}')}"
        if not parts:
            parts.append(mag if v > 0 else f"−{mag}")
        else:
            parts.append(f"{'+' if v > 0 else '−'} {mag}")
    return "(g−2)/2 = " + (" ".join(parts) if parts else "0")


def emit(doc: ReportDocument, fmt: str = "text", output: str | os.PathLike | None = None) -> str:
    """Serialize ``doc``; write it to ``output`` when given."""
    if fmt == "json":
        text = json.dumps(doc.to_json(), indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    elif fmt == "text":
        text = doc.to_text()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if output is not None:
        Path(output).write_text(text, encoding="utf-8")
    return text


# -- subcommands ----------------------------------------------------------------------


def _check_clifford(cfg: RunConfig, doc: ReportDocument) -> None:
    from .gamma_algebra import (
        build_dirac_rep,
        check_anticommutators,
        check_hermiticity_sandwich,
        check_index_roundtrip,
    )

    rep = build_dirac_rep()
    anti = check_anticommutators(rep)
    doc.check("anticommutators {gamma_mu, gamma_nu} = 2 g_mu_nu", all(c.passed for c in anti),
              f"{sum(c.passed for c in anti)}/{len(anti)}")
    rt = check_index_roundtrip(rep)
    doc.check("index raising/lowering round trip", all(c.passed for c in rt), f"{sum(c.passed for c in rt)}/{len(rt)}")
    hs = check_hermiticity_sandwich(rep)
    doc.check("gamma^0 (gamma^mu)^dagger gamma^0 = gamma^mu", all(c.passed for c in hs), f"{sum(c.passed for c in hs)}/{len(hs)}")


def _random_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 13)))


def _check_identities(cfg: RunConfig, doc: ReportDocument) -> None:
    from .dirac_derivation import check_pseudo_unitarity, hermiticity_condition, slash_A
    from .gamma_algebra import alpha_dot_identity, dirac
    from .scalar_ring import I, sym

    rng = np.random.default_rng(cfg.seed)
    ok = 0
    for _ in range(cfg.samples):
        a = [_random_rational(rng) for _ in range(3)]
        b = [_random_rational(rng) for _ in range(3)]
        ok += alpha_dot_identity(a, b).holds
    doc.check("(alpha.a)(alpha.b) = a.b + i sigma.(a x b)", ok == cfg.samples, f"{ok}/{cfg.samples} rational pairs")

    num = dirac().numeric()
    worst = 0.0
    for _ in range(20):
        A = rng.normal(size=4)
        M = -sum(num.gamma_upper[mu] * A[mu] for mu in range(4))
        worst = max(worst, check_pseudo_unitarity(M, float(rng.uniform(0.1, 2.0))))
    doc.check("pseudo-unitarity of exp(i ds M), M = -e gamma.A", worst <= 1e-10, f"max residual {_g6(worst)}")
    bad = check_pseudo_unitarity(1j * np.eye(4), 1.0)
    doc.check("counterexample M = iI violates pseudo-unitarity", bad > 0.1, f"residual {_g6(bad)}")

    herm = hermiticity_condition(slash_A() * (-sym("e")))
    doc.check("gamma^0 M hermitian for M = -e gamma.A", herm.holds)
    anti = hermiticity_condition(ScalarCoeff.coerce(I))
    doc.check("gamma^0 M not hermitian for M = iI", not anti.holds, f"witness {anti.witness[:2]}" if anti.witness else "")


def _derive(cfg: RunConfig, doc: ReportDocument) -> None:
    from .dirac_derivation import derive_wave_equation, v1_reference, v2_reference
    from .scalar_ring import sym

    res = derive_wave_equation(cfg.order)
    ref = {1: v1_reference, 2: v2_reference}[cfg.order]()
    doc.check("mass term is m", res.mass_term == sym("m"), str(res.mass_term))
    for n in range(1, cfg.order + 1):
        vn = res.V(n)
        if n == cfg.order:
            doc.check(f"V_{n} equals the closed form", vn == ref)
        doc.trace.append((f"V_{n}", dumps(vn)))
    doc.audit.extend(_audit_rows(res.audit))


def _fw(cfg: RunConfig, doc: ReportDocument) -> None:
    from .fw_engine import (
        AssumptionSet,
        assembled_reference,
        curl_E_term,
        dirac_hamiltonian,
        fw_baseline_reference,
        fw_transform,
        magnetic_coefficient,
        pauli_reduce,
        v1_alteration,
        v1_residual_reference,
    )
    from .scalar_ring import sym

    base = pauli_reduce(fw_transform(dirac_hamiltonian()))
    doc.check("FW Hamiltonian equals the Pauli form", base == fw_baseline_reference())
    c = magnetic_coefficient(base)
    unit = sym("e") * sym("m", -1) * ScalarCoeff.coerce(Fraction(1, 2))
    doc.check("beta sigma.B coefficient is -e/2m (g = 2)", c == -unit, str(c))
    doc.trace.append(("H_FW", dumps(base)))
    if not cfg.with_v1:
        return
    assumptions = AssumptionSet().with_(**{name: False for name in cfg.disabled_assumptions})
    alt = v1_alteration(assumptions)
    want = v1_residual_reference()
    if not assumptions.curl_free_E:
        want = want + curl_E_term()
    doc.check("assembled V_1 alteration equals the closed form", alt.assembled == assembled_reference(assumptions))
    doc.check("V_1 residual equals the closed form", alt.residual == want)
    doc.trace.append(("V_1 alteration", dumps(alt.assembled)))
    doc.trace.append(("V_1 residual", dumps(alt.residual)))
    doc.audit.extend(_audit_rows(alt.audit))


def _moment(cfg: RunConfig, doc: ReportDocument) -> None:
    from .moment_pipeline import alpha_series, moment_report, particle

    rep = moment_report(particle(cfg.particle), cfg.order, cfg.vacuum_polarization, averaging=cfg.averaging)
    for c in rep.contributions:
        try:
            s = alpha_series(c.g_shift)
        except ValueError:
            s = None
        row = {
            "label": c.label,
            "coefficient": str(c.coefficient),
            "shift": str(c.g_shift),
            "alpha_power": None,
            "value": None,
            "float": None,
        }
        if s is not None and len(s) == 1:
            (k, v), = s.items()
            row.update(alpha_power=k, value=_rational(v), float=float(v))
        elif s == {}:
            row.update(alpha_power=0, value=_rational(Fraction(0)), float=0.0)
        doc.contributions.append(row)
    doc.series = rep.series()
    doc.comparisons = [tuple(r) for r in rep.comparisons()]
    doc.audit.extend(_audit_rows(rep.audit))
    total = sum((c.g_shift for c in rep.contributions), ScalarCoeff())
    doc.check("total equals the sum of contributions", total == rep.total)
    if cfg.order == 2:
        by_label = {c.label: c.g_shift for c in rep.contributions}
        pair = by_label["second order: (a) sigma.B term"] + by_label["second order: vector-potential rescaling"]
        doc.check("(a) sigma.B term cancels the vector-potential rescaling", pair.is_zero(), str(pair))
    if 2 in doc.series:
        doc.values["alpha^2 coefficient"] = float(doc.series[2])


def _selfenergy(cfg: RunConfig, doc: ReportDocument) -> None:
    from .selfenergy import QuadratureConfig, closed_form_value, self_energy_quadrature

    q = self_energy_quadrature(QuadratureConfig(r0=cfg.r0, e_charge=cfg.e_charge, eps0=cfg.eps0))
    exact = closed_form_value(cfg.r0, cfg.e_charge, cfg.eps0)
    rel = abs(q.value - exact) / abs(exact)
    doc.values["quadrature (imaginary part)"] = q.value.imag
    doc.values["closed form (imaginary part)"] = exact.imag
    doc.values["relative error"] = rel
    doc.values["error estimate"] = q.relative_error_estimate
    doc.check("quadrature matches i e^2/(8 pi^2 eps0 r0)", rel <= 1e-10, _g6(rel))
    doc.check("result is pure imaginary", abs(q.value.real) <= 1e-14 * abs(q.value))


def parse_matrix(text: str) -> np.ndarray:
    """Four rows of four complex numbers written a+bi, whitespace separated."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError(f"expected 4 rows of 4 entries, got {[len(r) for r in rows]}")
    out = np.zeros((4, 4), dtype=complex)
    for i, r in enumerate(rows):
        for j, tok in enumerate(r):
            t = tok.replace("i", "j")
            if "j" in t and t.rstrip("j") in ("", "+", "-"):
                t = t[:-1] + "1j"
            try:
                out[i, j] = complex(t)
            except ValueError:
                raise ValueError(f"row {i + 1}, column {j + 1}: cannot read {tok!r} as a complex number") from None
    return out


def _quantize(cfg: RunConfig, doc: ReportDocument) -> None:
    from .dirac_derivation import quantization_kernel_check

    Z = parse_matrix(Path(cfg.matrix).read_text(encoding="utf-8"))
    rep = quantization_kernel_check(Z)
    for k, e in enumerate(rep.entries):
        lam = e.eigenvalue
        doc.values[f"eigenvalue {k + 1}"] = f"{_g6(lam.real)}{'+' if lam.imag >= 0 else '-'}{_g6(abs(lam.imag))}i" + (
            f"  (i lambda = 2 pi * {e.n})" if e.satisfies_2npi else ""
        )
    doc.values["flagged"] = rep.flagged
    doc.values["kernel dimension of exp(Z) - 1"] = rep.kernel_dim
    doc.check("kernel of exp(Z) - 1 is spanned by the flagged eigenvectors", rep.kernel_matches)


def _audit_rows(audit) -> list:
    details: dict = {}
    for rule, d in audit.entries:
        details.setdefault(rule, []).append(d)
    return [(rule, n, details.get(rule, [])) for rule, n in audit.counts.items()]


_HANDLERS = {
    "check clifford": _check_clifford,
    "check identities": _check_identities,
    "derive wave-equation": _derive,
    "fw": _fw,
    "moment": _moment,
    "selfenergy": _selfenergy,
    "quantize": _quantize,
}


def run(cfg: RunConfig) -> tuple[int, ReportDocument]:
    doc = ReportDocument(cfg.subcommand, cfg.echo())
    try:
        _HANDLERS[cfg.subcommand](cfg, doc)
    except (OSError, ValueError) as exc:
        doc.check("input", False, str(exc))
        return EXIT_USAGE, doc
    except Exception as exc:  # a failed internal consistency check
        doc.check(type(exc).__name__, False, str(exc))
        return EXIT_CHECK, doc
    return (EXIT_OK if doc.passed else EXIT_CHECK), doc


# -- argument parsing ------------------------------------------------------------------


_ASSUMPTIONS = ("static", "lorenz_gauge", "curl_free_E", "nonrelativistic", "commuting_phi")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spreadelectron", description="Spread-electron g-2 derivations and checks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help=f"output file (default: stdout, or ${OUTPUT_DIR_ENV}/<command>.<ext>)")
    sub = p.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="algebraic check suites")
    chk_sub = chk.add_subparsers(dest="suite", required=True)
    chk_sub.add_parser("clifford", parents=[common])
    ids = chk_sub.add_parser("identities", parents=[common])
    ids.add_argument("--samples", type=int, default=100)
    ids.add_argument("--seed", type=int, default=0)

    der = sub.add_parser("derive", help="derivations")
    der_sub = der.add_subparsers(dest="what", required=True)
    we = der_sub.add_parser("wave-equation", parents=[common])
    we.add_argument("--order", type=int, choices=(1, 2), default=1)

    fw = sub.add_parser("fw", parents=[common], help="FW transformation and the V_1 residual")
    fw.add_argument("--with-v1", action="store_true")
    fw.add_argument("--disable", action="append", choices=_ASSUMPTIONS, default=[], metavar="ASSUMPTION",
                    help=f"turn off an assumption ({', '.join(_ASSUMPTIONS)})")

    mo = sub.add_parser("moment", parents=[common], help="anomalous magnetic moment")
    mo.add_argument("--particle", choices=("electron", "muon"), default="electron")
    mo.add_argument("--order", type=int, choices=(1, 2), default=2)
    mo.add_argument("--vacuum-polarization", action="store_true")
    mo.add_argument("--averaging", choices=("radial", "isotropic"), default="radial")

    se = sub.add_parser("selfenergy", parents=[common], help="self-energy quadrature")
    se.add_argument("--r0", type=float, default=1.0)
    se.add_argument("--e", dest="e_charge", type=float, default=1.0)
    se.add_argument("--eps0", type=float, default=1.0)

    qu = sub.add_parser("quantize", parents=[common], help="spectral check exp(Z) = 1")
    qu.add_argument("--matrix", required=True)
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    name = {"check": f"check {getattr(ns, 'suite', '')}", "derive": f"derive {getattr(ns, 'what', '')}"}.get(ns.command, ns.command)
    cfg = RunConfig(name, format=ns.format, output=ns.output)
    for attr in ("particle", "order", "vacuum_polarization", "averaging", "with_v1", "matrix", "samples", "seed", "r0", "e_charge", "eps0"):
        if hasattr(ns, attr):
            setattr(cfg, attr, getattr(ns, attr))
    if hasattr(ns, "disable"):
        cfg.disabled_assumptions = tuple(ns.disable)
    return cfg


def _output_path(cfg: RunConfig) -> Path | None:
    if cfg.output:
        return Path(cfg.output)
    d = os.environ.get(OUTPUT_DIR_ENV)
    if d:
        return Path(d) / f"{cfg.subcommand.replace(' ', '-')}.{'json' if cfg.format == 'json' else 'txt'}"
    return None


def main(argv: list[str] | None = None) -> int:
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = _config(ns)
    status, doc = run(cfg)
    out = _output_path(cfg)
    try:
        text = emit(doc, cfg.format, out)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if out is None:
        sys.stdout.write(text)
    if status != EXIT_OK:
        failed = [f"{n}: {d}" if d else n for n, ok, d in doc.checks if not ok]
        print("failed: " + "; ".join(failed), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

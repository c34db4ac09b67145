"""Engine output diffed byte-for-byte against the shipped golden traces."""

from importlib import resources

import pytest

from spreadelectron.cli_report import main
from spreadelectron.dirac_derivation import derive_wave_equation
from spreadelectron.fw_engine import (
    assembled_reference,
    dirac_hamiltonian,
    fw_transform,
    pauli_reduce,
    v1_alteration,
    v1_residual_reference,
)
from spreadelectron.operator_calculus import dumps, loads

GOLDEN = resources.files("spreadelectron") / "golden"


def golden(name):
    return (GOLDEN / name).read_text(encoding="utf-8")


def test_v1_trace():
    assert dumps(derive_wave_equation(1).V(1)) == golden("v1.txt")


def test_v2_trace():
    assert dumps(derive_wave_equation(2).V(2)) == golden("v2.txt")


def test_fw_baseline_trace():
    assert dumps(pauli_reduce(fw_transform(dirac_hamiltonian()))) == golden("fw_baseline.txt")


def test_v1_alteration_traces():
    alt = v1_alteration()
    assert dumps(alt.assembled) == golden("v1_assembled.txt")
    assert dumps(alt.residual) == golden("v1_residual.txt")
    assert dumps(assembled_reference()) == golden("v1_assembled.txt")
    assert dumps(v1_residual_reference()) == golden("v1_residual.txt")


@pytest.mark.parametrize("name", ["v1.txt", "v2.txt", "fw_baseline.txt", "v1_assembled.txt", "v1_residual.txt"])
def test_golden_files_parse_back(name):
    text = golden(name)
    assert dumps(loads(text)) == text


def test_moment_report_text(capsys):
    assert main(["moment"]) == 0
    assert capsys.readouterr().out == golden("moment_electron.txt")

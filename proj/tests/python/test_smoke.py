import math
import os
import subprocess

import pytest

import degenelab


def test_substitutions_round_trip():
    for gamma in (0.5, 1.0, 2.0, 3.0):
        for u in (-40.0, -1.0, 0.0, 0.25, 7.0):
            v = degenelab.substitution_v(u, gamma)
            assert degenelab.substitution_v_inverse(v, gamma) == pytest.approx(u, rel=1e-12, abs=1e-12)
    assert degenelab.substitution_v(math.e - 1, 2.0) == pytest.approx(1.0)
    assert degenelab.lower_order_term(degenelab.substitution_z(1.0, 2.0), 2.0) == pytest.approx(1.0)
    assert degenelab.truncate(5.0, 2.0) == 2.0


def test_manufactured_values():
    ms = degenelab.ManufacturedSolution(1.5, 5, 2.0)
    assert ms.u(0.25) == pytest.approx(7.0)
    assert ms.f(0.25) == pytest.approx(20.5)


def test_errors_carry_kind():
    with pytest.raises(degenelab.Error) as info:
        degenelab.ManufacturedSolution(1.5, 3, 2.0)
    assert info.value.kind == "sigma-out-of-window"
    with pytest.raises(degenelab.Error):
        degenelab.solve(datum="zero", elements=1)


def test_solve_zero_and_constant():
    zero = degenelab.solve(datum="zero", elements=16)
    assert zero["iterations"] == 1
    assert all(v == 0 for v in zero["solution"]["value"])

    const = degenelab.solve(datum=lambda r: 3.0, elements=64, N=3)
    values = const["solution"]["value"]
    assert min(values) >= -1e-12
    assert max(values) <= 3.0 + 1e-10
    assert const["residual_trace"][-1] < 1e-10


def test_dirac_verdicts():
    report = degenelab.dirac_experiment()
    assert report["verdicts"] == {"absorption": True, "collapse": True, "energy_bound": True}
    assert all(c["passed"] for c in report["certificates"])


def test_mms_study_order():
    study = degenelab.mms_study(elements=(64, 128))
    assert study["l2_orders"][0] > 1.5


def test_run_writes_artifacts(tmp_path):
    code, text = degenelab.run({"command": "contraction", "seed": 1, "pairs": 3, "elements": 32,
                                "out": str(tmp_path)})
    assert code == 0
    assert text.count("PASS") == 6
    assert (tmp_path / "contraction.csv").read_bytes().startswith(b"name,k,lhs,rhs,slack,passed\r\n")


def test_command_line_tool(tmp_path):
    binary = os.environ.get("DEGENELAB_BINARY")
    if not binary:
        pytest.skip("DEGENELAB_BINARY not set")
    done = subprocess.run([binary, "contraction", "--seed", "42", "--out", str(tmp_path)],
                          capture_output=True, text=True, check=False)
    assert done.returncode == 0
    assert done.stdout.count("PASS") == 40
    bad = subprocess.run([binary, "dirac", "--gamma", "0.5", "--out", str(tmp_path / "bad")],
                         capture_output=True, text=True, check=False)
    assert bad.returncode == 1
    assert "gamma-not-supercritical" in bad.stderr

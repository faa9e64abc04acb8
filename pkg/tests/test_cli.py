import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from c2copula.cli import main
from c2copula.expr import ExpressionError, compile_expression
from c2copula.sampler import empirical_rho

SINCOS = {"family": "fourier", "b": [1.0], "c": [1.0]}
B1D1 = {"family": "fourier", "b": [1.0], "d": [1.0]}


@pytest.fixture
def spec_file(tmp_path):
    def write(obj, name="spec.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


# ---------------------------------------------------------------- validate

def test_validate_fgm(capsys, spec_file):
    code, out, _ = run(capsys, "validate", spec_file({"family": "fgm", "theta": 1.0}))
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] is True
    assert set(rep["generator"]) >= {"range_ok", "marginal_u_ok", "marginal_v_ok", "worst_violation"}
    assert set(rep["axioms"]) >= {"p1", "p2", "p3", "frechet"}


def test_validate_fgm_out_of_range(capsys, spec_file):
    code, _, err = run(capsys, "validate", spec_file({"family": "fgm", "theta": 1.5}))
    assert code == 1
    assert "theta" in err


def test_validate_sincos(capsys, spec_file):
    assert run(capsys, "validate", spec_file(SINCOS))[0] == 0


def test_validate_failing_custom(capsys, spec_file):
    code, out, _ = run(capsys, "validate", spec_file({"family": "custom_product", "phi": "2*sin(2*pi*x)",
                                                      "psi": "cos(2*pi*x)"}), "--grid", "41")
    assert code == 1
    assert json.loads(out)["generator"]["range_ok"] is False


def test_malformed_json(capsys, spec_file):
    code, _, err = run(capsys, "validate", spec_file("{not json"))
    assert code == 2
    assert "malformed" in err


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "validate", str(tmp_path / "nope.json"))[0] == 2


@pytest.mark.parametrize("obj", [
    {"family": "gumbel", "theta": 2},
    {"family": "fgm"},
    {"family": "fgm", "theta": 0.5, "extra": 1},
    {"family": "frank", "theta": 0},
    {"family": "frank", "theta": "5"},
    {"family": "fourier", "b": [1.0], "c": [1.5]},
    {"family": "epsilon_optimal", "epsilon": 0},
    {"family": "complex_fourier", "alpha": [{"n": 0, "m": 1, "re": 0.1}]},
    {"family": "custom_product", "phi": "__import__('os')", "psi": "x"},
    [1, 2],
])
def test_invalid_specs_exit_one(capsys, spec_file, obj):
    assert run(capsys, "validate", spec_file(obj))[0] == 1


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps({"family": "independence"})))
    assert run(capsys, "validate", "-")[0] == 0


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


# ---------------------------------------------------------------- measures

def test_measures_both(capsys, spec_file):
    code, out, _ = run(capsys, "measures", spec_file(B1D1), "--method", "both")
    rep = json.loads(out)
    assert code == 0
    assert rep["closed_form"]["rho"] == pytest.approx(3 / math.pi**2, abs=1e-15)
    assert rep["discrepancy"]["rho"] <= 1e-8 and rep["discrepancy"]["tau"] <= 1e-8
    assert rep["quadrature"]["method"] == "quadrature"


def test_measures_independence(capsys, spec_file):
    rep = json.loads(run(capsys, "measures", spec_file({"family": "independence"}))[1])
    assert rep["closed_form"]["rho"] == 0 and rep["closed_form"]["tau"] == 0
    assert abs(rep["quadrature"]["rho"]) <= 1e-12


def test_measures_epsilon_closed(capsys, spec_file):
    rep = json.loads(run(capsys, "measures", spec_file({"family": "epsilon_optimal", "epsilon": 0.1}),
                         "--method", "closed")[1])
    assert f"{rep['closed_form']['rho']:.6g}" == "0.644923"
    assert f"{rep['closed_form']['tau']:.6g}" == "0.429949"
    assert "quadrature" not in rep


def test_measures_closed_unavailable(capsys, spec_file):
    assert run(capsys, "measures", spec_file({"family": "frank", "theta": 2}), "--method", "closed")[0] == 1
    code, out, _ = run(capsys, "measures", spec_file({"family": "frank", "theta": 2}))
    assert code == 0 and json.loads(out)["closed_form"] is None


def test_measures_order(capsys, spec_file):
    rep = json.loads(run(capsys, "measures", spec_file({"family": "fgm", "theta": 1}),
                         "--method", "quadrature", "--order", "32")[1])
    assert rep["quadrature"]["tau"] == pytest.approx(2 / 9, abs=1e-12)


# ---------------------------------------------------------------- table1

def test_table1_default(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    assert out.splitlines()[0] == "epsilon,rho_max,rho_min,tau_max,tau_min"
    assert "0.01,0.747539,-0.747539,0.498359,-0.498359" in out.splitlines()
    assert len(out.splitlines()) == 6


def test_table1_single(capsys):
    out = run(capsys, "table1", "--epsilons", "1")[1]
    assert out.splitlines()[1] == "1,0.0726437,-0.0726437,0.0484292,-0.0484292"


def test_table1_repeat(capsys):
    lines = run(capsys, "table1", "--epsilons", "0.1,0.1")[1].splitlines()
    assert lines[1] == lines[2]


def test_table1_bad_eps(capsys):
    assert run(capsys, "table1", "--epsilons", "0.1,-1")[0] == 1
    assert run(capsys, "table1", "--epsilons", "0.1,abc")[0] == 2


def test_table1_out(capsys, tmp_path):
    target = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table1", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("epsilon,")


# ---------------------------------------------------------------- contour

def test_contour_sincos(capsys, spec_file):
    code, out, _ = run(capsys, "contour", spec_file(SINCOS))
    header, rows = read_csv(out)
    assert code == 0 and header == ["u", "v", "value"]
    vals = np.array(rows, dtype=float)
    assert len(vals) == 101 * 101
    Z = vals[:, 2].reshape(101, 101)
    x = vals[::101, 0]
    np.testing.assert_array_equal(vals[:101, 1], x)  # row-major: v varies fastest
    assert np.max(np.abs(Z[0, :])) <= 1e-9 and np.max(np.abs(Z[:, 0])) <= 1e-9
    assert np.max(np.abs(Z[-1, :] - x)) <= 1e-9 and np.max(np.abs(Z[:, -1] - x)) <= 1e-9
    assert np.max(np.abs(Z - Z.T)) > 1e-3
    assert Z[25, 25] == pytest.approx(0.0878302959105844, abs=1e-15)


def test_contour_independence_density(capsys, spec_file):
    out = run(capsys, "contour", spec_file({"family": "independence"}), "--grid", "7", "--quantity", "density")[1]
    vals = np.array(read_csv(out)[1], dtype=float)
    assert len(vals) == 49 and np.all(vals[:, 2] == 1.0)


def test_contour_round_trip_precision(capsys, spec_file):
    out = run(capsys, "contour", spec_file({"family": "frank", "theta": 3}), "--grid", "5")[1]
    from c2copula import FrankParams
    for u, v, z in read_csv(out)[1]:
        assert float(z) == float(FrankParams(3.0).cdf(float(u), float(v)))


def test_contour_bad_grid(capsys, spec_file):
    assert run(capsys, "contour", spec_file(SINCOS), "--grid", "1")[0] == 1


# ---------------------------------------------------------------- sample

def test_sample_small(capsys, spec_file):
    path = spec_file({"family": "independence"})
    code, out, _ = run(capsys, "sample", path, "--n", "5", "--seed", "1")
    header, rows = read_csv(out)
    vals = np.array(rows, dtype=float)
    assert code == 0 and header == ["u", "v"] and vals.shape == (5, 2)
    assert vals.min() >= 0 and vals.max() <= 1
    assert run(capsys, "sample", path, "--n", "5", "--seed", "1")[1] == out


def test_sample_rho(capsys, spec_file):
    out = run(capsys, "sample", spec_file(B1D1), "--n", "200000", "--seed", "3")[1]
    vals = np.loadtxt(io.StringIO(out), delimiter=",", skiprows=1)
    assert empirical_rho(vals) == pytest.approx(0.304, abs=0.015)


def test_sample_invalid(capsys, spec_file):
    assert run(capsys, "sample", spec_file({"family": "frank"}))[0] == 1
    assert run(capsys, "sample", spec_file({"family": "independence"}), "--n", "0")[0] == 1


def test_sample_out(capsys, spec_file, tmp_path):
    target = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sample", spec_file(B1D1), "--n", "10", "--out", str(target))
    assert code == 0 and out == ""
    assert len(target.read_text().splitlines()) == 11


# ---------------------------------------------------------------- compose

def test_compose_independence(capsys, spec_file):
    code, out, _ = run(capsys, "compose", spec_file({"family": "independence"}),
                       "--marginal-x", "uniform:0,1", "--marginal-y", "uniform:0,1", "--at", "0.3,0.7")
    rep = json.loads(out)
    assert code == 0 and rep["H"] == pytest.approx(0.21)
    assert set(rep) == {"x", "y", "F", "G", "H"}


def test_compose_saturates(capsys, spec_file):
    rep = json.loads(run(capsys, "compose", spec_file({"family": "frank", "theta": 5}),
                         "--marginal-x", "exponential:1", "--marginal-y", "exponential:1", "--at", "40,40")[1])
    assert rep["H"] == pytest.approx(1.0, abs=1e-10)


def test_compose_below_support(capsys, spec_file):
    rep = json.loads(run(capsys, "compose", spec_file(SINCOS), "--marginal-x", "uniform",
                         "--marginal-y", "exponential:2", "--at=-1,0.5")[1])
    assert rep["H"] == 0.0


@pytest.mark.parametrize("marg", ["gamma:2", "uniform:1", "exponential:-1", "uniform:a,b"])
def test_compose_bad_marginal(capsys, spec_file, marg):
    code = run(capsys, "compose", spec_file(SINCOS), "--marginal-x", marg, "--marginal-y", "uniform", "--at", "0.2,0.2")[0]
    assert code == 1


def test_compose_bad_point(capsys, spec_file):
    code = run(capsys, "compose", spec_file(SINCOS), "--marginal-x", "uniform", "--marginal-y", "uniform", "--at", "0.2")[0]
    assert code == 2


# ---------------------------------------------------------------- custom_product and grammar

def test_custom_product_matches_fourier(capsys, spec_file):
    spec = {"family": "custom_product", "phi": "sin(2*pi*x)", "psi": "cos(2*pi*x)"}
    assert run(capsys, "validate", spec_file(spec), "--grid", "41")[0] == 0
    out = run(capsys, "contour", spec_file(spec), "--grid", "5")[1]
    ref = run(capsys, "contour", spec_file(SINCOS), "--grid", "5")[1]
    a = np.array(read_csv(out)[1], dtype=float)
    b = np.array(read_csv(ref)[1], dtype=float)
    np.testing.assert_allclose(a, b, atol=1e-13)


def test_expression_values():
    f = compile_expression("-0.5*abs(x - 1/2) + sqrt(4) * cos(pi*x) / +2")
    x = np.array([0.0, 0.25, 1.0])
    np.testing.assert_allclose(f(x), -0.5 * np.abs(x - 0.5) + np.cos(np.pi * x))
    assert compile_expression("3").__call__(np.zeros(4)).shape == (4,)


@pytest.mark.parametrize("src", ["", "x**2", "exp(x)", "y + 1", "x.real", "sin(x, 2)", "lambda: 1",
                                 "'a'", "x if x else 1", "(1, 2)", "sin(x"])
def test_expression_rejects(src):
    with pytest.raises(ExpressionError):
        compile_expression(src)


# ---------------------------------------------------------------- entry points

def test_module_entry_point(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"family": "fgm", "theta": 0.5}))
    proc = subprocess.run([sys.executable, "-m", "c2copula", "validate", str(spec), "--grid", "11"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True

import json
import subprocess
import sys

import pytest

from gyrofuzz.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_oplus(capsys):
    assert run(capsys, "eval", "oplus", "1/2+0i", "1/2+0i")[:2] == (0, "4/5+0i\n")


def test_eval_metric(capsys):
    assert run(capsys, "eval", "metric", "0+0i", "1/2+0i", "--t", "1")[:2] == (0, "2/3\n")


def test_eval_gyr_keeps_modulus(capsys):
    code, out, _ = run(capsys, "eval", "gyr", "1/2+0i", "0+1/2i", "1/3+0i")
    assert code == 0 and out == "5/17-8/51i\n"


def test_eval_norm_and_fuzzynorm(capsys):
    assert run(capsys, "eval", "norm", "3/5+0i")[1] == "3/5\n"
    assert run(capsys, "eval", "fuzzynorm", "1/2+0i", "--t", "1/2")[1] == "1/2\n"
    code, out, _ = run(capsys, "eval", "norm", "1/2+1/2i")
    assert code == 0 and "0.7071" in out


def test_eval_float(capsys):
    code, out, _ = run(capsys, "eval", "oplus", "0.5+0i", "0.5+0i", "--float")
    assert code == 0 and out.startswith("0.8")


@pytest.mark.parametrize("argv", [
    ["eval", "oplus", "1+0i", "0+0i"],
    ["eval", "oplus", "1/2+0i"],
    ["eval", "metric", "0+0i", "1/2+0i"],
    ["eval", "metric", "0+0i", "1/2+0i", "--t", "-1"],
    ["eval", "oplus", "0.5+0i", "0+0i"],
    ["verify", "--instance", "nowhere"],
    ["verify", "--tnorm", "drastic"],
    ["verify", "--samples", "0"],
    ["complete", "--fixture", "alternating"],
    ["complete", "--fixture", "missing"],
    ["table-check", "no/such/file.gt"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("gyrofuzz:")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_verify_mobius(capsys):
    code, out, _ = run(capsys, "verify", "--samples", "60", "--seed", "7")
    assert code == 0
    assert out.strip().endswith("PASS verify:mobius-exact")


def test_verify_groups_and_tables(capsys):
    assert run(capsys, "verify", "--instance", "group:z4", "--samples", "10")[0] == 0
    assert run(capsys, "verify", "--instance", "table:fixtures/gyro8.gt", "--samples", "10")[0] == 0
    assert run(capsys, "verify", "--instance", "group:q-add", "--samples", "30")[0] == 0


def test_verify_broken_table(capsys):
    code, out, _ = run(capsys, "verify", "--instance", "table:fixtures/broken.gt")
    assert code == 1
    assert "not-gyrogroup" in out and "g1" in out


def test_verify_json_is_deterministic(capsys):
    argv = ["verify", "--samples", "40", "--seed", "3", "--output", "json"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    data = json.loads(first)
    assert set(data) == {"suite", "checks", "seed", "samples"}
    assert data["seed"] == 3
    assert all(set(c) == {"law", "status", "witness", "max_deviation"} for c in data["checks"])


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("GYROFUZZ_SEED", "5")
    data = json.loads(run(capsys, "invariance", "--samples", "10", "--output", "json")[1])
    assert data["seed"] == 5
    monkeypatch.setenv("GYROFUZZ_SEED", "five")
    assert run(capsys, "invariance", "--samples", "10")[0] == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "rep.json"
    code, out, _ = run(capsys, "invariance", "--samples", "10", "--output", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["suite"].startswith("invariance:left")


def test_invariance_sides(capsys):
    assert run(capsys, "invariance", "--side", "left", "--samples", "50")[0] == 0
    assert run(capsys, "invariance", "--side", "gyration", "--samples", "50")[0] == 0
    assert run(capsys, "invariance", "--side", "right", "--samples", "200")[0] == 1


def test_klee(capsys):
    code, out, _ = run(capsys, "klee", "--samples", "100")
    assert code == 0
    assert "(I): fails on samples" in out
    assert run(capsys, "klee", "--instance", "group:r-add", "--samples", "100")[0] == 0


def test_complete(capsys):
    code, out, _ = run(capsys, "complete", "--base", "q-add", "--fixture", "sqrt2", "--eps", "1e-9")
    assert code == 0 and "hat-oplus: oracle delta" in out
    assert run(capsys, "complete", "--fixture", "sqrt2", "--with", "e")[0] == 0


def test_complete_mobius_is_refused(capsys):
    code, out, _ = run(capsys, "complete", "--base", "mobius-exact")
    assert code == 1 and "refused" in out


def test_table_check(capsys):
    assert run(capsys, "table-check", "fixtures/klein.gt")[:2] == (0, "group\n")
    assert run(capsys, "table-check", "fixtures/gyro8.gt")[1] == "gyrogroup-nongroup\n"
    code, out, _ = run(capsys, "table-check", "fixtures/broken.gt", "--output", "json")
    assert code == 1
    assert json.loads(out) == {"verdict": "not-gyrogroup", "failing_axiom": "G3",
                               "witness": ["e", "g1", "g1"]}


def test_tabulated_tnorm_file(capsys, tmp_path):
    f = tmp_path / "min.tn"
    f.write_text("tnorm 2\n0 0 0\n0 1/2 1/2\n0 1/2 1\n")
    assert run(capsys, "invariance", "--tnorm", str(f), "--samples", "20")[0] == 0


def test_console_script_module():
    res = subprocess.run([sys.executable, "-m", "gyrofuzz.cli", "eval", "neg", "1/2-1/3i"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout == "-1/2+1/3i\n"

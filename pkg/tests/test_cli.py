import json
import subprocess
import sys

import pytest

import pschur.verify
from pschur.cli import main
from pschur.multiplier import MultiplierResult


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_catalog_list(capsys):
    code, rep = run_json(capsys, "catalog", "list")
    assert code == 0 and rep["schema"] == 1
    assert {"Phi11(1^6)", "D16"} <= {f["id"] for f in rep["families"]}
    code, rep = run_json(capsys, "catalog", "list", "--p", "3")
    assert code == 0 and [e["item"] for e in rep["entries"][:12]] == list(range(1, 13))


def test_show_text(capsys):
    code, out, _ = run(capsys, "show", "Phi3(1^4)", "--p", "5")
    assert code == 0 and "class 3" in out and "G^ab = Z_5 x Z_5" in out


def test_multiplier_json(capsys):
    code, rep = run_json(capsys, "--p", "3", "multiplier", "Phi7(1^5)")
    assert code == 0 and rep["agree"]
    assert rep["multiplier_exponent"] == 4 and rep["t"] == rep["expected_t"] == 6
    # class 3 rules out BE, and |G| = 243 is above the default oracle cap
    assert set(rep["methods"]) == {"tails"} and set(rep["skipped_methods"]) == {"be", "oracle"}
    assert "total" in rep["timing"]


def test_multiplier_be_dims(capsys):
    code, rep = run_json(capsys, "multiplier", "PropK-capable", "--p", "3", "--method", "be")
    d = rep["methods"]["be"]["diagnostics"]
    assert code == 0 and rep["multiplier_exponent"] == 9 and d["dimX"] == d["dimX1"] == 9


def test_multiplier_param(capsys):
    code, rep = run_json(capsys, "multiplier", "Phi13(1^6)", "--p", "5", "--param", "form=as-printed", "--method", "tails")
    assert code == 0 and rep["multiplier_exponent"] == 9


def test_json_is_deterministic_without_timing(capsys):
    a = run_json(capsys, "multiplier", "D16", "--method", "all")[1]
    b = run_json(capsys, "multiplier", "D16", "--method", "all")[1]
    a.pop("timing"), b.pop("timing")
    assert a == b
    assert json.loads(json.dumps(a, sort_keys=True)) == a


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "Q8")
    assert code == 0 and "M(G) = 1" in out
    code, rep = run_json(capsys, "oracle", "ES", "--p", "3", "--param", "m=1")
    assert code == 0 and rep["result"]["invariants"] == [3, 3]


def test_bounds_command(capsys):
    code, rep = run_json(capsys, "bounds", "Phi3(1^4)", "--p", "3")
    assert code == 0 and rep["passed"]
    c3 = next(c for c in rep["checks"] if c["name"] == "class-3")
    assert c3["witnesses"]["dim_psi2"] == 0 and c3["witnesses"]["dim_psi3"] == 1


def test_group_file(capsys, tmp_path):
    f = tmp_path / "es27.pc"
    f.write_text("p = 3\ngens = 3\ncomm 2 1 = g3\n")
    code, rep = run_json(capsys, "multiplier", "--group-file", str(f))
    assert code == 0 and rep["group"] == "es27" and rep["multiplier_exponent"] == 2
    assert rep["expected_t"] is None


def test_group_file_parse_error(capsys, tmp_path):
    f = tmp_path / "bad.pc"
    f.write_text("p = 3\ngens = 3\ncomm 2 1 = g7\n")
    code, _, err = run(capsys, "show", "--group-file", str(f))
    assert code == 2 and "line 3" in err


def test_group_file_inconsistent(capsys, tmp_path):
    f = tmp_path / "bad.pc"
    f.write_text("p = 3\ngens = 3\npow 1 = g2\ncomm 2 1 = g3\n")
    assert run(capsys, "show", "--group-file", str(f))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["multiplier", "no-such-group", "--p", "3"],
        ["multiplier", "Phi11(1^6)"],
        ["multiplier", "Phi11(1^6)", "--p", "4"],
        ["multiplier", "Phi11(1^6)", "--p", "2"],
        ["multiplier", "Phi11(1^6)", "--p", "5", "--method", "oracle"],
        ["multiplier", "Phi3(1^4)", "--p", "3", "--method", "be"],
        ["multiplier", "ES", "--p", "3", "--param", "m"],
        ["oracle", "D16", "--oracle-cap", "100000"],
        ["verify-main"],
        ["show"],
        ["frobnicate"],
        ["multiplier", "D16", "--method", "bogus"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        sys.exit(main(argv))
    assert info.value.code == 2


def test_disagreement_exits_1(capsys, monkeypatch):
    real = pschur.verify.schur_tails

    def off_by_one(pres):
        r = real(pres)
        return MultiplierResult(r.p, r.order_exponent + 1, None, "tails")

    monkeypatch.setattr(pschur.verify, "schur_tails", off_by_one)
    code, out, _ = run(capsys, "multiplier", "D16")
    assert code == 1 and "DISAGREE" in out


def test_verify_main_p2(capsys):
    code, rep = run_json(capsys, "verify-main", "--p", "2")
    assert code == 0 and rep["passed"] and rep["schema"] == 1
    items = {g["item"]: g for g in rep["groups"]}
    assert sorted(items) == [13, 14, 15, 16]
    assert items[13]["satisfying_candidates"] == [{"action": "two-block"}]
    assert items[14]["satisfying_candidates"] == [{"action": "a->ab,b->b"}]
    assert len(items[13]["candidates"]) == 3 and len(items[14]["candidates"]) == 4


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "pschur", "multiplier", "Phi3(211)a", "--p", "5", "--method", "tails"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and "Z_5" in r.stdout
    r = subprocess.run([sys.executable, "-m", "pschur", "--version"], capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and r.stdout.startswith("pschur ")

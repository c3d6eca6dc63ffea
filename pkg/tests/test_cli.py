import json
import subprocess
import sys

import pytest

from worpitzky.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_rootsys(capsys):
    code, data = run_json(capsys, "rootsys", "B2")
    assert code == 0
    assert data["marks"] == [1, 2]
    assert data["coxeterNumber"] == 4
    assert data["problems"] == []


def test_unknown_type_is_usage_error(capsys):
    code, _, err = run(capsys, "rootsys", "Q7")
    assert code == 2
    assert "Q7" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["charquasi", "B2", "--interval", "3:1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nosuchcommand"])
    assert exc.value.code == 2


def test_eulerian_text(capsys):
    code, out, _ = run(capsys, "eulerian", "B2")
    assert code == 0
    assert out.strip() == "t + 2*t^2 + t^3"


def test_eulerian_cross_check(capsys):
    code, data = run_json(capsys, "eulerian", "G2", "--cross-check")
    assert code == 0
    assert data["crossCheck"]["agreement"] is True
    assert set(data["crossCheck"]["routes"]) == {"product", "weyl", "scan"}


def test_eulerian_fallback_note(capsys):
    code, out, err = run(capsys, "eulerian", "E8", "--route", "weyl")
    assert code == 0
    assert "used product" in err


def test_ehrhart_verify(capsys):
    code, data = run_json(capsys, "ehrhart", "B2", "--verify")
    assert code == 0
    assert data["quasi"]["period"] == 2
    assert all(r["passed"] for r in data["reports"])


def test_worpitzky(capsys):
    code, data = run_json(capsys, "worpitzky", "B2", "--q", "6")
    assert code == 0
    assert sorted(p["asc"] for p in data["partition"]) == [1, 2, 2, 3]
    assert data["report"]["passed"]


def test_charquasi_shi(capsys):
    code, data = run_json(capsys, "charquasi", "B2", "--interval", "0:1")
    assert code == 0
    assert data["constituents"] == ["(t-4)^2"]


def test_charquasi_negative_interval(capsys):
    code, data = run_json(capsys, "charquasi", "B2", "--interval", "-1:1")
    assert code == 0
    assert data["family"] == "catalan"
    assert data["charPoly"] == "t^2 - 12*t + 35"


def test_charquasi_compare(capsys):
    code, data = run_json(capsys, "charquasi", "A2", "--interval", "1:2", "--compare", "--q-max", "20")
    assert code == 0
    assert data["agreement"] is True
    assert data["route"] == "both"


def test_charquasi_compare_without_formula(capsys):
    code, _, err = run(capsys, "charquasi", "B2", "--interval", "2:3", "--compare")
    assert code == 2


def test_charquasi_oracle_guard(capsys):
    code, _, err = run(capsys, "charquasi", "A3", "--interval", "1:2", "--oracle", "--oracle-guard", "100")
    assert code == 2
    assert err.startswith("guard:")


def test_verify_subcommands(capsys):
    assert run_json(capsys, "verify", "B2", "functional", "--interval", "1:2")[0] == 0
    assert run_json(capsys, "verify", "A2", "shift", "-n", "2", "-k", "1")[0] == 0
    code, data = run_json(capsys, "verify", "E6", "congruence", "-m", "6")
    assert code == 0 and data["parameters"] == {"l": 6, "m": 6}
    assert run(capsys, "verify", "B2", "shift")[0] == 2


def test_verify_failure_exit_1(capsys):
    # no formula covers [2, 3], so the functional equation check reports a failure
    assert run(capsys, "verify", "B2", "functional", "--interval", "2:3")[0] == 1


def test_rh(capsys):
    code, data = run_json(capsys, "rh", "A2", "-n", "2")
    assert code == 0
    assert data["passed"] and data["target"] == "3"
    code, data = run_json(capsys, "rh", "--e6-witness")
    assert code == 0
    assert data["passed"] is True and data["constant"] == 29288834
    assert run(capsys, "rh")[0] == 2


def test_json_is_deterministic(capsys):
    first = run(capsys, "charquasi", "G2", "--interval", "1:2", "--json")[1]
    second = run(capsys, "charquasi", "G2", "--interval", "1:2", "--json")[1]
    assert first == second


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "worpitzky", "eulerian", "A3"], capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "t + 4*t^2 + t^3"

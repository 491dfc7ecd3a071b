import json

import pytest

from sigchev.cli import (
    Options,
    deterministic_view,
    dumps,
    exit_code,
    list_builtin,
    load_builtin,
    main,
    run_scenario,
)
from sigchev.errors import UnknownName
from sigchev.scenario import parse_scenario

BUILTINS = ["intro-example", "statement-a", "frobenius-compat", "limit-degree",
            "kernel-tower", "inversive-bijection", "pv-sqrt", "trivial-ext"]


def run_text(text, **opts):
    return run_scenario(parse_scenario(text), Options(assert_mode=True, **opts))


def test_list_has_eight_builtins():
    names = [n for n, _ in list_builtin()]
    assert sorted(names) == sorted(BUILTINS)
    assert all(desc for _, desc in list_builtin())


def test_unknown_builtin():
    with pytest.raises(UnknownName):
        load_builtin("no-such-scenario")


def test_empty_scenario_passes():
    report = run_text("")
    assert report["commands"] == [] and report["passed"]
    assert exit_code(report, True) == 0


def test_intro_report_counts():
    report = run_scenario(parse_scenario(load_builtin("intro-example")), Options())
    lift = next(c for c in report["commands"] if c["command"].startswith("lift"))
    assert lift["result"]["lift_counts"]["1"] == 0
    assert lift["result"]["lift_counts"]["2"] == 2


def test_statement_a_report():
    report = run_scenario(parse_scenario(load_builtin("statement-a")), Options())
    lifts = [c["result"] for c in report["commands"] if c["command"].startswith("lift")]
    assert len(lifts) == 3
    for d, res in zip((1, 2, 3), lifts):
        assert res["power"] == d
        assert res["lift_counts"]["1"] == 0 and res["lift_counts"]["2"] == 2


def test_assertion_failure_exit_one():
    report = run_text('algebra A = algebra(Q, [x], {x: -x}); ideal I = ideal(A, [x - 1]);'
                      ' cmd stable I, d=1; expect verdict == "Stable";')
    assert not report["assertions_passed"]
    assert exit_code(report, True) == 1
    assert exit_code(report, False) == 0


def test_operation_error_recorded_and_later_commands_run():
    report = run_text("field F = algebraic(Q, r, r^2 - 2); algebra A = algebra(F, [x], {x: -x});"
                      " ideal I = ideal(A, [x - r]); ideal J = ideal(A, [x^2 - 2]);"
                      " cmd stable I, d=1; cmd lift A, J, d=0; cmd stable J, d=1;"
                      ' expect verdict == "Stable";')
    statuses = [c["status"] for c in report["commands"]]
    assert statuses == ["ok", "error", "ok"]
    assert exit_code(report, True) == 3


def test_reports_are_deterministic():
    text = load_builtin("kernel-tower")
    a = run_scenario(parse_scenario(text), Options(seed=3))
    b = run_scenario(parse_scenario(text), Options(seed=3))
    assert dumps(deterministic_view(a)) == dumps(deterministic_view(b))
    assert "timing" not in deterministic_view(a)


def test_report_schema_version(tmp_path):
    out = tmp_path / "r.json"
    assert main(["run", "--builtin", "frobenius-compat", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["schema_version"] == 1
    assert set(data) == {"schema_version", "version", "scenario", "seed", "declaration_errors",
                         "commands", "assertions_passed", "operation_errors", "passed", "timing"}


def test_main_exit_codes(tmp_path, capsys):
    cases = {
        "op.sigma": ("field F = algebraic(Q, r, r^2 - 4);\ncmd show F;\n", 3),
        "syntax.sigma": ("field F = Q\n", 2),
        "fail.sigma": ('algebra A = algebra(Q, [x], {x: -x});\nideal I = ideal(A, [x - 1]);\n'
                       'cmd stable I, d=1;\nexpect verdict == "Stable";\n', 1),
        "empty.sigma": ("", 0),
    }
    for name, (text, code) in cases.items():
        path = tmp_path / name
        path.write_text(text)
        assert main(["run", str(path), "--assert"]) == code, name
    assert main(["run", "--builtin", "nope"]) == 2
    assert main(["list"]) == 0
    assert "intro-example" in capsys.readouterr().out


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_passes_assert_mode(name):
    assert main(["run", "--builtin", name, "--assert"]) == 0

import json

import pytest

from sieveval import bundled_scenario_names, bundled_scenario_path, load_scenario
from sieveval.cli import main
from sieveval.errors import (
    CommutantViolation,
    OrthogonalityViolation,
    ParseError,
    ValidationError,
)
from sieveval.scenario import effective_caps, scenario_from_dict


def minimal_dict(**overrides):
    base = {
        "name": "t",
        "dimension": 2,
        "observables": [
            {"name": "Z", "eigenspaces": [[["1", "0"]], [["0", "1"]]]}
        ],
        "generators": [
            {"name": "p1", "matrix": [["1", "0"], ["0", "0"]], "commutant_of": "Z"}
        ],
        "states": {"plus": ["1", "1"]},
        "propositions": {"P": [["1", "0"]]},
        "runs": [{"name": "r", "state": "plus", "observable": "Z", "eigenspace": 0}],
    }
    base.update(overrides)
    return base


def test_bundled_scenarios_present():
    names = bundled_scenario_names()
    assert {
        "qubit",
        "qutrit",
        "qubit_extended",
        "qutrit_extended",
        "qubit_complex",
        "minimal",
    } <= set(names)


def test_load_bundled_qubit():
    scenario = load_scenario(bundled_scenario_path("qubit"))
    assert scenario.dimension == 2
    assert scenario.observable("Z").eigenspaces[0].dim == 1
    assert {r.name for r in scenario.runs} == {"z-up", "z-down"}


def test_orthogonality_violation():
    data = minimal_dict(
        observables=[{"name": "bad", "eigenspaces": [[["1", "0"]], [["1", "1"]]]}],
        generators=[],
        runs=[{"name": "r", "state": "plus", "observable": "bad", "eigenspace": 0}],
    )
    with pytest.raises(OrthogonalityViolation):
        scenario_from_dict(data)


def test_decomposition_must_span():
    data = minimal_dict(
        observables=[{"name": "short", "eigenspaces": [[["1", "0"]]]}],
        generators=[],
        runs=[{"name": "r", "state": "plus", "observable": "short", "eigenspace": 0}],
    )
    with pytest.raises(OrthogonalityViolation):
        scenario_from_dict(data)


def test_commutant_violation_names_eigenspace():
    data = minimal_dict(
        generators=[
            {"name": "flip", "matrix": [["0", "1"], ["1", "0"]], "commutant_of": "Z"}
        ]
    )
    with pytest.raises(CommutantViolation) as err:
        scenario_from_dict(data)
    assert "eigenspace" in str(err.value)


def test_irrational_scalar_rejected():
    data = minimal_dict(states={"plus": ["0.5", "1"]})
    with pytest.raises(ValidationError):
        scenario_from_dict(data)


def test_observable_matrix_validator():
    good = minimal_dict(
        observables=[
            {
                "name": "Z",
                "eigenspaces": [[["1", "0"]], [["0", "1"]]],
                "labels": ["1", "-1"],
                "matrix": [["1", "0"], ["0", "-1"]],
            }
        ]
    )
    assert scenario_from_dict(good).observable("Z").labels is not None
    bad = minimal_dict(
        observables=[
            {
                "name": "Z",
                "eigenspaces": [[["1", "0"]], [["0", "1"]]],
                "labels": ["1", "-1"],
                "matrix": [["1", "0"], ["0", "1"]],
            }
        ]
    )
    with pytest.raises(ValidationError):
        scenario_from_dict(bad)


def test_unknown_references_rejected():
    with pytest.raises(ValidationError):
        scenario_from_dict(
            minimal_dict(runs=[{"name": "r", "state": "nope", "observable": "Z", "eigenspace": 0}])
        )
    with pytest.raises(ValidationError):
        scenario_from_dict(
            minimal_dict(runs=[{"name": "r", "state": "plus", "observable": "Z", "eigenspace": 7}])
        )
    with pytest.raises(ValidationError):
        scenario_from_dict(
            minimal_dict(
                runs=[
                    {
                        "name": "r",
                        "state": "plus",
                        "observable": "Z",
                        "eigenspace": 0,
                        "extended": ["unknown"],
                    }
                ]
            )
        )


def test_zero_projection_run_rejected():
    data = minimal_dict(
        states={"up": ["1", "0"]},
        runs=[{"name": "r", "state": "up", "observable": "Z", "eigenspace": 1}],
    )
    scenario = scenario_from_dict(data)
    from sieveval import build_scenario

    with pytest.raises(ValidationError):
        build_scenario(scenario)


def test_effective_caps_env_override():
    caps = effective_caps({"monoid": 32}, env={"SIEVEVAL_CAP_ORBIT": "17"})
    assert caps["monoid"] == 32
    assert caps["orbit"] == 17
    assert caps["sieve_enum"] == 4096
    with pytest.raises(ValidationError):
        effective_caps({"weird": 3})


def test_parse_error_on_bad_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_scenario(path)


def test_cli_validate_ok(capsys):
    code = main(["validate", str(bundled_scenario_path("qubit"))])
    assert code == 0
    assert "valid" in capsys.readouterr().out


def test_cli_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(minimal_dict(dimension=0)))
    code = main(["validate", str(bad)])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cli_valuate_json_matches_worked_example(capsys):
    code = main(["valuate", str(bundled_scenario_path("qubit")), "--run", "z-up", "--json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    rows = {r["name"]: r for r in report["valuation"]["propositions"]}
    assert rows["I"]["flags"]["is_top"]
    assert rows["I"]["bub"] == 1
    assert rows["0"]["flags"]["is_bottom_annihilator"]
    assert rows["0"]["bub"] == 0
    assert rows["P_e2"]["sieve"] == [[2, 2]]
    assert rows["P_e2"]["flags"]["is_bottom_annihilator"]
    assert rows["P_plus"]["bub"] is None
    assert rows["P_plus"]["sieve"] == [[1, 1], [2, 2]]
    assert all(r["flags"]["in_delta_omega"] for r in rows.values())


def test_cli_valuate_unknown_run(capsys):
    code = main(["valuate", str(bundled_scenario_path("qubit")), "--run", "nope"])
    assert code == 2


def test_cli_check_passes_and_is_deterministic(capsys):
    path = str(bundled_scenario_path("qubit"))
    assert main(["check", path, "--json"]) == 0
    first = capsys.readouterr().out
    assert main(["check", path, "--json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["passed"]
    tags = {row["tag"] for row in report["rows"]}
    assert "Eq 3.21 = Eq 3.37" in tags
    assert "Props A3–A4 (δΩ)" in tags


def test_cli_dump_site(capsys):
    assert main(["dump-site", str(bundled_scenario_path("qubit"))]) == 0
    dump = json.loads(capsys.readouterr().out)
    assert dump["monoid"]["product_table"][0][1] == 1  # identity row
    run0 = dump["runs"][0]
    assert len(run0["plain"]["objects"]) == 3
    assert all({"dom", "op", "cod"} <= set(m) for m in run0["plain"]["morphisms"])


def test_cli_missing_file(capsys):
    assert main(["validate", "/nonexistent/file.json"]) == 2


def test_cli_check_reports_violations_with_exit_one(monkeypatch, capsys):
    import sieveval.cli as cli_module

    failing = {
        "scenario": "t",
        "dimension": 1,
        "truncation": {},
        "rows": [{"tag": "Eq 0.0", "title": "synthetic failure", "run": None, "passed": False}],
        "passed": False,
    }
    monkeypatch.setattr(cli_module, "run_check", lambda scenario: failing)
    code = main(["check", str(bundled_scenario_path("minimal"))])
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "violations found" in out


def test_valuate_qutrit_block_proposition(capsys):
    code = main(["valuate", str(bundled_scenario_path("qutrit")), "--run", "r1", "--json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    rows = {r["name"]: r for r in report["valuation"]["propositions"]}
    # the block join of the atom with a remainder ray is determinately true
    assert rows["Bm"]["bub"] == 1
    assert rows["Bm"]["flags"]["is_top"]
    # the other eigenspace's block is determinately false but not the floor
    assert rows["plane23"]["bub"] == 0
    assert rows["P_e23"]["bub"] == 0
    assert report["truncation"]["monoid_size"] == 4


def test_extended_valuate_verdicts(capsys):
    code = main(
        ["valuate", str(bundled_scenario_path("qubit_extended")), "--run", "coarse", "--json"]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    for row in report["valuation"]["propositions"]:
        verdicts = row["extended"]["verdicts"]
        assert verdicts["a"] and verdicts["b"] and verdicts["c"]

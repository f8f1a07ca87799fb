"""Command execution, report rendering, determinism, and exit codes."""
import json

import pytest

from epsmult.ideals import colon_power, max_ideal_power, minimalize, power
from epsmult.rings import polynomial_ring
from epsmult.runner import (
    EXIT_COMPUTE,
    EXIT_MISMATCH,
    EXIT_OK,
    Report,
    RunDefaults,
    build_environment,
    render_csv,
    reproduce_example,
    run_session,
)
from epsmult.session import parse_session

EX3_HEADER = "ring S = semigroup vars(x,y) gens((1,0),(0,2),(0,3))\n"
GAPPY_HEADER = (
    "ring G = semigroup vars(x,y) gens((1,0),(0,5),(0,6),(0,7),(0,8),(0,9))\n"
)


def test_bound_expression_matches_direct_computation():
    text = (
        "ring R = poly(x,y)\n"
        "ideal I=(x^2,x*y)\n"
        "ideal C=colon(power(I,4), power(maxideal, 2))\n"
    )
    env = build_environment(parse_session(text))
    kxy = polynomial_ring(("x", "y"))
    direct = colon_power(power(minimalize(kxy, [(2, 0), (1, 1)]), 4),
                         max_ideal_power(kxy, 1), 2)
    assert env.objects["C"].gens == direct.gens


def test_run_produces_one_report_per_command():
    text = (
        EX3_HEADER
        + "ideal I = (x^2, x*y^2)\n"
        + "filtration F = colonfam(powers(I), maxideal, n=2)\n"
        + "cmd epsilon powers(I) mmax=6\n"
        + "cmd spread I\n"
        + "cmd spread-family F mmax=4\n"
        + "cmd check-ar powers(I) r=3 mmax=3\n"
        + "cmd check-wg F c=(1,0) mmax=2\n"
        + "cmd probe-noetherian F mmax=4\n"
        + "cmd amao saturate(I) I mmax=6\n"
        + "cmd epsilon-colon powers(I) maxideal nmax=6\n"
        + "cmd volume-table I maxideal nmax=3 mmax=6\n"
    )
    result = run_session(parse_session(text))
    assert result.exit_code == EXIT_OK
    assert [name for name, _ in result.reports] == [
        "001-epsilon.csv", "002-spread.csv", "003-spread-family.csv",
        "004-check-ar.csv", "005-check-wg.csv", "006-probe-noetherian.csv",
        "007-amao.csv", "008-epsilon-colon.csv", "009-volume-table.csv",
    ]
    epsilon_csv = result.reports[0][1]
    assert epsilon_csv.splitlines()[0] == "index,raw_length,normalized_value"
    assert epsilon_csv.splitlines()[3] == "3,12,8/3"  # exact rationals, never floats


def test_check_ar_sweep_reports_min_r():
    text = (
        "ring R = poly(x,y)\n"
        "ideal I = (x^2, x*y)\n"
        "cmd check-ar powers(I) rmax=4 mmax=4\n"
    )
    result = run_session(parse_session(text), fmt="json")
    payload = json.loads(result.reports[0][1])
    assert payload["summary"]["min_r"] == 2
    assert payload["rows"][0][1] == "false"  # r=1 fails with a witness
    assert payload["rows"][1][1] == "true"


def test_csv_output_is_deterministic():
    text = (
        EX3_HEADER
        + "ideal I = (x^2, x*y^2)\n"
        + "cmd epsilon powers(I) mmax=8\n"
        + "cmd volume-table I maxideal nmax=3 mmax=6\n"
    )
    session = parse_session(text)
    first = run_session(session)
    second = run_session(parse_session(text))
    assert first.reports == second.reports


def test_json_reports_have_schema_and_prefix():
    text = EX3_HEADER + "ideal I = (x^2, x*y^2)\ncmd epsilon powers(I) mmax=6\n"
    result = run_session(parse_session(text), fmt="json")
    payload = json.loads(result.reports[0][1])
    assert payload["schema"] == 1
    assert payload["summary"]["limit"] == "2"
    assert payload["evaluated"]["3"] == [[3, 0], [2, 2], [1, 4], [0, 6]] or "3" in payload["evaluated"]


def test_empty_session_runs_clean():
    result = run_session(parse_session(""))
    assert result.exit_code == EXIT_OK
    assert result.reports == []


def test_stability_failure_maps_to_computation_error():
    text = (
        GAPPY_HEADER
        + "ideal A = (x*y^9)\n"
        + "ideal B = (y^5)\n"
        + "cmd spread colon(A, B)\n"
    )
    result = run_session(parse_session(text), defaults=RunDefaults(bound=10))
    assert result.exit_code == EXIT_COMPUTE
    assert result.error["code"] == "stability-failure"
    assert result.error["operation"] == "colon"
    assert result.error["bound_used"] == 10
    assert result.error["verified_at"] == 20
    assert result.reports == []


def test_command_level_bound_option():
    text = (
        GAPPY_HEADER
        + "ideal A = (x*y^9)\n"
        + "filtration F = powers(A)\n"
        + "cmd check-wg F c=(1,0) mmax=2 bound=10\n"
    )
    result = run_session(parse_session(text))
    assert result.exit_code == EXIT_OK  # powers need no window; bound is harmless


def test_runtime_value_errors_become_computation_errors():
    # y^4 falls in a gap of the value semigroup k[x, y^5..y^9]
    text = GAPPY_HEADER + "ideal A = (y^4)\ncmd spread A\n"
    result = run_session(parse_session(text))
    assert result.exit_code == EXIT_COMPUTE
    assert result.error["code"] == "computation-error"


def test_reproduce_example_defaults_pass():
    report = reproduce_example()
    assert report.ok
    assert report.summary["failures"] == 0
    assert report.summary["eps_limit"] == "2"
    labels = [row[0] for row in report.rows]
    assert "h0(I^6)" in labels
    assert "eps(F(4))~18 (2%)" in labels


def test_reproduce_example_negative_control():
    report = reproduce_example(ideal_gens=((2, 0), (1, 3)))
    assert not report.ok
    assert report.summary["failures"] > 0


def test_reproduce_example_precondition():
    with pytest.raises(ValueError):
        reproduce_example(mmax=2)


def test_session_reproduce_runs_and_exit_codes(monkeypatch):
    text = EX3_HEADER + "cmd reproduce-example\n"
    result = run_session(parse_session(text))
    assert result.exit_code == EXIT_OK

    import epsmult.runner as runner_mod

    broken = Report("001-reproduce-example", "reproduce-example", "worked example",
                    ("check", "expected", "computed", "status"),
                    (("h0", "2", "3", "FAIL"),), {"failures": 1}, None, False)
    monkeypatch.setattr(runner_mod, "reproduce_example",
                        lambda name, mmax, nmax: broken)
    result = run_session(parse_session(text))
    assert result.exit_code == EXIT_MISMATCH


def test_cli_defaults_flow_into_commands():
    text = EX3_HEADER + "ideal I = (x^2, x*y^2)\ncmd epsilon powers(I)\n"
    shallow = run_session(parse_session(text), defaults=RunDefaults(mmax=4))
    deep = run_session(parse_session(text), defaults=RunDefaults(mmax=6))
    assert len(shallow.reports[0][1].splitlines()) == 5
    assert len(deep.reports[0][1].splitlines()) == 7


def test_render_csv_schema():
    report = Report("001-x", "epsilon", "t", ("a", "b"), (("1", "2/3"),), {})
    assert render_csv(report) == "a,b\n1,2/3\n"


def test_csv_cells_never_contain_commas():
    text = EX3_HEADER + "cmd reproduce-example\n"
    result = run_session(parse_session(text))
    for _, content in result.reports:
        lines = content.splitlines()
        width = len(lines[0].split(","))
        for line in lines[1:]:
            assert len(line.split(",")) == width, line

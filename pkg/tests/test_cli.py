import json
import time
from pathlib import Path

import pytest

from algebra_core.errors import ParseError
from cli.emit import JSON, TEXT, emit
from cli.main import main
from cli.parser import parse, print_spec
from cli.report import EXIT_OK, EXIT_PARSE, Report, RunOptions
from cli.runner import needs_input, run

PLANE = "ring R = QQ[x, y];\nideal I = (x, y);\n"

CONE = "ring R = QQ[x, y, z] / (x^3 + y^3 + z^3);\nideal I = (x, y, z);\n"

PRINCIPAL = """
# principal ideal with an explicit filtration
ring R = QQ[x];
ideal I = (x);
module E = R^1;
filtration F of E { 0: [1]; 1: [x]; };
"""


@pytest.fixture
def plane_file(tmp_path: Path) -> Path:
    path = tmp_path / "plane.txt"
    path.write_text(PLANE, encoding="utf-8")
    return path


def test_parse_problem() -> None:
    spec = parse("ring R = FP<7>[x, y] / (y*x - x*y + x^3);\nideal I = (x, y);\nmodule E = R^2 / {[x, 0], [0, y]};")
    assert spec.field == "FP<7>"
    assert spec.variables == ["x", "y"]
    assert spec.relations == ["x^3"]
    assert spec.ideal == ["x", "y"]
    assert spec.modules[0].rank == 2
    assert spec.module("E").relations
    assert parse(print_spec(spec)) == spec


def test_print_spec_round_trips_filtrations() -> None:
    spec = parse(PRINCIPAL)
    assert spec.filtrations[0].levels == [[["1"]], [["x"]]]
    assert parse(print_spec(spec)) == spec


def test_unterminated_ideal_reports_end_of_input() -> None:
    with pytest.raises(ParseError) as info:
        parse("ring R = QQ[x, y];\nideal I = (x")
    assert (info.value.line, info.value.column) == (2, 13)
    assert info.value.expected == (")",)


def test_repeated_variable_is_rejected() -> None:
    with pytest.raises(ParseError):
        parse("ring R = QQ[x, x];")


def test_vector_of_the_wrong_length_is_rejected() -> None:
    with pytest.raises(ParseError) as info:
        parse("ring R = QQ[x];\nmodule E = R^2 / {[x]};")
    assert info.value.line == 2


def test_bad_field_is_rejected() -> None:
    with pytest.raises(ParseError):
        parse("ring R = FP<9>[x];")


def test_run_rees_on_the_plane() -> None:
    report = run(parse(PLANE), "rees")
    assert report.verdict
    assert report.entries[0]["kind"] == "rees-ideal"
    assert emit(report, TEXT).startswith("rees: PASS")


def test_run_extrees_with_a_filtration() -> None:
    report = run(parse(PRINCIPAL), "extrees", RunOptions())
    assert report.verdict
    modules = [e for e in report.entries if e["kind"] == "rees-module"]
    assert [m["filtration"] for m in modules] == ["F"]


def test_run_rejects_missing_ideal_and_unknown_command() -> None:
    spec = parse("ring R = QQ[x];")
    with pytest.raises(ValueError):
        run(spec, "rees")
    with pytest.raises(ValueError):
        run(spec, "blowdown")


def test_commands_needing_input() -> None:
    assert needs_input("rees", RunOptions())
    assert not needs_input("verify", RunOptions())
    assert not needs_input("semiorth", RunOptions(scenario="nilpotent"))


def test_emit_plain_report() -> None:
    report = Report("bound", None, "0..2", [{"kind": "twist", "ok": True}])
    text = emit(report, TEXT)
    assert text.splitlines()[:3] == ["bound: DONE", "window 0..2", "entries:"]
    assert "ok=yes" in text
    with pytest.raises(ValueError):
        emit(report, "yaml")


def test_main_exit_codes(tmp_path: Path, plane_file: Path, capsys) -> None:
    assert main(["rees", str(plane_file)]) == EXIT_OK
    bad = tmp_path / "bad.txt"
    bad.write_text("ring R = QQ[x];\nideal I = (x", encoding="utf-8")
    assert main(["rees", str(bad)]) == EXIT_PARSE
    assert "line 2" in capsys.readouterr().err


def test_json_output_is_deterministic(plane_file: Path, capsys) -> None:
    capsys.readouterr()
    assert main(["--json", "rees", str(plane_file)]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["--json", "rees", str(plane_file)]) == EXIT_OK
    assert capsys.readouterr().out == first
    assert json.loads(first)["command"] == "rees"


def test_cache_dir_is_filled(tmp_path: Path, plane_file: Path) -> None:
    cache = tmp_path / "cache"
    assert main(["--cache-dir", str(cache), "rees", str(plane_file)]) == EXIT_OK
    assert list(cache.glob("*.json"))


def test_semiorth_on_a_built_in_scenario(capsys) -> None:
    assert main(["semiorth", "--scenario", "nilpotent"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("semiorth: PASS")


def test_verify_suite() -> None:
    assert main(["verify", "--suite", "semiorth-nilpotent"]) == EXIT_OK


def test_bound_on_the_cone_finishes_within_ten_minutes() -> None:
    start = time.perf_counter()
    report = run(parse(CONE), "bound", RunOptions(limit=3))
    elapsed = time.perf_counter() - start
    assert elapsed < 600
    certificate = report.certificates[0]
    assert certificate["bound"] is not None and certificate["bound"] >= 1
    assert 0 in certificate["failures"]


@pytest.mark.slow
def test_cone_suite() -> None:
    assert main(["verify", "--suite", "cone"]) == EXIT_OK

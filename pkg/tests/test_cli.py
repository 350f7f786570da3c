import json
from importlib.resources import files

import pytest

from saito_hodge import cli, verify
from saito_hodge.cli import main
from saito_hodge.errors import StructureViolation

EXAMPLE_FORM = str(files("saito_hodge").joinpath("data/b2_example.form"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == ["A2", "B2", "G2", "A3", "B3", "B4", "D4"]
    assert "degrees=[2, 4, 6, 8]" in out


def test_catalog_show_round_trips_through_a_file(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "show", "G2")
    assert code == 0
    path = tmp_path / "g2.datum"
    path.write_text(out)
    code, again, _ = run(capsys, "catalog", "show", str(path))
    assert code == 0 and again == out


def test_basis_m0_is_the_coordinate_frame(capsys):
    code, out, _ = run(capsys, "basis", "--datum", "B2", "-m", "0")
    assert code == 0
    assert out.splitlines()[:2] == ["omega_1^(0) = dx", "omega_2^(0) = dy"]


def test_basis_json(capsys):
    code, out, _ = run(capsys, "basis", "--datum", "B2", "-m", "-3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["m"] == -3
    assert len(doc["omega"]) == 2 and len(doc["eta"]) == 2
    assert doc["variables"] == ["x", "y"]


def test_decompose_example_file(capsys):
    code, out, _ = run(capsys, "decompose", "--datum", "B2", "--form", EXAMPLE_FORM)
    assert code == 0
    assert "level -1: [-8*P1^3, 8/3*P1^2]" in out
    assert "level 0: [-4*P1, 2]" in out
    assert "residual: 0" in out


def test_decompose_json(capsys):
    code, out, _ = run(capsys, "decompose", "--datum", "B2", "--expr", "P2*dP1", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["residual_zero"]
    assert doc["levels"] == {"0": ["P1^2", "-1/6*P1"], "1": ["5/4", "0"]}


def test_input_errors_exit_2(capsys):
    code, _, err = run(capsys, "decompose", "--datum", "B2", "--expr", "dx + ∂x")
    assert code == 2 and "DomainError" in err
    code, _, err = run(capsys, "decompose", "--datum", "B2", "--expr", "dx")
    assert code == 2 and "NotInvariant" in err
    code, _, err = run(capsys, "basis", "--datum", "E8", "-m", "0")
    assert code == 2 and "UnknownType" in err
    code, _, err = run(capsys, "decompose", "--datum", "B2", "--form", "/nonexistent/form")
    assert code == 2


def test_relations_command(capsys):
    code, out, _ = run(capsys, "relations", "--datum", "B2", "--k", "2")
    assert code == 0
    assert "9/9 checks passed" in out
    assert "PASS  relations/commu/k=2" in out


def test_verify_b2_report_is_reproducible(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    code, out, _ = run(capsys, "verify", "--datum", "B2", "--k-min", "-2", "--k-max", "2", "--out", str(first))
    assert code == 0
    assert "checks passed" in out and "FAIL" not in out
    code, _, _ = run(capsys, "verify", "--datum", "B2", "--k-min", "-2", "--k-max", "2", "--quiet",
                     "--threads", "3", "--out", str(second))
    assert code == 0
    assert first.read_bytes() == second.read_bytes()
    doc = json.loads(first.read_text())
    assert doc["schema"] == "saito-hodge-report/1"
    assert doc["summary"]["failed"] == 0
    ids = [c["id"] for c in doc["checks"]]
    assert "hodge/golden-B2" in ids
    assert "matrices/det-R/m=-5" in ids and "matrices/det-R/m=5" in ids
    assert all("wall_time_s" not in c for c in doc["checks"])


def test_timings_are_opt_in(capsys, tmp_path):
    path = tmp_path / "t.json"
    run(capsys, "relations", "--datum", "A2", "--k", "0", "--quiet", "--timings", "--out", str(path))
    doc = json.loads(path.read_text())
    assert all("wall_time_s" in c for c in doc["checks"])


def test_failing_check_is_named_and_exit_is_1(capsys, monkeypatch):
    real = verify.build_checks

    def sabotage():
        raise StructureViolation("forced failure")

    def patched(*args, **kwargs):
        return real(*args, **kwargs) + [verify.Check("zz-forced", "test", sabotage)]

    monkeypatch.setattr(cli, "build_checks", patched)
    code, out, err = run(capsys, "relations", "--datum", "A2", "--k", "0")
    assert code == 1
    assert "FAIL  zz-forced  -- forced failure" in out
    assert "first failing check: zz-forced" in err


def test_version(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--version"])
    assert exit_info.value.code == 0
    assert capsys.readouterr().out.startswith("saito-hodge ")

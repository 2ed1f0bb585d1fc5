import json

import pytest
from click.testing import CliRunner

from sutured.cli import cli, run
from sutured.services import dividing_sets as ds
from sutured.services import gluing as gl
from sutured.services import surface_complex as sc
from sutured.utils import serialization as codec


@pytest.fixture
def runner():
    return CliRunner()


def test_contact_of_a_diagram(runner):
    result = runner.invoke(cli, ["contact", "--ring", "f2", "--diagram", "1-2,3-4"])
    assert result.exit_code == 0
    assert result.output.strip() == "1"


def test_contact_of_the_six_chord_diagram(runner):
    result = runner.invoke(cli, ["contact", "--diagram", "1-2,3-12,4-5,6-7,8-11,9-10"])
    assert result.output.strip() == "b3^b5^b7 + b3^b5^b9"


def test_contact_json_record(runner):
    result = runner.invoke(cli, ["contact", "--ring", "z", "--diagram", "1-4,2-3", "--json"])
    data = json.loads(result.output)
    assert data["value"] == "b1"
    assert data["grade"] == 1
    assert data["ring"] == "z"


def test_contact_from_a_file(runner, tmp_path):
    k = ds.chord_to_dividing_set(ds.ChordDiagram.parse("1-4,2-3"))
    path = tmp_path / "k.json"
    path.write_text(codec.dump_json(codec.dividing_set_to_dict(k)))
    result = runner.invoke(cli, ["contact", "--file", str(path)])
    assert result.exit_code == 0
    assert result.output.strip() == "b1"


def test_contact_rejects_a_crossing_diagram(runner):
    result = runner.invoke(cli, ["contact", "--diagram", "1-3,2-4"])
    assert result.exit_code == 2


def test_contact_needs_exactly_one_source(runner):
    assert runner.invoke(cli, ["contact"]).exit_code == 2


def test_enumerate_count(runner):
    result = runner.invoke(cli, ["enumerate", "3", "--count-only"])
    assert result.exit_code == 0
    assert result.output.strip() == "5"


def test_enumerate_lists_contact_elements(runner):
    result = runner.invoke(cli, ["enumerate", "2"])
    lines = result.output.strip().splitlines()
    assert lines[0] == "# N=2 diagrams=2"
    assert lines[1:] == ["1-2,3-4\t1", "1-4,2-3\tb1"]


def test_enumerate_rejects_zero(runner):
    assert runner.invoke(cli, ["enumerate", "0"]).exit_code == 2


def test_match_exit_codes(runner):
    same = runner.invoke(cli, ["match", "1-2,3-4", "1-2,3-4"])
    assert same.exit_code == 1
    assert "oracle=false wedge=false loops=2" in same.output
    other = runner.invoke(cli, ["match", "1-2,3-4", "1-4,2-3"])
    assert other.exit_code == 0
    assert "oracle=true wedge=true loops=1" in other.output


def test_bypass(runner):
    result = runner.invoke(cli, ["bypass", "1-4,2-3,5-6"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "# 1 bypass sites"
    assert lines[1].endswith("signs=1,1,1")


def test_torus(runner):
    tight = runner.invoke(cli, ["torus", "--n", "1", "--p", "1", "--q", "3", "--diagram", "1-2,3-4,5-6"])
    assert tight.exit_code == 0
    assert tight.output.startswith("pairing=1 tight=true")
    loose = runner.invoke(cli, ["torus", "--n", "1", "--p", "1", "--q", "3", "--diagram", "1-4,2-3,5-6"])
    assert loose.exit_code == 1
    bad = runner.invoke(cli, ["torus", "--n", "1", "--p", "2", "--q", "4", "--diagram", "1-2,3-4"])
    assert bad.exit_code == 2


def test_glue(runner, tmp_path):
    g = gl.disk_to_annulus_gluing(4)
    path = tmp_path / "rectangle.json"
    path.write_text(codec.dump_json({"surface": codec.surface_to_dict(g.host),
                                     "gluing": codec.gluing_to_dict(g)}))
    result = runner.invoke(cli, ["glue", str(path)])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert len(data["swallowed"]) == 1
    assert len(data["morphism"]) == 8


def test_glue_reports_violations(runner, tmp_path):
    disk = sc.standard_disk(3)
    path = tmp_path / "bad.json"
    path.write_text(codec.dump_json({"surface": codec.surface_to_dict(disk),
                                     "gluing": {"gamma": [0, 2], "gamma_prime": [4]}}))
    result = runner.invoke(cli, ["glue", str(path)])
    assert result.exit_code == 2


def test_decompose(runner, tmp_path):
    path = tmp_path / "annulus.json"
    path.write_text(codec.dump_json(codec.surface_to_dict(sc.standard_annulus())))
    result = runner.invoke(cli, ["decompose", str(path)])
    assert result.exit_code == 0
    assert result.output.startswith("# 2 arcs, pieces: F(2), F(2)")


def test_missing_file(runner, tmp_path):
    assert runner.invoke(cli, ["decompose", str(tmp_path / "nothing.json")]).exit_code == 2


def test_run_returns_exit_codes(capsys):
    assert run(["enumerate", "4", "--count-only"]) == 0
    assert capsys.readouterr().out.strip() == "14"
    assert run(["match", "1-2,3-4", "1-2,3-4"]) == 1
    assert run(["contact", "--diagram", "1-2,2-3"]) == 2
    assert run(["no-such-command"]) == 2


@pytest.mark.slow
def test_axioms_command(runner):
    result = runner.invoke(cli, ["axioms", "--seed", "0", "--max-n", "3", "--corpus-size", "16"])
    lines = result.output.strip().splitlines()
    assert lines[0].startswith("# seed=0")
    assert all(json.loads(line)["verdict"] for line in lines[1:])
    assert result.exit_code == 0


def test_decompose_single_suture_disk(runner, tmp_path):
    path = tmp_path / "disk1.json"
    path.write_text(codec.dump_json(codec.surface_to_dict(sc.standard_disk(1))))
    assert runner.invoke(cli, ["decompose", str(path)]).exit_code == 2
    result = runner.invoke(cli, ["decompose", str(path), "--keep-f1"])
    assert result.exit_code == 0
    assert result.output.startswith("# 0 arcs, pieces: F(1)")

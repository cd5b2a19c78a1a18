import json
from importlib import resources
from pathlib import Path

from adhm_blowup_kit import adhm, config_io
from adhm_blowup_kit.cli import main


def _data_path(name: str) -> str:
    return str(resources.files("adhm_blowup_kit") / "data" / name)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_line_bundle(capsys):
    code, out, _ = run_cli(capsys, "validate", _data_path("line_bundle.json"),
                           "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] is True
    assert doc["singular_points"] == []


def test_validate_hilbert(capsys):
    code, out, _ = run_cli(capsys, "validate", _data_path("hilbert_k2.json"),
                           "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] is True
    assert len(doc["singular_points"]) == 2
    assert doc["scan_complete"] is True


def test_validate_perturbed_d_fails(capsys, tmp_path):
    doc = json.loads(Path(_data_path("hilbert_k2.json")).read_text())
    doc["blocks"]["c"] = [["1/1", "1/1"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "validate", str(bad), "--json")
    assert code == 2
    rep = json.loads(out)
    assert rep["raw_residual_zero"] is False


def test_validate_unknown_field_is_usage_error(capsys, tmp_path):
    doc = json.loads(Path(_data_path("hilbert_k2.json")).read_text())
    doc["surprise"] = 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _out, err = run_cli(capsys, "validate", str(bad))
    assert code == 1
    assert "unknown fields" in err


def test_validate_bad_shape_is_usage_error(capsys, tmp_path):
    doc = json.loads(Path(_data_path("hilbert_k2.json")).read_text())
    doc["blocks"]["c"] = [["1/1"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _out, err = run_cli(capsys, "validate", str(bad))
    assert code == 1


def test_dims_command(capsys):
    code, out, _ = run_cli(capsys, "dims", "-r", "1", "-a", "-1", "-k", "0")
    assert code == 0
    assert "K = (0, 1)" in out
    assert "L = (1, 0)" in out
    assert "rank W = 3" in out
    code, _, err = run_cli(capsys, "dims", "-r", "1", "-a", "2", "-k", "-2")
    assert code == 2


def test_chi_command(capsys):
    code, out, _ = run_cli(capsys, "chi", "-p", "0", "-q")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run_cli(capsys, "chi", "-p", "-3", "-q", "2,1")
    assert code == 0 and out.strip() == "0"
    code, out, _ = run_cli(capsys, "chi", "-p", "-1", "-q", "", "-r", "2",
                           "-a", "", "-k", "3")
    assert code == 0 and out.strip() == "-3"


def test_sample_deterministic_bytes(capsys):
    code1, out1, _ = run_cli(capsys, "sample", "-r", "1", "-a", "", "-k", "2",
                             "--seed", "7")
    code2, out2, _ = run_cli(capsys, "sample", "-r", "1", "-a", "", "-k", "2",
                             "--seed", "7")
    assert code1 == code2 == 0
    assert out1 == out2
    cfg, seed, _ = config_io.config_from_json(json.loads(out1))
    assert seed == 7


def test_sample_failure_exit_code(capsys):
    code, _out, err = run_cli(capsys, "sample", "-r", "1", "-a", "-1", "-k", "2",
                              "--seed", "0")
    assert code == 3
    assert "sampling failed" in err


def test_sample_then_validate(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    code, _, _ = run_cli(capsys, "sample", "-r", "2", "-a", "1", "-k", "1",
                         "--seed", "5", "-o", str(path))
    assert code == 0
    code, out, _ = run_cli(capsys, "validate", str(path), "--json")
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_scan_command(capsys):
    code, out, _ = run_cli(capsys, "scan", _data_path("hilbert_k2.json"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["finite_rank_drop"] is True
    assert [p["z"] for p in doc["singular_points"]] == [
        ["0/1", "0/1", "1/1"], ["1/1", "1/1", "1/1"]]


def test_tangent_command(capsys):
    code, out, _ = run_cli(capsys, "tangent", "-r", "2", "-a", "", "-k", "1",
                           "--seed", "3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["empirical_moduli_dim"] == 4
    assert doc["abstract_formula"] == 4
    assert doc["section3_formula"] == 2
    assert doc["formulas_disagree"] is True
    assert doc["verdict"] == "matches_abstract"


def test_tangent_on_file(capsys):
    code, out, _ = run_cli(capsys, "tangent", _data_path("hilbert_k2.json"),
                           "--json")
    assert code == 0
    assert json.loads(out)["empirical_moduli_dim"] == 4


def test_orbit_command(capsys, tmp_path):
    cfg = adhm.sample_config(2, [1], 1, seed=5)
    from util import rand_group_element
    from random import Random
    el = rand_group_element(Random(3), cfg.dims)
    moved = adhm.act(el, cfg)
    p1, p2, pw = (tmp_path / n for n in ("c1.json", "c2.json", "w.json"))
    p1.write_text(config_io.dump_canonical(config_io.config_to_json(cfg)))
    p2.write_text(config_io.dump_canonical(config_io.config_to_json(moved)))
    pw.write_text(config_io.dump_canonical(config_io.group_element_to_json(el)))
    code, out, _ = run_cli(capsys, "orbit", "--witness", str(pw), str(p1), str(p2))
    assert code == 0 and "equivalent: True" in out
    # wrong witness: identity does not map cfg to moved
    ident = adhm.GroupElement.identity(cfg.dims)
    pw.write_text(config_io.dump_canonical(config_io.group_element_to_json(ident)))
    code, out, _ = run_cli(capsys, "orbit", "--witness", str(pw), str(p1), str(p2))
    assert code == 2 and "equivalent: False" in out
    code, out, _ = run_cli(capsys, "orbit", "--witness", str(pw), str(p1), str(p1))
    assert code == 0 and "equivalent: True" in out


def test_report_command(capsys):
    code, out, _ = run_cli(capsys, "report", _data_path("hilbert_k2.json"),
                           "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] is True
    # r = 1: both closed forms coincide at 2k = 4
    assert doc["tangent"]["empirical_moduli_dim"] == 4
    assert doc["tangent"]["verdict"] == "matches_both"


def test_validate_singular_a_exit_code(capsys, tmp_path):
    doc = json.loads(Path(_data_path("hilbert_k2.json")).read_text())
    doc["blocks"]["a00"] = [["0/1", "0/1"], ["0/1", "0/1"]]
    bad = tmp_path / "sing.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "validate", str(bad), "--json")
    assert code == 2
    rep = json.loads(out)
    assert rep["det_a_nonzero"] is False
    assert rep["raw_residual_zero"] is None


def test_tangent_rejects_invalid_file(capsys, tmp_path):
    doc = json.loads(Path(_data_path("hilbert_k2.json")).read_text())
    doc["blocks"]["c"] = [["1/1", "1/1"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _out, err = run_cli(capsys, "tangent", str(bad))
    assert code == 2
    assert "monad condition" in err


def test_scan_plan_flags(capsys):
    code, out, _ = run_cli(capsys, "scan", _data_path("hilbert_k2.json"),
                           "--json", "--samples", "5", "--exact-below", "0")
    assert code == 0
    doc = json.loads(out)
    # compression still finds and verifies both rational points
    assert len(doc["singular_points"]) == 2


def test_reports_are_byte_stable(capsys):
    outs = set()
    for _ in range(2):
        code, out, _ = run_cli(capsys, "validate", _data_path("hilbert_k2.json"),
                               "--json", "--seed", "11")
        assert code == 0
        outs.add(out)
    assert len(outs) == 1

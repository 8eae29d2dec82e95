import json

import pytest

from wtwist.cli import ConfigError, RunConfig, main, read_config, run


def test_rank_one_all_suites_pass(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "all", "--N", "1", "--no-timing", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema_version"] == 1
    assert rep["summary"]["fail"] == 0 and rep["summary"]["error"] == 0
    ids = {r["identity"] for r in rep["records"]}
    assert "rank one relation with T_2 = kappa T_1" in ids
    assert {r["suite"] for r in rep["records"]} == set(rep["config"]["suites"])


def test_byte_identical_reports(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "duality", "--N", "2", "--no-timing"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_quadratic_rank_two_reports_failure(tmp_path):
    out = tmp_path / "q.json"
    assert main(["verify", "quadratic", "--N", "2", "--out", str(out)]) == 1
    recs = json.loads(out.read_text())["records"]
    quad = [r for r in recs if r["identity"].startswith("quadratic (")]
    assert [r["identity"] for r in quad[:3]] == ["quadratic (i=1,j=1)", "quadratic (i=1,j=2)",
                                                 "quadratic (i=2,j=2)"]
    assert len(quad) == 9
    assert {r["status"] for r in quad if "i=2" in r["identity"]} == {"fail"}
    assert {r["status"] for r in quad if "i=1" in r["identity"]} == {"pass"}


def test_markdown_output(capsys):
    assert main(["verify", "coeff", "--format", "markdown", "--seed", "2/3,1/5"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# wtwist report") and "| coeff |" in out


def test_oracle_rank_one(tmp_path):
    assert main(["verify", "oracle", "--N", "1", "--fock-depth", "4", "--seed", "2/3,1/5",
                 "--out", str(tmp_path / "o.json")]) == 0


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# rank two\nN = 2\nseed = 2/3,1/5\nseed = 3/5,2/7\nsuite = coeff\nformat = json\n")
    rc = read_config(cfg)
    assert rc.N == 2 and len(rc.seeds) == 2 and rc.suites == ["coeff"]
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "c.json")]) == 0


@pytest.mark.parametrize("argv", [
    ["verify", "coeff", "--seed", "1,1/5"],
    ["verify", "coeff", "--seed", "2/3"],
    ["verify", "coeff", "--N", "0"],
    ["verify", "bogus"],
])
def test_configuration_errors(argv):
    assert main(argv) == 2


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        read_config(cfg)


def test_list(capsys):
    assert main(["verify", "screening", "--N", "1", "--list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert any("[control]" in line for line in lines)


def test_run_config_requires_seed():
    with pytest.raises(ConfigError):
        run(RunConfig(seeds=[]))

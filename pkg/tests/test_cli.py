import json

import pytest

from dedekind_periods.cli import _glue_negative_values, main
from dedekind_periods.config import Config, ConfigError, parse_complex, parse_family


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_glue_negative_values():
    assert _glue_negative_values(["--t", "-1i", "--a", "0"]) == ["--t=-1i", "--a", "0"]
    assert _glue_negative_values(["--q", "-3", "--depth", "2"]) == ["--q=-3", "--depth", "2"]


def test_parsers():
    assert parse_complex("-1i") == -1j and parse_complex("-i") == -1j and parse_complex("0.5-2i") == 0.5 - 2j
    assert parse_family("delta, 5.3") == [12, parse_family("53/10")[0]]
    assert parse_family("") == [] and parse_family("none") == []
    with pytest.raises(ConfigError):
        parse_family("-1")
    with pytest.raises(ConfigError):
        parse_complex("abc")


def test_forms_inspect(capsys):
    code, out, _ = run(capsys, "forms", "inspect", "12", "--format", "json")
    info = json.loads(out)
    assert code == 0 and info["alpha"] == 1 and info["v(sigma)"].startswith("1")
    assert info["leading_coefficients"][:3] == [1.0, -24.0, 252.0]
    code, out, _ = run(capsys, "forms", "inspect", "0.5", "--format", "json")
    assert abs(json.loads(out)["alpha"] - 1 / 24) < 1e-15


def test_forms_list(capsys):
    code, out, _ = run(capsys, "forms", "list", "--format", "csv")
    assert code == 0 and out.startswith("w,weight,alpha,form") and "\n12," in out


def test_verify_dedekind(capsys):
    code, out, _ = run(capsys, "verify", "dedekind", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["config"]["depth"] == 3


def test_verify_iterated_cocycle_suite(capsys):
    code, out, _ = run(capsys, "verify", "thm351", "--depth", "2", "--family", "12", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["form_hashes"].keys() == {"12"}
    assert len(rep["checks"]) == 23


def test_verify_empty_family(capsys):
    code, out, _ = run(capsys, "verify", "all", "--family", "")
    assert code == 0


def test_compute_period(capsys):
    code, out, _ = run(capsys, "compute", "period", "--w", "12", "--t", "-1i", "--format", "json")
    row = json.loads(out)[0]
    assert code == 0 and row["error"] < 1e-8
    from oracles import delta_period
    ref = delta_period(-1j)
    assert abs(complex(row["re"], row["im"]) - ref) <= 1e-9 * abs(ref)


def test_compute_iterate(capsys):
    code, out, _ = run(capsys, "compute", "iterate", "--a", "0", "--b", "inf", "--t", "-1i", "--depth", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["family"] == ["12", "53/10"]
    code, out, _ = run(capsys, "compute", "iterate", "--t", "-1i", "--depth", "1", "--family", "12")
    assert code == 0 and "error estimate" in out


def test_compute_reciprocity(capsys):
    code, out, _ = run(capsys, "compute", "reciprocity", "--p", "2", "--q", "1", "--depth", "1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "word,re,im" and any(l.startswith("scalar[w=12]") for l in lines)
    code, out, _ = run(capsys, "compute", "reciprocity", "--p", "1", "--q", "0", "--depth", "1")
    assert code == 0 and "endpoint" in out
    code, _, _ = run(capsys, "compute", "reciprocity", "--p", "2", "--q", "-1", "--depth", "1", "--convention", "boundary")
    assert code == 0


def test_compute_symbol(capsys):
    code, out, _ = run(capsys, "compute", "symbol", "--bound", "3", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "p,q,value"
    code, out, _ = run(capsys, "compute", "symbol", "--bound", "2", "--kind", "free", "--seed", "4", "--format", "json")
    assert code == 0 and all("value" in r for r in json.loads(out))


def test_schema(capsys):
    code, out, _ = run(capsys, "schema")
    schema = json.loads(out)
    assert code == 0
    _, out, _ = run(capsys, "verify", "dedekind", "--format", "json")
    rep = json.loads(out)
    assert set(rep) == set(schema)
    assert set(rep["checks"][0]) == set(schema["checks"][0])


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nosuch"],
        ["verify", "dedekind", "--depth", "9"],
        ["compute", "period", "--w", "12", "--t", "-1i", "--a", "abc"],
        ["compute", "reciprocity", "--p", "2", "--q", "4"],
        ["compute", "iterate", "--t", "-1i", "--family", ""],
        ["forms", "inspect", "-3"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_numerical_failure(capsys):
    code, _, err = run(capsys, "compute", "period", "--w", "12", "--t", "-1i", "--M", "2")
    assert code == 3 and "non-convergence" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\ndepth = 1\nfamily = 12\noutput = json\n")
    c = Config.load(cfg, depth=2)
    assert c.depth == 2 and c.weights == [12] and c.output == "json"
    code, out, _ = run(capsys, "verify", "thm32", "--config", str(cfg), "--depth", "2")
    rep = json.loads(out)
    assert code == 0 and rep["config"]["depth"] == 2 and rep["config"]["family"] == "12"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "verify", "dedekind", "--config", str(bad))[0] == 2
    assert run(capsys, "verify", "dedekind", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_cache_hit_identical(tmp_path, capsys):
    argv = ["compute", "period", "--w", "5.3", "--t", "0.2-0.5i", "--format", "json", "--cache-dir", str(tmp_path)]
    code1, first, _ = run(capsys, *argv)
    assert code1 == 0 and any(tmp_path.iterdir())
    code2, second, _ = run(capsys, *argv)
    assert code2 == 0 and first == second
    _, third, _ = run(capsys, *argv, "--no-cache")
    assert json.loads(third)[0]["re"] == pytest.approx(json.loads(first)[0]["re"], rel=1e-9)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "verify", "dedekind", "--format", "json", "-o", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["passed"]

import json
import subprocess
import sys

import pytest

from diagprod import __version__
from diagprod.cli import main, parse_range
from diagprod.config import ConfigError, atomic_write, derive_seed, load_config, options_for


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert __version__ in out and "schema 1" in out


def test_chartable_golden_ratio(capsys):
    code, out, _ = run(capsys, "chartable", "--n", "5")
    assert code == 0
    assert "1+1*sqrt(5)/2" in out and "1-1*sqrt(5)/2" in out


def test_bekka_window(capsys):
    code, out, _ = run(capsys, "bekka", "--k", "3")
    assert code == 0 and "{18..26}" in out
    code, out, _ = run(capsys, "bekka", "--k", "3", "--format", "json")
    assert json.loads(out)["3"] == list(range(18, 27))


def test_even_d_is_config_error(capsys):
    code, _, err = run(capsys, "wn", "--d", "5,8")
    assert code == 1 and "even" in err


def test_resource_cap_exit_code(capsys):
    code, _, err = run(capsys, "ball", "--group", "base", "--radius", "8", "--budget", "50")
    assert code == 2 and "resource cap" in err


def test_ball_output_and_relations(capsys, tmp_path):
    rel = tmp_path / "rel.json"
    code, out, _ = run(capsys, "ball", "--group", "level", "--d", "5,7", "--radius", "3", "--relations", str(rel))
    assert code == 0
    assert out.splitlines() == ["radius,size,new_elements", "0,1,1", "1,5,4", "2,15,10", "3,34,19"]
    assert json.loads(rel.read_text())["radius"] == 3


def test_out_file_is_written(capsys, tmp_path):
    target = tmp_path / "sub" / "table.csv"
    code, out, _ = run(capsys, "chartable", "--n", "4", "--group", "sym", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("partition,")
    assert [p.name for p in target.parent.iterdir()] == ["table.csv"]


@pytest.mark.parametrize(
    "argv",
    [
        ["limitprod", "--trials", "3", "--seed", "11"],
        ["stability", "--trials", "2", "--eps", "0.05", "--seed", "5", "--radius", "2"],
        ["null", "--N", "200"],
        ["growth", "--base", "lamplighter", "--d", "7,11,13", "--r", "1,3,4", "--levels", "1", "--n-max", "3"],
    ],
)
def test_deterministic_outputs(capsys, argv):
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a[0] == 0 and a[1] == b[1]


def test_seed_changes_random_output(capsys):
    a = run(capsys, "limitprod", "--trials", "3", "--seed", "1")[1]
    b = run(capsys, "limitprod", "--trials", "3", "--seed", "2")[1]
    assert a != b


def test_toml_config(capsys, tmp_path):
    cfg = tmp_path / "exp.toml"
    cfg.write_text('schema = 1\nd = "5,7,9"\n[chabauty]\nhorizon = 8\n')
    code, out, _ = run(capsys, "--config", str(cfg), "chabauty")
    assert code == 0
    assert out.splitlines() == ["m,d,radius", "1,5,2", "2,7,3", "3,9,4"]
    # command-line flags still override the file
    code, out, _ = run(capsys, "--config", str(cfg), "chabauty", "--horizon", "3")
    assert out.splitlines()[-1] == "3,9,3"


def test_json_config_and_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({"bekka": {"k": "1"}}))
    code, out, _ = run(capsys, "--config", str(cfg), "bekka")
    assert code == 0 and out.startswith("k=1:")
    cfg.write_text(json.dumps({"bekka": {"colour": "red"}}))
    code, _, err = run(capsys, "--config", str(cfg), "bekka")
    assert code == 1 and "colour" in err


def test_bad_config_files(tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    bad.write_text(json.dumps({"schema": 9}))
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")


def test_options_for_precedence():
    cfg = {"seed": 1, "stability": {"seed": 2}, "null": {"N": 5}}
    assert options_for(cfg, "stability", {"stability", "null"}) == {"seed": 2}


def test_atomic_write_replaces(tmp_path):
    p = tmp_path / "f.txt"
    atomic_write(p, "one")
    atomic_write(p, "two")
    assert p.read_text() == "two"
    atomic_write(tmp_path / "b.bin", b"\x00\x01")
    assert (tmp_path / "b.bin").read_bytes() == b"\x00\x01"


def test_derive_seed():
    import numpy as np

    assert derive_seed(0, 3) == derive_seed(0, 3)
    assert derive_seed(0, 3) != derive_seed(0, 4)
    assert derive_seed(7, 2) == int(np.random.SeedSequence([7, 2]).generate_state(1)[0])


def test_parse_range():
    assert parse_range("7-10") == [7, 8, 9, 10]
    assert parse_range("5,7,9") == [5, 7, 9]


def test_assert_modes(capsys):
    code, _, err = run(capsys, "bekka", "--k", "3", "--assert")
    assert code == 0 and "[PASS]" in err
    code, _, err = run(capsys, "traces", "--assert")
    assert code == 0


def test_traces_output(capsys):
    code, out, _ = run(capsys, "traces", "--n", "5")
    data = json.loads(out)
    assert code == 0 and data["order"] == 60 and all(r["psd"] for r in data["characters"])


def test_pik_domain_error(capsys):
    code, _, err = run(capsys, "pik", "--word", "tsTS", "--k", "1")
    assert code == 1 and "kernel" in err


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--f", "linear:1", "--horizon", "3")
    data = json.loads(out)
    assert code == 0 and data["violations"] == [] and data["d"] == [5, 17, 47]


def test_wn_output(capsys):
    code, out, _ = run(capsys, "wn", "--base", "lamplighter", "--d", "7,11,13", "--r", "1,3,4", "--R", "8")
    data = json.loads(out)
    assert code == 0 and data["found"] and data["verified"] and data["dimension_bound"] == 6


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diagprod", "bekka", "--k", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("k=1:")


def test_usage_errors_exit_as_config_errors():
    with pytest.raises(SystemExit) as exc:
        main(["ball", "--radius", "x"])
    assert exc.value.code == 1


def test_assert_only_offered_where_checks_exist(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["ball", "--assert"])
    assert exc.value.code == 1

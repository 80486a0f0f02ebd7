import json
import shutil
import subprocess
import sys

import jsonschema
import pytest

from nymanlab import __version__
from nymanlab.cli import main, read_config
from nymanlab.errors import InputFormatError
from nymanlab.reporting import load_schema


def run_cli(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def report(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    return doc


def test_zeta_eval(capsys):
    doc = report(capsys, "zeta-eval", "--s", "2")
    assert doc["result"]["value"] == [1.6449340668482264, 0.0]
    assert doc["manifest"]["command"] == "zeta-eval"
    assert doc["manifest"]["tool_version"] == __version__
    assert "wall_time" not in doc["manifest"]


def test_complex_argument_forms(capsys):
    a = report(capsys, "zeta-eval", "--s", "0.5+14i")["result"]["value"]
    b = report(capsys, "zeta-eval", "--s", "0.5+14j")["result"]["value"]
    assert a == b


def test_lfunc_catalan(capsys):
    doc = report(capsys, "lfunc-eval", "--s", "2", "--q", "4", "--index", "1")
    assert abs(doc["result"]["value"][0] - 0.915965594177219) < 1e-12


@pytest.mark.parametrize("kernel", ["rho", "A", "frac"])
def test_mellin_check(capsys, kernel):
    doc = report(capsys, "mellin-check", "--kernel", kernel, "--alpha", "0.3",
                 "--s", "2", "0.75+3j", "1")
    rows = doc["result"]["rows"]
    assert len(rows) == 3 and all(r["pass"] for r in rows)


def test_nb_distance_csv_header(capsys):
    code, out, _ = run_cli(capsys, "nb-distance", "--N", "1,2", "--eps", "1e-4", "--format", "csv")
    assert code == 0
    lines = out.split("\r\n")
    assert lines[0] == "N,d_squared,d_squared_ridge,condition_estimate,entry_error_bound"
    assert lines[1].startswith("1,0.3069")


def test_bsy_small_window(capsys):
    doc = report(capsys, "bsy", "--T", "40")
    r = doc["result"]
    assert r["verdict"] == "pass" and abs(r["value"]) <= r["tail_bound"]
    assert len(doc["manifest"]["input_digests"]) == 1


def test_bsy_missing_ordinate_exit(capsys, tmp_path, zero_table):
    p = tmp_path / "z.txt"
    p.write_text("\n".join(str(g) for i, g in enumerate(zero_table[:8]) if i != 3) + "\n")
    code, _, err = run_cli(capsys, "bsy", "--T", "40", "--zeros-file", str(p))
    assert code == 3 and "IncompleteTableError" in err


def test_zero_scan(capsys):
    doc = report(capsys, "zero-scan", "--rect", "0.05,0.95,1,30", "--ny", "2", "--threads", "2")
    assert doc["result"]["count"] == 3
    assert [r["count"] for r in doc["result"]["rectangles"]] == [1, 2]


def test_blaschke_and_scatter(capsys):
    doc = report(capsys, "blaschke", "--zeros", "0.7+5i", "--s", "1", "0.5+3i")
    mods = [r["modulus"] for r in doc["result"]["rows"]]
    assert abs(mods[0] - 0.9921227603460694) < 1e-15 and abs(mods[1] - 1) < 1e-12
    doc = report(capsys, "scatter-check", "--zeros", "empty", "--mode", "halfplane")
    assert doc["result"]["verdict"] == "causal"
    assert any("lambda" in a for a in doc["result"]["assumptions"])
    doc = report(capsys, "scatter-check", "--zeros", "0.7+5i")
    assert doc["result"]["verdict"] == "violated" and doc["result"]["witness_modulus"] > 1


def test_scatter_scan(capsys):
    doc = report(capsys, "scatter-check", "--scan", "0.55,0.95,1,10")
    assert doc["result"]["verdict"] == "causal"
    assert doc["result"]["scanned_region"]["t_max"] == 10.0


def test_ff_check(capsys):
    doc = report(capsys, "ff-check", "--q", "5", "--a", "2")
    assert doc["result"]["verdict"] == "on_circle" and doc["result"]["causality"] == "causal"
    doc = report(capsys, "ff-check", "--q", "4", "--coeffs", "1,-5,4", "--label", "synthetic")
    assert doc["result"]["verdict"] == "violated"
    code, _, err = run_cli(capsys, "ff-check", "--q", "4", "--coeffs", "1,-5,4")
    assert code == 2 and "Hasse" in err


def test_ff_corpus_csv(capsys):
    code, out, _ = run_cli(capsys, "ff-check", "--corpus", "--format", "csv")
    assert code == 0
    rows = [line.split(",") for line in out.strip().split("\r\n")]
    head, body = rows[0], rows[1:]
    assert head[:4] == ["q", "label", "coefficients", "verdict"]
    for r in body:
        assert (r[1], r[3]) in (("curve", "on_circle"), ("synthetic", "violated"))


def test_selftest(capsys):
    doc = report(capsys, "selftest")
    assert doc["result"]["verdict"] == "pass"


# --- exit codes ---------------------------------------------------------------------

def test_usage_errors(capsys):
    assert run_cli(capsys, "zeta-eval", "--bogus", "1")[0] == 64
    assert run_cli(capsys, "no-such-command")[0] == 64
    assert run_cli(capsys)[0] == 64
    assert run_cli(capsys, "zeta-eval")[0] == 64
    assert run_cli(capsys, "zeta-eval", "--s", "abc")[0] == 64


def test_domain_error_exit(capsys):
    code, _, err = run_cli(capsys, "zeta-eval", "--s", "1")
    assert code == 2 and "DomainError" in err


def test_inconclusive_exit(capsys):
    code, _, err = run_cli(capsys, "zero-scan", "--rect", "0.4,0.6,14.134725141734693,15")
    assert code == 3 and "BoundaryZeroError" in err


def test_io_exit(capsys, tmp_path):
    assert run_cli(capsys, "bsy", "--zeros-file", str(tmp_path / "none.txt"))[0] == 4
    assert run_cli(capsys, "zeta-eval", "--s", "2", "--out", str(tmp_path / "a" / "b.json"))[0] == 4
    bad = tmp_path / "z.txt"
    bad.write_text("14.1\n13.0\n")
    code, _, err = run_cli(capsys, "bsy", "--T", "20", "--zeros-file", str(bad))
    assert code == 4 and "line 2" in err


def test_help_and_version(capsys):
    assert run_cli(capsys, "--version")[1].strip() == f"nyman-lab {__version__}"
    assert main(["--help"]) == 0


# --- config, determinism, replay ----------------------------------------------------------

def test_read_config(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("# comment\n[run]\nN = \"1,2\"\neps = 1e-4\n\n")
    assert read_config(p) == {"N": "1,2", "eps": "1e-4"}
    p.write_text("just words\n")
    with pytest.raises(InputFormatError, match="line 1"):
        read_config(p)


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("s = 3\n")
    doc = report(capsys, "zeta-eval", "--config", str(cfg))
    assert doc["result"]["s"] == [3.0, 0.0]
    assert str(cfg) in doc["manifest"]["input_digests"]
    doc = report(capsys, "zeta-eval", "--config", str(cfg), "--s", "2")
    assert doc["result"]["s"] == [2.0, 0.0]
    cfg.write_text("nonsense = 3\n")
    assert run_cli(capsys, "zeta-eval", "--config", str(cfg))[0] == 4


def test_byte_identical_reruns(capsys, tmp_path):
    for argv in (["nb-distance", "--N", "1,3", "--eps", "1e-4"],
                 ["zero-scan", "--rect", "0.55,0.95,1,12", "--nx", "2", "--threads", "2"],
                 ["ff-check", "--corpus", "--format", "csv"]):
        a = run_cli(capsys, *argv)[1]
        b = run_cli(capsys, *argv)[1]
        assert a == b and a


def test_timing_is_opt_in(capsys):
    doc = report(capsys, "zeta-eval", "--s", "2", "--timing")
    assert doc["manifest"]["wall_time"] >= 0
    assert "--timing" not in doc["manifest"]["argv"]


def test_replay_round_trip(capsys, tmp_path):
    zeros = tmp_path / "z.txt"
    shutil.copy(__import__("nymanlab.reporting", fromlist=["x"]).default_zeros_path(), zeros)
    out = tmp_path / "r.json"
    again = tmp_path / "r2.json"
    assert main(["bsy", "--T", "30", "--zeros-file", str(zeros), "--out", str(out)]) == 0
    assert main(["--replay", str(out), "--replay-out", str(again)]) == 0
    assert out.read_bytes() == again.read_bytes()
    # a changed input invalidates the manifest
    zeros.write_text("14.134725141734693\n")
    assert main(["--replay", str(out)]) == 4
    assert main(["--replay", str(tmp_path / "missing.json")]) == 4
    assert main(["--replay", str(out), "zeta-eval"]) == 64
    capsys.readouterr()


def test_entry_point_installed():
    exe = shutil.which("nyman-lab")
    cmd = [exe] if exe else [sys.executable, "-m", "nymanlab.cli"]
    r = subprocess.run(cmd + ["zeta-eval", "--s", "2"], capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["result"]["value"] == [1.6449340668482264, 0.0]

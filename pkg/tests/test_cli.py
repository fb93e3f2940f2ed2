import json
import shutil
import subprocess
from pathlib import Path

import pytest

from fukaya_torus.cli import PRECISION_ENV, main

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def run(args, tmp_path, capsys):
    out = tmp_path / "out.json"
    status = main(args + ["--output", str(out)])
    body = json.loads(out.read_text()) if out.exists() else None
    return status, body


def test_grading_table_matches_example(tmp_path, capsys):
    status, body = run(["grading-table", "--n", "1", "--k-range", "-3..3"], tmp_path, capsys)
    assert status == 0 and body["schema"] == "fukaya-torus/grading-table/1"
    for row in body["rows"]:
        assert row["degree"] == (0 if row["k1"] > row["k0"] else 1)
    assert len(body["rows"]) == 42


def test_mu_matches_library(tmp_path, capsys):
    from fukaya_torus import TorusAmbient, mu_with_report
    from fukaya_torus.cli import parse_inputs
    from fukaya_torus.flat_torus import parse_branes

    status, body = run(["mu", "--k", "2", "--branes", str(DATA / "branes_mu2.json"), "--inputs", str(DATA / "inputs_mu2.json")],
                       tmp_path, capsys)
    assert status == 0
    data = json.loads((DATA / "branes_mu2.json").read_text())
    branes = parse_branes(data)
    ins = parse_inputs(json.loads((DATA / "inputs_mu2.json").read_text()), branes)
    rep = mu_with_report(2, branes, ins, TorusAmbient.from_dict(data["ambient"]))
    assert body["tail_bound"] == rep.tail_bound and body["classes_used"] == rep.classes_used
    for entry in body["output"]:
        from fractions import Fraction

        pt = ((Fraction(entry["generator"][0]), Fraction(entry["generator"][1])),)
        assert complex(entry["coefficient"]["re"], entry["coefficient"]["im"]) == rep.element[pt]


def test_outputs_byte_identical_across_threads(tmp_path):
    outs = []
    for threads in ("1", "3"):
        path = tmp_path / f"o{threads}.json"
        main(["mu", "--k", "2", "--branes", str(DATA / "branes_mu2.json"), "--inputs", str(DATA / "inputs_mu2.json"),
              "--threads", threads, "--output", str(path)])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_manifest_contents(tmp_path):
    man = tmp_path / "m.json"
    main(["assoc", "--branes", str(DATA / "branes_assoc.json"), "--inputs", str(DATA / "inputs_assoc.json"),
          "--output", str(tmp_path / "o.json"), "--manifest", str(man)])
    m = json.loads(man.read_text())
    assert m["schema"] == "fukaya-torus/manifest/1"
    assert set(m) >= {"tool_version", "config", "tolerances", "precision", "wall_clock_s", "counts", "inputs"}
    assert len(m["inputs"]["branes"]["sha256"]) == 64


def test_precision_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv(PRECISION_ENV, "30")
    man = tmp_path / "m.json"
    main(["mu", "--k", "2", "--branes", str(DATA / "branes_mu2.json"), "--inputs", str(DATA / "inputs_mu2.json"),
          "--output", str(tmp_path / "o.json"), "--manifest", str(man)])
    assert json.loads(man.read_text())["precision"] == {"mode": "mpmath", "digits": 30}


def test_isotopy_exit_codes(tmp_path, capsys):
    scen = str(DATA / "isotopy_translation.json")
    assert run(["isotopy", "--scenario", scen], tmp_path, capsys)[0] == 0
    status, body = run(["isotopy", "--scenario", scen, "--flux", "constant"], tmp_path, capsys)
    assert status == 1 and body["passed"] is False
    assert run(["isotopy", "--scenario", str(DATA / "isotopy_loop.json")], tmp_path, capsys)[0] == 0


def test_malformed_input_exit_2(tmp_path, capsys):
    status, body = run(["hom", "--branes", str(DATA / "bad_branes.json")], tmp_path, capsys)
    assert status == 2 and body is None
    assert "branes[1]" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["hom", "--branes", str(bad)]) == 2
    assert main(["grading-table", "--k-range", "1-3"]) == 2
    assert main(["nonsense"]) == 2


def test_hom_and_circle(tmp_path, capsys):
    status, body = run(["hom", "--branes", str(DATA / "branes_hom.json")], tmp_path, capsys)
    assert status == 0 and body["counts_by_degree"] == {"0": 3}
    status, body = run(["circle"], tmp_path, capsys)
    assert status == 0 and body["rel_error"] < 1e-6


def test_stokes_subcommands(tmp_path, capsys):
    status, body = run(["stokes", "--levels", "3", "--quiet"], tmp_path, capsys)
    assert status == 0 and body["homotopy_order"] >= 2
    status, body = run(["stokes", "--counterexample", "--levels", "2"], tmp_path, capsys)
    assert status == 0 and body["tilted_min_difference"] > 1e-3


@pytest.mark.skipif(shutil.which("fukaya-torus") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["fukaya-torus", "grading-table", "--n", "2", "--k-range", "-1..1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 2

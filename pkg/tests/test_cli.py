import json
import math
import subprocess
import sys

import pytest

from isocomm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bracket_kolmogorov_and_alpha_beta(capsys):
    kolm = ["-y + 2*x*y - x^2*y", "x - x^2 + y^2 - x*y^2", "x - x^2 + y^2 - x*y^2", "y - 2*x*y - y^3"]
    assert run(capsys, "bracket", *kolm)[0] == 0
    ab = ["-y - 2*x*y + x^2*(1 + x + 2*y)", "x + x^2 - y^2 + x*y*(1 + x + 2*y)",
          "x + x^2 - y^2 + x*y*(1 + x + 2*y)", "y + 2*x*y + y^2*(1 + x + 2*y)"]
    assert run(capsys, "bracket", *ab)[0] == 0


def test_bracket_nonzero(capsys):
    code, out, _ = run(capsys, "bracket", "-y", "x", "x", "0")
    assert code == 1
    assert "(y, x)" in out


def test_bracket_parse_error(capsys):
    code, _, err = run(capsys, "bracket", "x + + y", "1", "2", "3")
    assert code == 2 and "offset 4" in err


def test_every_catalog_partner_brackets_to_zero(capsys):
    from isocomm.catalog import build_catalog
    for e in build_catalog():
        if e.claimed_partner is not None:
            assert run(capsys, "bracket", "--catalog", e.id)[0] == 0, e.id


def test_bracket_json(capsys):
    code, out, _ = run(capsys, "--json", "bracket", "--catalog", "kukles")
    assert code == 0
    assert json.loads(out) == {"bracket": {"p": "0", "q": "0"}, "commute": True}


def test_centralizer_json_schema(capsys):
    code, out, _ = run(capsys, "centralizer", "-y", "x + x^3*y + x*y^3", "--degree", "4", "--json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"degree_bound", "dimension", "basis"}
    assert data["degree_bound"] == 4 and data["dimension"] == 1
    assert set(data["basis"][0]) == {"p", "q"}


def test_centralizer_kukles(capsys):
    code, out, _ = run(capsys, "centralizer", "--catalog", "kukles", "--degree", "4")
    assert code == 0 and "dimension 2" in out


def test_centralizer_zero_field(capsys):
    code, _, err = run(capsys, "centralizer", "0", "0")
    assert code == 2 and "ZeroField" in err


def test_gen_abel(capsys):
    code, out, _ = run(capsys, "gen", "--abel", "0", "1")
    assert code == 0
    assert "y' = x + 3*x*y + 3*x*y^2 + x*y^3" in out
    assert "partner" in out


def test_gen_abel_json_rationals(capsys):
    code, out, _ = run(capsys, "--json", "gen", "--abel", "3/2", "x")
    data = json.loads(out)
    assert data["a"] == "3/2"
    code, out, _ = run(capsys, "--json", "gen", "--abel", "2", "0")
    assert json.loads(out)["a"] == "2/1"


def test_gen_lienard(capsys):
    code, out, _ = run(capsys, "gen", "--lienard", "x")
    assert code == 0 and "y' = x + x*y + 1/9*x^3" in out
    code, _, err = run(capsys, "gen", "--lienard", "x^2")
    assert code == 3 and "NotOdd" in err


def test_gen_hamiltonian(capsys):
    code, out, _ = run(capsys, "--json", "gen", "--hamiltonian", "x", "y + x^2")
    data = json.loads(out)
    assert data["system"] == {"p": "-y - x^2", "q": "x + 2*x*y + 2*x^3"}
    assert data["partner"] == {"p": "x", "q": "y - x^2"}
    code, _, err = run(capsys, "gen", "--hamiltonian", "2*x", "y")
    assert code == 3 and "NotAreaPreserving" in err


def test_gen_homog_and_bad_rational(capsys):
    code, out, _ = run(capsys, "gen", "--homog", "2")
    assert code == 0 and "y' = x + x^5*y + x^3*y^3" in out
    assert run(capsys, "gen", "--homog", "0")[0] == 3
    assert run(capsys, "gen", "--abel", "one", "x")[0] == 2


def test_probe_homog_m2(capsys, tmp_path):
    csv = tmp_path / "p.csv"
    code, out, _ = run(capsys, "probe", "--catalog", "homog-m2",
                       "--amplitudes", "0.1,0.2,0.3,0.4,0.5", "--csv", str(csv))
    assert code == 0
    lines = csv.read_bytes().decode().split("\n")
    assert lines[0] == "amplitude,period" and lines[-1] == ""
    periods = [float(l.split(",")[1]) for l in lines[1:-1]]
    assert all(abs(p - 2 * math.pi) < 1e-6 for p in periods)


def test_probe_non_isochronous(capsys):
    code, out, _ = run(capsys, "probe", "-y", "x + x*y", "--amplitudes", "0.1,0.2,0.3,0.4,0.5")
    assert code == 1 and "strictly increasing" in out


def test_probe_oscillator_and_threshold(capsys):
    code, out, _ = run(capsys, "--json", "probe", "-y", "x")
    data = json.loads(out)
    assert code == 0 and all(abs(r["period"] - 2 * math.pi) < 1e-9 for r in data["rows"])
    assert run(capsys, "probe", "--catalog", "damped-x", "--threshold", "1")[0] == 0


def test_probe_not_closed(capsys):
    code, _, err = run(capsys, "probe", "-y", "x + y^2", "--amplitudes", "2", "--t-max", "20")
    assert code == 4


def test_probe_negative_center(capsys):
    code, out, _ = run(capsys, "probe", "--catalog", "holomorphic-iz(1-z^2)", "--center", "-1", "0",
                       "--amplitudes", "0.1,0.2")
    assert code == 0 and "3.14159265" in out


def test_portrait_files(capsys, tmp_path):
    csv, svg = tmp_path / "o.csv", tmp_path / "o.svg"
    code, out, _ = run(capsys, "portrait", "--catalog", "holomorphic-iz(1-z^2)", "--grid", "-2:2:-2:2:9",
                       "--csv", str(csv), "--svg", str(svg), "--t-max", "4")
    assert code == 0
    assert csv.read_text().startswith("t,x,y\n")
    text = svg.read_text()
    assert text.count("<circle") == 3 and text.count("<polyline") >= 1


def test_portrait_empty_grid(capsys, tmp_path):
    csv, svg = tmp_path / "o.csv", tmp_path / "o.svg"
    assert run(capsys, "portrait", "-y", "x", "--grid", "-1:1:-1:1:0", "--csv", str(csv), "--svg", str(svg))[0] == 0
    assert csv.read_text() == "t,x,y\n"
    assert svg.read_text().startswith("<svg")


def test_portrait_io_error(capsys, tmp_path):
    target = tmp_path / "missing" / "o.csv"
    assert run(capsys, "portrait", "-y", "x", "--grid", "-1:1:-1:1:1", "--csv", str(target))[0] == 5


def test_portrait_bad_grid(capsys):
    assert run(capsys, "portrait", "-y", "x", "--grid", "1:2")[0] == 2


def test_defect_defaults(capsys):
    code, out, _ = run(capsys, "--json", "defect")
    data = json.loads(out)
    assert code == 0
    assert data["defect"] == pytest.approx(1.6, abs=1e-5)


def test_verify_paper_json(capsys):
    code, out, _ = run(capsys, "verify-paper", "--json")
    rows = json.loads(out)
    assert code == 0
    assert all(set(r) == {"claim", "citation", "status", "metric"} for r in rows)
    assert all(r["status"] == "pass" for r in rows)


def test_outputs_are_byte_stable(capsys, tmp_path):
    outs = []
    for k in range(2):
        csv = tmp_path / f"{k}.csv"
        run(capsys, "portrait", "--catalog", "homog-m1", "--grid", "-1:1:-1:1:4", "--csv", str(csv))
        outs.append(csv.read_bytes())
        outs.append(run(capsys, "--json", "centralizer", "--catalog", "kukles", "--degree", "4")[1])
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_module_entry_point_and_help():
    proc = subprocess.run([sys.executable, "-m", "isocomm", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "factor := '-' factor" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "isocomm", "bracket", "-y", "x", "x", "y"],
                          capture_output=True, text=True)
    assert proc.returncode == 0

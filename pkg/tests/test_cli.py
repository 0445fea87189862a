from __future__ import annotations

import json

import pytest

from gmbif.cli import main, parse_seeds
from gmbif.errors import PipelineGuardError
from gmbif.model import Params

FIG5 = ["--c", "0.3", "--beta", "0.5", "--b", "0.0075", "--d", "0.4"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_equilibria_json(capsys):
    code, out, _ = run(capsys, "equilibria", *FIG5)
    assert code == 0
    rows = json.loads(out)["equilibria"]
    assert [r["label"] for r in rows] == ["E0", "E2", "E3"]
    assert rows[1]["u"] == pytest.approx(0.15)


def test_equilibria_csv_header(capsys):
    code, out, _ = run(capsys, "equilibria", *FIG5, "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "label,u,v,delta,kind"
    assert len(lines) == 4


def test_negative_b(capsys):
    code, _, err = run(capsys, "equilibria", "--c", "0.3", "--beta", "0.5", "--b", "-1", "--d", "0.4")
    assert code == 2
    assert "b must be positive" in err


def test_missing_and_bad_input(capsys):
    assert run(capsys, "equilibria", "--c", "0.3")[0] == 2
    assert run(capsys, "equilibria", *FIG5[:-1], "x")[0] == 2
    assert run(capsys, "equilibria", *FIG5, "--format", "svg")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_normal_form_autoloc(capsys):
    code, out, _ = run(capsys, "normal-form", "--c", "0.4", "--beta", "0.5477")
    assert code == 0
    cusp = json.loads(out)["cusp"]
    assert cusp["f20"] == pytest.approx(-0.73032, abs=1e-5)
    assert cusp["ledger"]["stages"][0]["stage"] == "translated"


def test_normal_form_jet_order(capsys):
    _, a, _ = run(capsys, "normal-form", "--c", "0.4", "--beta", "0.5477")
    _, b, _ = run(capsys, "normal-form", "--c", "0.4", "--beta", "0.5477", "--jet-order", "6")
    a, b = json.loads(a)["cusp"], json.loads(b)["cusp"]
    for k in ("f20", "f40", "f31"):
        assert a[k] == pytest.approx(b[k], rel=1e-8, abs=1e-8)


def test_normal_form_epsilon(capsys):
    code, out, _ = run(capsys, "normal-form", "--c", "0.4", "--beta", "0.5477", "--epsilon", "0,0,0")
    assert code == 0
    unf = json.loads(out)["unfolding"]
    assert max(abs(x) for x in unf["l"][:3]) < 1e-8
    assert unf["jac_det"] is not None
    assert run(capsys, "normal-form", "--c", "0.4", "--beta", "0.5477", "--epsilon", "0,0")[0] == 2


def test_guard_exit_code(capsys, monkeypatch):
    import gmbif.cli as cli

    def boom(*a, **k):
        err = PipelineGuardError("hypernormal", "e20", 0.0, 1e-10)
        from gmbif.bifurcation.reports import NormalFormReport

        err.report = NormalFormReport()
        raise err

    monkeypatch.setattr(cli, "cusp_report", boom)
    code, out, err = run(capsys, "normal-form", "--c", "0.4", "--beta", "0.5477")
    assert code == 3
    assert "hypernormal" in err
    assert json.loads(out)["stage"] == "hypernormal"


def test_saddle_node_and_hopf(capsys):
    code, out, _ = run(capsys, "saddle-node", "--c", "0.3", "--beta", "0.5", "--d", "0.4")
    assert code == 0
    assert json.loads(out)["saddle_node"]["wf_b"] == pytest.approx(-1.5)
    code, out, _ = run(capsys, "hopf", "--c", "0.4", "--beta", "0.6", "--b", "0.0125")
    assert code == 0
    assert json.loads(out)["hopf"]["transversality"] == -1


def test_scan_csv(capsys):
    code, out, _ = run(
        capsys, "scan", "--c", "0.4", "--beta", "0.6", "--b", "0.005:0.02", "--d", "0.3:0.5", "--resolution", "3", "--format", "csv"
    )
    assert code == 0
    assert len(out.splitlines()) == 10


def test_portrait_files(capsys, tmp_path):
    out_dir = tmp_path / "p"
    code, out, _ = run(
        capsys, "portrait", "--c", "0.3", "--beta", "0.6", "--b", "0.0125", "--d", "0.5",
        "--seeds", "ring:3", "--t-max", "20", "--out", str(out_dir),
    )
    assert code == 0
    names = sorted(f.name for f in out_dir.iterdir())
    assert names.count("portrait.svg") == 1
    assert len([n for n in names if n.endswith(".csv")]) == 6
    assert (out_dir / "traj_000_fw.csv").read_text().startswith("t,u,v\n")
    assert len(json.loads(out)["trajectories"]) == 6


def test_portrait_zero_seeds(capsys, tmp_path):
    code, _, err = run(capsys, "portrait", *FIG5, "--seeds", "ring:0", "--out", str(tmp_path))
    assert code == 2 and "no seeds" in err


def test_seed_parsing():
    p = Params(c=0.3, beta=0.5, b=0.0075, d=0.4)
    assert parse_seeds("0.1,0.2; 0.3,0.4", p) == [(0.1, 0.2), (0.3, 0.4)]
    assert len(parse_seeds("ring:5", p)) == 5


def test_show_config(capsys):
    code, out, _ = run(capsys, "--show-config")
    assert code == 0 and json.loads(out)["jet_order"] == 5
    code, out, _ = run(capsys, "hopf", "--show-config")
    assert code == 0 and "integ_tol" in json.loads(out)


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "equilibria,saddle-node", "--json")
    assert code == 0
    res = json.loads(out)
    assert res["passed"] and [r["criterion"] for r in res["criteria"]] == [1, 4]
    assert run(capsys, "verify", "--only", "nope")[0] == 2


def test_verify_failure_exit(capsys):
    code, out, _ = run(capsys, "verify", "--only", "cusp")
    assert code == 4
    assert out.startswith("[FAIL] criterion 3")


def test_deterministic(capsys):
    a = run(capsys, "classify", *FIG5)[1]
    b = run(capsys, "classify", *FIG5)[1]
    assert a == b

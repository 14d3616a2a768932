import json

import pytest

from csma_bounds import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


FAST = ("--samples", "3000")


def test_bound_default_grid(capsys):
    code, out, _ = run(capsys, "bound", *FAST)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("d_m,p_int_mean_linear,sir_mean_db")
    assert len(lines) == 42


def test_bound_single_row(capsys):
    code, out, _ = run(capsys, "bound", *FAST, "--d_step_m", "10")
    assert code == 0
    assert len(out.strip().split("\n")) == 2


def test_bad_annulus_rejected(capsys, tmp_path):
    code, out, err = run(capsys, "bound", "--d2_m", "5")
    assert code != 0 and out == ""
    assert "d2" in err
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"d1_m": 6, "d2_m": 6}))
    assert run(capsys, "bound", "--config", str(cfg))[0] != 0
    cfg.write_text(json.dumps({"colour": 1}))
    code, _, err = run(capsys, "bound", "--config", str(cfg))
    assert code != 0 and "colour" in err


def test_dmax(capsys):
    code, out, _ = run(capsys, "dmax", *FAST, "--sir_th_db", "-80")
    assert code == 0 and out == "5\n"
    code, out, _ = run(capsys, "dmax", *FAST, "--sir_th_db", "80")
    assert code == 0 and out == "infeasible\n"
    code, out, _ = run(capsys, "dmax", *FAST)
    assert 1.0 <= float(out) <= 5.0


def test_codes(capsys):
    code, out, _ = run(capsys, "codes", "--n_max", "3", "--kappa", "0.5")
    assert code == 0 and json.loads(out)["selected_n_codes"] == 6
    assert json.loads(run(capsys, "codes", "--n_max", "1")[1])["selected_n_codes"] == 1
    assert json.loads(run(capsys, "codes", "--n_max", "39")[1])["selected_n_codes"] == 1082
    assert run(capsys, "codes", "--kappa", "1")[0] != 0


def test_plan(capsys, tmp_path):
    flows = tmp_path / "flows.json"
    flows.write_text(json.dumps([{"source": [0, 0], "sink": [30, 0]},
                                 {"source": [0, 5], "sink": [30, 5]}]))
    code, out, _ = run(capsys, "plan", *FAST, "--flows", str(flows))
    assert code == 0
    plan = json.loads(out)
    assert plan["per_flow"][0]["robots"] == plan["per_flow"][1]["robots"]
    assert plan["total"] == sum(f["robots"] for f in plan["per_flow"])
    code, out, err = run(capsys, "plan", *FAST, "--flows", str(flows), "--sir_th_db", "80")
    assert code != 0 and out == "" and "gamma" in err
    assert run(capsys, "plan", *FAST)[0] != 0


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", *FAST, "--sir_th_step_db", "5")
    assert code == 0
    assert out.split("\n")[0] == "sir_th_db,dmax_dense_m,dmax_flow_m,robots_dense,robots_flow,saving_fraction"
    assert len(out.strip().split("\n")) == 4


def test_validate(capsys, tmp_path):
    args = ("validate", "--trials", "3", "--trial_samples", "200", "--samples", "1000",
            "--d_step_m", "2")
    code, out, _ = run(capsys, *args)
    assert code == 0 and out.startswith("d_m,p_below_mean")
    target = tmp_path / "report.json"
    assert run(capsys, *args, "--out", str(target))[0] == 0
    assert json.loads(target.read_text())["trials"] == 3


def test_failure_leaves_no_output(capsys, tmp_path):
    target = tmp_path / "plan.json"
    flows = tmp_path / "flows.json"
    flows.write_text(json.dumps([{"source": [0, 0], "sink": [30, 0]}]))
    code, _, _ = run(capsys, "plan", *FAST, "--flows", str(flows), "--sir_th_db", "80",
                     "--out", str(target))
    assert code != 0
    assert list(tmp_path.iterdir()) == [flows]


def test_identical_reruns(capsys, tmp_path):
    flows = tmp_path / "flows.json"
    flows.write_text(json.dumps([{"source": [0, 0], "sink": [40, 0]}]))
    for argv in (("bound",), ("dmax",), ("codes",), ("plan", "--flows", str(flows)),
                 ("compare", "--sir_th_step_db", "5"),
                 ("validate", "--trials", "2", "--trial_samples", "100", "--d_step_m", "2")):
        outs = []
        for k in range(2):
            target = tmp_path / f"{argv[0]}-{k}.out"
            assert cli.main([*argv, *FAST, "--seed", "17", "--out", str(target)]) == 0
            outs.append(target.read_bytes())
        assert outs[0] == outs[1], argv

import json
import os

import pytest

from pqslln import cli


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def criteria_config(tmp_path, model, p, q, name="cfg.json", **crit):
    return write_config(tmp_path, name, {
        "schema": 1, "model": model, "p": p, "q": q,
        "criteria": crit or {"series_n_max": 5000},
    })


def simulate_config(tmp_path, model, p, q, name="sim.json", **sim):
    payload = {"schema": 1, "model": model, "p": p, "q": q,
               "simulate": {"n_max": 2048, "replications": 8, "master_seed": 5, **sim}}
    return write_config(tmp_path, name, payload)


# ---------------------------------------------------------------------------
# criteria subcommand
# ---------------------------------------------------------------------------


def test_criteria_critical_tail_nonmember(tmp_path, capsys):
    cfg = criteria_config(tmp_path, {"builtin": "pareto", "params": {"alpha": 0.5}},
                          0.5, 0.5)
    code = cli.main(["criteria", "--config", cfg])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["membership"] == "NonMember"
    assert out["p_moment_verdict"]["kind"] == "Diverges"


def test_criteria_zero_model_member(tmp_path, capsys):
    cfg = criteria_config(tmp_path, {"builtin": "zero"}, 0.5, 0.3)
    code = cli.main(["criteria", "--config", cfg])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["membership"] == "Member"


def test_criteria_integral_value_field(tmp_path, capsys):
    cfg = criteria_config(tmp_path, {"builtin": "pareto", "params": {"alpha": 2.0}},
                          1.0, 0.5)
    code = cli.main(["criteria", "--config", cfg])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["membership"] == "Member"
    assert abs(out["integral_verdict"]["estimate_on_window"] - 2.0) < 1e-6


def test_criteria_inconclusive_exit_code(tmp_path, capsys):
    model = {"builtin": "pareto", "params": {"alpha": 2.0, "sign_law": "custom"}}
    # custom sign law with unknown mean: p >= 1 clause is undecidable
    cfg = write_config(tmp_path, "inc.json", {
        "schema": 1,
        "model": {"custom": {
            "name": "asym",
            "sign_law": {"kind": "custom", "negative_prob": 0.25},
            "pieces": [
                {"t_lo": 0.0, "t_hi": 1.0, "formula_id": "constant", "params": {"value": 1.0}},
                {"t_lo": 1.0, "t_hi": None, "formula_id": "power",
                 "params": {"scale": 1.0, "power": 2.0}},
            ],
        }},
        "p": 1.5, "q": 0.5,
    })
    code = cli.main(["criteria", "--config", cfg])
    assert code == 3
    assert json.loads(capsys.readouterr().out)["membership"] == "Inconclusive"


def test_config_parse_error_has_line_and_column(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": 1,\n  "model": {')
    code = cli.main(["criteria", "--config", str(bad)])
    err = capsys.readouterr().err
    assert code == 2
    assert "line" in err and "column" in err


def test_unknown_builtin_is_config_error(tmp_path):
    cfg = criteria_config(tmp_path, {"builtin": "nope"}, 0.5, 0.5)
    assert cli.main(["criteria", "--config", cfg]) == 2


# ---------------------------------------------------------------------------
# simulate subcommand
# ---------------------------------------------------------------------------


def test_simulate_counterexample_csv_constant_ratio(tmp_path, capsys):
    cfg = simulate_config(tmp_path, {"sequence": "lp-counterexample"}, 0.5, 0.5)
    out = tmp_path / "run"
    code = cli.main(["simulate", "--config", cfg, "--out", str(out)])
    assert code == 0
    csv = (out / "sim_table.csv").read_text().strip().split("\n")
    ratios = {line.split(",")[3] for line in csv[1:]}
    assert ratios == {"1.0"}


def test_simulate_zero_model_all_zero_csv(tmp_path):
    cfg = simulate_config(tmp_path, {"builtin": "zero"}, 0.5, 0.5)
    out = tmp_path / "runz"
    assert cli.main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    rows = (out / "sim_table.csv").read_text().strip().split("\n")[1:]
    assert all(row.split(",")[2] == "0.0" and row.split(",")[4] == "0.0" for row in rows)


def test_simulate_byte_identical_across_workers(tmp_path):
    cfg = simulate_config(tmp_path, {"builtin": "pareto", "params": {"alpha": 2.0}},
                          1.0, 0.5, n_max=4096, replications=16)
    blobs = []
    for i, w in enumerate((1, 2, 8)):
        out = tmp_path / f"run{i}"
        assert cli.main(["simulate", "--config", cfg, "--out", str(out),
                         "--workers", str(w)]) == 0
        blobs.append((out / "sim_table.csv").read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]


def test_simulate_seed_override_changes_output(tmp_path):
    cfg = simulate_config(tmp_path, {"builtin": "pareto", "params": {"alpha": 2.0}},
                          1.0, 0.5)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cli.main(["simulate", "--config", cfg, "--out", str(out1)])
    cli.main(["simulate", "--config", cfg, "--out", str(out2), "--seed", "99"])
    assert (out1 / "sim_table.csv").read_bytes() != (out2 / "sim_table.csv").read_bytes()
    manifest = json.loads((out2 / "sim_manifest.json").read_text())
    assert manifest["config"]["master_seed"] == 99


def test_simulate_workers_env_fallback(tmp_path, monkeypatch):
    cfg = simulate_config(tmp_path, {"builtin": "rademacher"}, 1.0, 1.0)
    monkeypatch.setenv("PQ_SLLN_WORKERS", "3")
    out = tmp_path / "runenv"
    assert cli.main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    manifest = json.loads((out / "sim_manifest.json").read_text())
    assert manifest["workers"] == 3


def test_simulate_failure_leaves_no_artifacts(tmp_path):
    cfg = write_config(tmp_path, "bad_sim.json", {
        "schema": 1, "model": {"builtin": "rademacher"}, "p": 1.0, "q": 1.0,
        "simulate": {"n_max": 999, "replications": 8, "master_seed": 1},
    })
    out = tmp_path / "failed"
    assert cli.main(["simulate", "--config", cfg, "--out", str(out)]) == 2
    assert not out.exists() or not any(out.iterdir())


def test_manifest_reproduces_run(tmp_path):
    cfg = simulate_config(tmp_path, {"builtin": "pareto", "params": {"alpha": 2.0}},
                          1.0, 0.5)
    out = tmp_path / "orig"
    cli.main(["simulate", "--config", cfg, "--out", str(out)])
    manifest = json.loads((out / "sim_manifest.json").read_text())
    # replay from the manifest's resolved config alone
    replay_cfg = write_config(tmp_path, "replay.json", {
        "schema": 1,
        "model": manifest["config"]["model"],
        "p": manifest["config"]["p"],
        "q": manifest["config"]["q"],
        "simulate": {k: manifest["config"][k]
                     for k in ("n_max", "replications", "master_seed",
                               "epsilon_grid", "mode")},
    })
    out2 = tmp_path / "replay"
    cli.main(["simulate", "--config", replay_cfg, "--out", str(out2)])
    assert (out / "sim_table.csv").read_bytes() == (out2 / "replay_table.csv").read_bytes()


# ---------------------------------------------------------------------------
# report subcommand
# ---------------------------------------------------------------------------


def test_report_empty_set(capsys):
    assert cli.main(["report"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("model,p,q,")
    assert len(out.strip().split("\n")) == 1


def test_report_single_manifest(tmp_path, capsys):
    cfg = simulate_config(tmp_path, {"builtin": "rademacher"}, 1.5, 0.5,
                          n_max=4096, replications=32)
    out = tmp_path / "run"
    cli.main(["simulate", "--config", cfg, "--out", str(out)])
    capsys.readouterr()
    code = cli.main(["report", str(out / "sim_manifest.json")])
    captured = capsys.readouterr()
    assert code == 0
    lines = captured.out.strip().split("\n")
    assert len(lines) == 2
    assert "rademacher" in lines[1]
    assert lines[1].split(",")[4] == "Member"
    assert "hard_contradictions: 0" in captured.err


# ---------------------------------------------------------------------------
# verify subcommand (thin smoke; the full suites run in acceptance)
# ---------------------------------------------------------------------------


def test_verify_unknown_suite():
    with pytest.raises(SystemExit):
        cli.main(["verify", "bogus"])


def test_verify_small_series_passes(capsys):
    assert cli.main(["verify", "small-series"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert all(r["holds"] for r in payload["results"])

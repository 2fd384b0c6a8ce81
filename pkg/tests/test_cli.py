"""CLI subcommands, exit codes, manifests, config round trips."""

import json
import os
import subprocess
import sys

import pytest

from extremesum import ConfigError, ExperimentConfig, SGrid, KRule
from extremesum.cli import main
from extremesum.reports import (
    atomic_write_text,
    sha256_file,
    verify_manifest,
)


def _write_config(path, **overrides):
    doc = {
        "models": ["exponential(1.0)"],
        "n_values": [2000],
        "replicates": 100,
        "master_seed": 11,
        "statistics": ["T1", "T2", "T3"],
    }
    doc.update(overrides)
    path.write_text(json.dumps(doc))
    return str(path)


# Verdict gates are calibrated for 2000 replicates; the file-plumbing tests
# below run tiny cells and loosen them so outcomes stay deterministic.
_LOOSE = {
    s: {"ks": 1.0, "var": [0.0, 99.0], "mean": [-99.0, 99.0]}
    for s in ("T1", "T2", "T3")
}


# -- config parsing -----------------------------------------------------


def test_config_round_trip_is_idempotent():
    cfg = ExperimentConfig(
        models=("weibull(2.0)", "gumbel"),
        n_values=(5000, 50000),
        k_rule=KRule(kind="fixed", fixed_k=40),
        replicates=500,
        master_seed=9,
        statistics=("T1", "MAX"),
        betas=(0.5, 2.0),
        s_grid=SGrid.geometric(0.25, 0.1, 4),
        tolerances={"T1": {"ks": 0.1}},
        checks=("domain_ratio",),
    ).validate()
    d1 = cfg.to_dict()
    cfg2 = ExperimentConfig.from_dict(d1)
    d2 = cfg2.to_dict()
    assert d1 == d2
    assert ExperimentConfig.from_json(cfg2.to_json()).to_json() == cfg2.to_json()


def test_config_default_round_trip():
    cfg = ExperimentConfig().validate()
    assert ExperimentConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()


def test_config_model_alias_and_conflict():
    cfg = ExperimentConfig.from_dict({"model": "gumbel"})
    assert cfg.models == ("gumbel",)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"model": "gumbel", "models": ["gumbel"]})


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="replicate"):
        ExperimentConfig.from_dict({"replicate": 10})
    with pytest.raises(ConfigError, match="k_rule"):
        ExperimentConfig.from_dict({"k_rule": {"kind": "power", "alpha": 2}})
    with pytest.raises(ConfigError, match="s_grid"):
        ExperimentConfig.from_dict({"s_grid": {"start": 0.5, "step": 0.1}})


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        ExperimentConfig(models=()).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(models=("nosuchmodel(1)",)).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(replicates=0).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(statistics=("T9",)).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(n_values=(3,)).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(checks=("bogus",)).validate()


# -- exit codes ---------------------------------------------------------


def test_exit_config_on_malformed_json(tmp_path, capsys):
    bad = tmp_path / "cfg.json"
    bad.write_text("{not json")
    rc = main(["simulate", "--config", str(bad)])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_exit_config_on_unknown_model(tmp_path, capsys):
    cfg = _write_config(tmp_path / "cfg.json", models=["zeta(3)"])
    assert main(["simulate", "--config", cfg]) == 2
    assert "zeta" in capsys.readouterr().err


def test_exit_config_on_empty_models(tmp_path):
    cfg = _write_config(tmp_path / "cfg.json", models=[])
    assert main(["lemmas", "--config", cfg]) == 2


def test_exit_config_on_bad_override(tmp_path):
    cfg = _write_config(tmp_path / "cfg.json")
    assert main(["simulate", "--config", cfg, "--replicates", "0"]) == 2


def test_exit_numeric_on_divergent_model(tmp_path, capsys):
    # pareto(1) has no finite tail scale: the experiment cannot start
    cfg = _write_config(
        tmp_path / "cfg.json", models=["pareto(1.0)"], n_values=[100],
        replicates=10,
    )
    assert main(["simulate", "--config", cfg, "--output-dir", str(tmp_path)]) == 3
    assert "numeric error" in capsys.readouterr().err


def test_exit_check_on_verdict_failure(tmp_path, capsys):
    cfg = _write_config(
        tmp_path / "cfg.json",
        statistics=["T1"],
        tolerances={"T1": {"ks": 0.0001}},
    )
    rc = main(["simulate", "--config", cfg, "--output-dir", str(tmp_path / "out")])
    assert rc == 4
    err = capsys.readouterr().err
    assert "verdict failure" in err
    assert "exponential(1) n=2000 T1" in err
    # the failing run still writes its full report set
    assert (tmp_path / "out" / "report.json").exists()
    assert (tmp_path / "out" / "manifest.json").exists()


def test_exit_check_on_lemma_failure(tmp_path, capsys):
    cfg = _write_config(
        tmp_path / "cfg.json", models=["pareto(2.0)"], checks=["domain_ratio"]
    )
    rc = main(["lemmas", "--config", cfg, "--output-dir", str(tmp_path / "out")])
    assert rc == 4
    err = capsys.readouterr().err
    assert "1 of 1 checks failed" in err
    assert "domain_ratio" in err


def test_exit_config_on_missing_manifest(tmp_path, capsys):
    rc = main(["report", str(tmp_path / "nowhere" / "manifest.json")])
    assert rc == 2
    assert "cannot read manifest" in capsys.readouterr().err


# -- outputs and manifests ----------------------------------------------


def test_functionals_outputs_and_manifest(tmp_path, capsys):
    cfg = _write_config(
        tmp_path / "cfg.json", models=["exponential(1.0)", "weibull(2.0)"]
    )
    out = tmp_path / "tables"
    assert main(["functionals", "--config", cfg, "--output-dir", str(out)]) == 0
    printed = capsys.readouterr().out.splitlines()
    assert str(out / "functionals_exponential_1.csv") in printed
    assert str(out / "functionals_weibull_2.csv") in printed

    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["outputs"]) == {
        "functionals_exponential_1.csv",
        "functionals_weibull_2.csv",
    }
    for name, digest in manifest["outputs"].items():
        assert sha256_file(out / name) == digest
    assert verify_manifest(out / "manifest.json") == []
    assert manifest["config"]["models"] == ["exponential(1.0)", "weibull(2.0)"]

    body = (out / "functionals_exponential_1.csv").read_text()
    header = body.splitlines()[0]
    assert header.startswith("s,c,")
    first = body.splitlines()[1].split(",")
    assert float(first[1]) == 1.0


def test_functionals_pareto_writes_warning(tmp_path):
    cfg = _write_config(tmp_path / "cfg.json", models=["pareto(2.0)"])
    out = tmp_path / "tables"
    assert main(["functionals", "--config", cfg, "--output-dir", str(out)]) == 0
    text = (out / "functionals_pareto_2.csv").read_text()
    assert text.startswith("# warning: pareto(2)")


def test_lemmas_empty_checks_header_only(tmp_path):
    cfg = _write_config(tmp_path / "cfg.json", checks=[])
    out = tmp_path / "out"
    assert main(["lemmas", "--config", cfg, "--output-dir", str(out)]) == 0
    lines = (out / "limit_checks.csv").read_text().splitlines()
    assert lines == [
        "check_id,model,params,s,value,target,tolerance,error,verdict"
    ]


def test_simulate_writes_reports_and_passes(tmp_path, capsys):
    # Full-size cell: the Gaussian verdicts only clear the default gates
    # once n is large and the replicate count matches their calibration.
    cfg = _write_config(
        tmp_path / "cfg.json",
        n_values=[50000],
        replicates=2000,
        master_seed=8,
    )
    out = tmp_path / "run"
    rc = main(["simulate", "--config", cfg, "--output-dir", str(out)])
    assert rc == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["verdict"] == "pass"
    assert doc["cells"][0]["statistics"]["T1"]["verdict"] == "pass"
    csv_lines = (out / "report.csv").read_text().splitlines()
    assert csv_lines[0].startswith("model,n,k,stat,")
    assert len(csv_lines) == 1 + 3          # T1, T2, T3
    assert verify_manifest(out / "manifest.json") == []


def test_simulate_dump_samples(tmp_path):
    cfg = _write_config(
        tmp_path / "cfg.json", replicates=50, dump_samples=True,
        statistics=["T1", "BDH"], tolerances=_LOOSE,
    )
    out = tmp_path / "run"
    assert main(["simulate", "--config", cfg, "--output-dir", str(out)]) == 0
    sample_file = out / "samples_exponential_1_2000.csv"
    assert sample_file.exists()
    lines = sample_file.read_text().splitlines()
    assert lines[0] == "T1,BDH"
    assert len(lines) == 51
    manifest = json.loads((out / "manifest.json").read_text())
    assert "samples_exponential_1_2000.csv" in manifest["outputs"]


def test_report_merges_and_lists_failures(tmp_path):
    cfg = _write_config(
        tmp_path / "cfg.json",
        statistics=["T1"],
        tolerances={"T1": {"ks": 0.0001}},
    )
    out = tmp_path / "run"
    assert main(["simulate", "--config", cfg, "--output-dir", str(out)]) == 4
    rc = main(
        ["report", str(out / "manifest.json"), "--output-dir", str(tmp_path)]
    )
    assert rc == 0
    summary = (tmp_path / "summary.md").read_text()
    assert "## Verdict: FAILURES" in summary
    assert "exponential(1) n=2000 T1" in summary
    assert "ks" in summary


def test_report_all_pass_banner(tmp_path):
    cfg = _write_config(tmp_path / "cfg.json", tolerances=_LOOSE)
    out = tmp_path / "run"
    assert main(["simulate", "--config", cfg, "--output-dir", str(out)]) == 0
    assert main(["report", str(out / "manifest.json"), "--output-dir", str(tmp_path)]) == 0
    assert "## Verdict: ALL PASS" in (tmp_path / "summary.md").read_text()


def test_report_detects_corruption(tmp_path, capsys):
    cfg = _write_config(tmp_path / "cfg.json", replicates=50, tolerances=_LOOSE)
    out = tmp_path / "run"
    assert main(["simulate", "--config", cfg, "--output-dir", str(out)]) == 0
    victim = out / "report.csv"
    victim.write_text(victim.read_text() + "tampered\n")
    rc = main(["report", str(out / "manifest.json")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "checksum mismatch" in err
    assert "report.csv" in err


# -- atomic writes ------------------------------------------------------


def test_atomic_write_no_temp_residue(tmp_path):
    target = tmp_path / "file.txt"
    atomic_write_text(target, "hello\n")
    assert target.read_text() == "hello\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["file.txt"]


def test_atomic_write_failure_leaves_original(tmp_path):
    target = tmp_path / "file.txt"
    atomic_write_text(target, "original\n")
    with pytest.raises(TypeError):
        atomic_write_text(target, b"bytes are not text")
    assert target.read_text() == "original\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["file.txt"]


# -- end-to-end process -------------------------------------------------


def test_module_entry_point(tmp_path):
    cfg = _write_config(tmp_path / "cfg.json", replicates=50, tolerances=_LOOSE)
    proc = subprocess.run(
        [
            sys.executable, "-m", "extremesum", "simulate",
            "--config", str(tmp_path / "cfg.json"),
            "--output-dir", str(tmp_path / "out"),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out" / "report.json").exists()
    assert "report.json" in proc.stdout

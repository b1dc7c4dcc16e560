import csv
import io

import pytest
from pydantic import ValidationError

from orlicz_lab.main import main
from orlicz_lab.schemas.run import RunConfig


def read_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_norm_of_lions_function(capsys):
    assert main(["norm", "--family", "lions", "--alpha", "50"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "family,param,l2,grad_l2,orlicz"
    (row,) = read_rows(out)
    assert row["param"] == "alpha=50"
    assert float(row["orlicz"]) == pytest.approx(0.284, abs=3e-3)
    assert float(row["grad_l2"]) == pytest.approx(1.0, abs=0.01)


def test_norm_rejects_negative_alpha(capsys):
    assert main(["norm", "--family", "lions", "--alpha", "-1"]) == 2
    assert "error" in capsys.readouterr().err


def test_norm_of_sum(capsys):
    assert main(["norm", "--family", "sum", "--a", "1", "--b", "2", "--alpha", "8"]) == 0
    (row,) = read_rows(capsys.readouterr().out)
    assert float(row["orlicz"]) >= 0.85 * 2.0 * 0.28209479


def test_output_is_deterministic(capsys):
    args = ["norm", "--family", "bubble", "--profile", "gk", "--alpha", "6"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_relative_output_goes_to_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ORLAB_OUTPUT_DIR", str(tmp_path))
    assert main(["norm", "--family", "lions", "--alpha", "4", "--output", "lions.csv"]) == 0
    assert capsys.readouterr().out == ""
    text = (tmp_path / "lions.csv").read_text(encoding="utf-8")
    assert text.endswith("\n") and "\r" not in text


def test_config_file_supplies_defaults(tmp_path, capsys):
    config = tmp_path / "norm.cfg"
    config.write_text("# lions member\nalpha = 50\nds = 0.03125\n", encoding="utf-8")
    assert main(["norm", "--family", "lions", "--config", str(config)]) == 0
    assert read_rows(capsys.readouterr().out)[0]["param"] == "alpha=50"

    assert main(["norm", "--family", "lions", "--config", str(config), "--alpha", "10"]) == 0
    assert read_rows(capsys.readouterr().out)[0]["param"] == "alpha=10"


def test_config_file_rejects_unknown_keys(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("temperature = 3\n", encoding="utf-8")
    assert main(["norm", "--family", "lions", "--config", str(config)]) == 2


def test_jobs_must_be_positive():
    assert main(["norm", "--family", "lions", "--alpha", "4", "--jobs", "0"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["wave", "--alpha", "-1"],
        ["wave", "--c", "0"],
        ["wave", "--n-r", "1"],
        ["wave", "--R", "-2"],
        ["norm", "--family", "lions", "--alpha", "4", "--ds", "0"],
        ["decompose", "--seq", "single", "--count", "0"],
    ],
)
def test_parameters_outside_their_domain_are_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_config_file_values_are_validated(tmp_path):
    config = tmp_path / "wave.cfg"
    config.write_text("alpha = 0\n", encoding="utf-8")
    assert main(["wave", "--config", str(config)]) == 2


def test_run_config_rejects_undeclared_parameters():
    with pytest.raises(ValidationError):
        RunConfig(command="norm", params={"temperature": 3.0}, seed=0)
    config = RunConfig(command="wave", params={"alpha": 4.0, "n_r": 2}, seed=0)
    assert config.params.alpha == 4.0


def test_sweep_tail_integrals(capsys):
    assert main(["sweep", "--probe", "tail-integrals", "--alphas", "25,50,100", "--assert"]) == 0
    rows = read_rows(capsys.readouterr().out)
    assert [float(r["parameter"]) for r in rows] == [25.0, 50.0, 100.0]
    assert float(rows[-1]["I"]) == pytest.approx(1.0, abs=0.05)
    assert float(rows[-1]["J"]) == pytest.approx(1.0 / 3.0, abs=0.02)
    assert all(r["converged"] == "true" for r in rows)


def test_sweep_moser_diverges_at_critical_exponent(capsys):
    assert main(["sweep", "--probe", "moser", "--alpha-exp", "12.566", "--betas", "5,10,20"]) == 0
    rows = read_rows(capsys.readouterr().out)
    ratios = [float(r["observed"]) for r in rows]
    assert ratios == sorted(ratios)
    assert all(r["target"] == "inf" for r in rows)


def test_sweep_rejects_empty_list():
    assert main(["sweep", "--probe", "moser", "--betas", ""]) == 2


def test_sweep_requires_its_parameter_list():
    assert main(["sweep", "--probe", "orlicz-limit"]) == 2


def test_sweep_cross_scale(capsys):
    assert main(["sweep", "--probe", "cross-scale", "--n-list", "4,8,16", "--assert"]) == 0
    rows = read_rows(capsys.readouterr().out)
    assert float(rows[-1]["observed"]) == pytest.approx(0.25, rel=0.02)


def test_decompose_single_sequence(tmp_path, capsys):
    output = tmp_path / "single.csv"
    assert main(["decompose", "--seq", "single", "--nmax", "60", "--output", str(output)]) == 0
    rows = read_rows(output.read_text(encoding="utf-8"))
    assert len(rows) == 1
    assert float(rows[0]["scale_at_ref"]) == pytest.approx(60.0, abs=0.1)
    assert float(rows[0]["profile_grad_norm"]) == pytest.approx(1.0, abs=0.1)
    profile = read_rows((tmp_path / "single_profile_1.csv").read_text(encoding="utf-8"))
    assert float(profile[0]["t"]) == 0.0


def test_decompose_custom_terms_need_terms():
    assert main(["decompose", "--seq", "custom"]) == 2
    assert main(["decompose", "--seq", "custom", "--terms", "1:0:1"]) == 2


def test_wave_lions_data_is_subcritical(capsys):
    assert main(["wave", "--data", "lions", "--c", "0.3", "--alpha", "4", "--T", "0.25", "--n-r", "512"]) == 0
    assert "regime=subcritical" in capsys.readouterr().err


def test_wave_smooth_run_conserves_energy(capsys):
    args = ["wave", "--data", "bump", "--c", "0.3", "--rho", "1", "--T", "0.5", "--n-r", "512"]
    assert main(args) == 0
    captured = capsys.readouterr()
    rows = read_rows(captured.out)
    assert float(rows[0]["t"]) == 0.0
    assert float(rows[-1]["t"]) == pytest.approx(0.5)
    energies = [float(r["E_total"]) for r in rows]
    assert max(energies) - min(energies) < 1e-2 * energies[0]
    assert float(rows[0]["E_c_gap"]) == 0.0


def test_wave_blow_up_exit_code(capsys):
    assert main(["wave", "--data", "lions", "--c", "5", "--alpha", "8"]) == 4
    assert "overflow" in capsys.readouterr().err


def test_wave_propagation_precondition():
    assert main(["wave", "--T", "100", "--R", "10"]) == 2


def test_verify_unknown_criterion():
    assert main(["verify", "--only", "no-such-criterion"]) == 2


def test_verify_records_and_lists_runs(tmp_path, capsys):
    url = f"sqlite:///{tmp_path / 'ledger.db'}"
    assert main(["verify", "--only", "bmo,tail-integrals", "--ledger", url]) == 0
    out = capsys.readouterr().out
    assert "bmo: PASS" in out
    assert "tail-integrals: PASS" in out

    assert main(["ledger", "--ledger", url]) == 0
    (row,) = read_rows(capsys.readouterr().out)
    assert row["status"] == "completed"
    assert row["criteria"] == "2"
    assert row["passed"] == "2"


def test_ledger_needs_a_url(monkeypatch):
    monkeypatch.delenv("ORLAB_LEDGER_URL", raising=False)
    assert main(["ledger"]) == 2


def test_missing_subcommand_is_a_usage_error():
    assert main([]) == 2

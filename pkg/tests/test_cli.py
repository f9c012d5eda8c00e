"""
Tests for the qva command-line driver.
"""
import json
from unittest.mock import patch

import numpy as np
import pytest

from qva_transfer.cli import EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from qva_transfer.core.datagen import read_csv, write_csv
from qva_transfer.core.errors import TrainingDivergedError
from qva_transfer.core.vqc_model import CircuitSpec, Dataset, VqcModel, load_model, save_model


@pytest.fixture(autouse=True)
def no_config_env(monkeypatch):
    """Run every command against the built-in defaults."""
    monkeypatch.delenv("QVA_CONFIG", raising=False)


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestGenData:
    """Test the gen-data subcommand."""

    def test_generates_requested_rows(self, tmp_path, capsys):
        """Test --n rows are written and the resolved config is printed."""
        out = str(tmp_path / "src.csv")
        assert main(["gen-data", "--n", "40", "--noise", "0.1", "--seed", "3", "--out", out]) == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["n"] == 40
        assert payload["data"]["seed"] == 3
        assert len(read_csv(out)) == 40

    def test_zero_rotation_of_base_is_identical(self, tmp_path, capsys):
        """Test deriving a target with no transform copies the file byte for byte."""
        src = tmp_path / "src.csv"
        tgt = tmp_path / "tgt.csv"
        main(["gen-data", "--n", "20", "--seed", "1", "--out", str(src)])
        assert main(["gen-data", "--base", str(src), "--rotate-deg", "0", "--out", str(tgt)]) == EXIT_OK
        assert tgt.read_bytes() == src.read_bytes()

    def test_missing_out_is_usage_error(self):
        """Test a missing required flag exits with 64."""
        with pytest.raises(SystemExit) as exc:
            main(["gen-data", "--n", "10"])
        assert exc.value.code == EXIT_USAGE

    def test_odd_n_is_data_error(self, tmp_path):
        """Test an odd sample count fails validation with exit 2."""
        assert main(["gen-data", "--n", "7", "--out", str(tmp_path / "x.csv")]) == EXIT_DATA

    def test_unwritable_path(self, tmp_path):
        """Test an I/O failure exits with 2."""
        out = str(tmp_path / "missing-dir" / "src.csv")
        assert main(["gen-data", "--n", "10", "--out", out]) == EXIT_DATA


class TestPretrainAndEval:
    """Test pretrain and eval."""

    def setup_method(self):
        """Set up a small training set."""
        rng = np.random.default_rng(0)
        self.data = Dataset(rng.normal(size=(30, 2)), rng.choice([-1, 1], 30))

    def test_pretrain_writes_model_and_curve(self, tmp_path, capsys):
        """Test pretrain writes both artifacts and prints metrics."""
        data = str(tmp_path / "train.csv")
        write_csv(data, self.data)
        out = str(tmp_path / "model.json")
        code = main(["pretrain", "--data", data, "--out", out, "--epochs", "3", "--batch", "full", "--seed", "5"])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["curve"] == str(tmp_path / "model.curve.csv")
        assert 0.0 <= payload["metrics"]["accuracy"] <= 1.0
        assert len((tmp_path / "model.curve.csv").read_text().splitlines()) == 4
        assert load_model(out).spec.L == 3

    def test_pretrain_is_deterministic(self, tmp_path):
        """Test the same seed twice gives byte-identical model files."""
        data = str(tmp_path / "train.csv")
        write_csv(data, self.data)
        for name in ("a.json", "b.json"):
            main(["pretrain", "--data", data, "--out", str(tmp_path / name), "--epochs", "2", "--seed", "9"])
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_zero_epochs_rejected(self, tmp_path):
        """Test --epochs 0 is a flag-parse error."""
        with pytest.raises(SystemExit) as exc:
            main(["pretrain", "--data", "x.csv", "--out", "m.json", "--epochs", "0"])
        assert exc.value.code == EXIT_USAGE

    def test_divergence_exits_3_and_saves_model(self, tmp_path):
        """Test a diverged run exits with 3 after saving the last finite model."""
        data = str(tmp_path / "train.csv")
        write_csv(data, self.data)
        out = tmp_path / "model.json"
        last = VqcModel.create(CircuitSpec((2, 3), (3, 2, 3)), theta=[0.1, 0.2, 0.3])
        with patch("qva_transfer.cli.run_pretrain", side_effect=TrainingDivergedError("boom", model=last, epoch=2)):
            assert main(["pretrain", "--data", data, "--out", str(out)]) == EXIT_NUMERIC
        assert np.array_equal(load_model(str(out)).theta, [0.1, 0.2, 0.3])

    def test_eval_and_holdout(self, tmp_path, capsys):
        """Test eval prints metrics, with a holdout split on request."""
        data = str(tmp_path / "d.csv")
        model = str(tmp_path / "m.json")
        write_csv(data, self.data)
        save_model(VqcModel.create(CircuitSpec((2, 3), (3, 2, 3))), model)
        assert main(["eval", "--model", model, "--data", data]) == EXIT_OK
        assert _stdout_json(capsys)["metrics"]["n"] == 30
        assert main(["eval", "--model", model, "--data", data, "--holdout", "0.2"]) == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["train"]["n"] + payload["holdout"]["n"] == 30

    def test_dimension_mismatch_exits_2(self, tmp_path):
        """Test evaluating a 2-feature model on 3-feature data exits with 2."""
        data = str(tmp_path / "d3.csv")
        model = str(tmp_path / "m.json")
        write_csv(data, Dataset(np.zeros((4, 3)), np.array([1, -1, 1, -1])))
        save_model(VqcModel.create(CircuitSpec((2, 3), (3, 2, 3))), model)
        assert main(["eval", "--model", model, "--data", data]) == EXIT_DATA

    def test_malformed_data_exits_2(self, tmp_path):
        """Test a CSV parse error exits with 2."""
        data = tmp_path / "bad.csv"
        data.write_text("x1,x2,y\n0.1,0.2,0.5\n")
        model = str(tmp_path / "m.json")
        save_model(VqcModel.create(CircuitSpec((2, 3), (3, 2, 3))), model)
        assert main(["eval", "--model", model, "--data", str(data)]) == EXIT_DATA


class TestAdapt:
    """Test adapt qva and adapt gd."""

    def setup_method(self):
        """Set up source, target and a model."""
        rng = np.random.default_rng(1)
        self.source = Dataset(rng.normal(size=(24, 2)), rng.choice([-1, 1], 24))
        self.target = Dataset(self.source.X + 0.2, self.source.y)
        self.model = VqcModel.create(CircuitSpec((2, 3), (3, 2, 3)), theta=[0.3, 1.1, -0.4])

    def _files(self, tmp_path):
        paths = {name: str(tmp_path / f"{name}") for name in ("src.csv", "tgt.csv", "model.json")}
        write_csv(paths["src.csv"], self.source)
        write_csv(paths["tgt.csv"], self.target)
        save_model(self.model, paths["model.json"])
        return paths

    def test_qva_writes_report(self, tmp_path, capsys):
        """Test adapt qva saves the model and the report."""
        paths = self._files(tmp_path)
        out = str(tmp_path / "qva.json")
        report = tmp_path / "report.json"
        code = main([
            "adapt", "qva", "--model", paths["model.json"], "--source", paths["src.csv"],
            "--target", paths["tgt.csv"], "--out", out, "--report", str(report),
        ])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        saved = json.loads(report.read_text())
        assert saved["n_pairs"] == 24
        assert len(saved["delta_theta"]) == 3
        assert payload["accuracy_after"] == saved["accuracy_after"]
        assert np.allclose(load_model(out).theta, self.model.theta + np.array(saved["delta_theta"]))

    def test_qva_requires_source(self, tmp_path):
        """Test adapt qva without --source is a flag-parse error."""
        paths = self._files(tmp_path)
        with pytest.raises(SystemExit) as exc:
            main(["adapt", "qva", "--model", paths["model.json"], "--target", paths["tgt.csv"], "--out", "x.json"])
        assert exc.value.code == EXIT_USAGE

    def test_gd_writes_one_curve_row_per_epoch(self, tmp_path, capsys):
        """Test adapt gd with 30 epochs writes 30 curve rows."""
        paths = self._files(tmp_path)
        out = str(tmp_path / "gd.json")
        code = main([
            "adapt", "gd", "--model", paths["model.json"], "--target", paths["tgt.csv"],
            "--out", out, "--epochs", "30", "--lr", "0.05",
        ])
        assert code == EXIT_OK
        payload = _stdout_json(capsys)
        assert payload["epochs"] == 30
        rows = (tmp_path / "gd.curve.csv").read_text().splitlines()
        assert rows[0] == "epoch,loss,accuracy"
        assert len(rows) == 31


class TestCompare:
    """Test the compare subcommand."""

    ARTIFACTS = [
        "source.csv",
        "target.csv",
        "pretrained.json",
        "pretrain_curve.csv",
        "qva_model.json",
        "qva_report.json",
        "gd_model.json",
        "comparison.csv",
        "summary.json",
    ]

    def _config(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"data": {"n": 100}, "pretrain": {"epochs": 3}}))
        return str(path)

    def _compare(self, config, out_dir, *flags):
        return main(["--config", config, "compare", "--out-dir", str(out_dir), "--epochs", "3", *flags])

    def test_report_and_artifacts(self, tmp_path, capsys):
        """Test exit 0, the printed run report and the epoch table."""
        out_dir = tmp_path / "run"
        assert self._compare(self._config(tmp_path), out_dir, "--rotate-deg", "45") == EXIT_OK
        report = _stdout_json(capsys)
        assert report["config_echo"]["transform"]["rotation_deg"] == 45.0
        assert report["config_echo"]["finetune"]["epochs"] == 3
        assert report["metrics"]["gd_epochs"] == 3
        assert "crossover_epoch" in report["metrics"]
        assert set(report["timings"]) == {"generate", "pretrain", "evaluate", "qva", "gd", "write"}

        rows = (out_dir / "comparison.csv").read_text().splitlines()
        assert rows[0] == "epoch,gd_loss,gd_accuracy,qva_accuracy"
        assert [row.split(",")[0] for row in rows[1:]] == ["1", "2", "3"]
        assert len({row.split(",")[3] for row in rows[1:]}) == 1

        summary = json.loads((out_dir / "summary.json").read_text())
        assert summary["metrics"]["crossover_epoch"] == report["metrics"]["crossover_epoch"]

    def test_reruns_are_byte_identical(self, tmp_path):
        """Test two runs with the same flags write identical artifacts."""
        config = self._config(tmp_path)
        assert self._compare(config, tmp_path / "a", "--seed", "5") == EXIT_OK
        assert self._compare(config, tmp_path / "b", "--seed", "5") == EXIT_OK
        for name in self.ARTIFACTS:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name

    def test_missing_out_dir_is_usage_error(self, tmp_path):
        """Test compare without --out-dir exits with 64."""
        with pytest.raises(SystemExit) as exc:
            main(["compare"])
        assert exc.value.code == EXIT_USAGE

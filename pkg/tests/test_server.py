"""
Tests for the qva-transfer MCP server and its tools.
"""
import os

import numpy as np
import pytest
from mcp.server.fastmcp.exceptions import ToolError
from mcp.types import TextContent

from qva_transfer.config.models import ExperimentConfig
from qva_transfer.core.datagen import write_csv
from qva_transfer.core.errors import DomainError, TrainingDivergedError
from qva_transfer.core.vqc_model import CircuitSpec, Dataset, VqcModel, save_model
from qva_transfer.server import QvaMCPServer
from qva_transfer.tools import DatasetTools, ModelTools, TransferTools
from qva_transfer.tools.base import QvaTool


@pytest.fixture
def server(monkeypatch):
    """Fixture to create a QvaMCPServer with default configuration."""
    monkeypatch.delenv("QVA_CONFIG", raising=False)
    return QvaMCPServer()


@pytest.fixture
def small_config():
    """Experiment config small enough for a full run in a test."""
    return ExperimentConfig.model_validate(
        {
            "data": {"n": 60},
            "pretrain": {"epochs": 3, "batch_size": 20},
            "finetune": {"epochs": 4, "batch_size": "full", "shuffle": False, "learning_rate": 0.05},
        }
    )


@pytest.fixture
def artifacts(tmp_path):
    """Source/target CSVs and a saved model."""
    rng = np.random.default_rng(0)
    source = Dataset(rng.normal(size=(20, 2)), rng.choice([-1, 1], 20))
    paths = {
        "source": str(tmp_path / "src.csv"),
        "target": str(tmp_path / "tgt.csv"),
        "model": str(tmp_path / "model.json"),
    }
    write_csv(paths["source"], source)
    write_csv(paths["target"], Dataset(source.X + 0.1, source.y))
    save_model(VqcModel.create(CircuitSpec((2, 3), (3, 2, 3)), theta=[0.2, 0.9, -0.1]), paths["model"])
    return paths


def test_server_initialization(server):
    """Test the server loads defaults and builds its tools."""
    assert server.config == ExperimentConfig()
    assert server.mcp.name == "QvaMCP"
    assert isinstance(server.transfer_tools, TransferTools)


@pytest.mark.asyncio
async def test_list_tools(server):
    """Test every experiment tool is registered."""
    tools = await server.mcp.list_tools()
    tool_names = {tool.name for tool in tools}
    assert tool_names == {
        "generate_dataset",
        "pretrain_model",
        "evaluate_model",
        "adapt_qva",
        "finetune_gd",
        "compare_methods",
    }


@pytest.mark.asyncio
async def test_evaluate_model_missing_parameter(server):
    """Test evaluate_model without arguments is rejected."""
    with pytest.raises(ToolError):
        await server.mcp.call_tool("evaluate_model", {})


@pytest.mark.asyncio
async def test_evaluate_model_missing_file(server, tmp_path):
    """Test a missing model file surfaces as a tool error."""
    with pytest.raises(ToolError, match="File not found"):
        await server.mcp.call_tool(
            "evaluate_model",
            {"model": str(tmp_path / "nope.json"), "data": str(tmp_path / "nope.csv")},
        )


class TestDatasetTools:
    """Test dataset generation through the tool layer."""

    def setup_method(self):
        """Set up tools with default configuration."""
        self.tools = DatasetTools(ExperimentConfig())

    def test_generate(self, tmp_path):
        """Test a generated dataset is written and summarized."""
        out = str(tmp_path / "src.csv")
        result = self.tools.generate_dataset(out, n=20, seed=3)
        assert isinstance(result[0], TextContent)
        assert "Two-Moons Dataset" in result[0].text
        assert "Label -1" in result[0].text
        assert os.path.exists(out)

    def test_rotate_base(self, tmp_path):
        """Test a rotated copy reports its transform."""
        base = str(tmp_path / "src.csv")
        self.tools.generate_dataset(base, n=20)
        result = self.tools.generate_dataset(str(tmp_path / "tgt.csv"), rotate_deg=45.0, base=base)
        assert "Rotation" in result[0].text
        assert "45°" in result[0].text

    def test_invalid_n(self, tmp_path):
        """Test odd n is reported as invalid input."""
        with pytest.raises(ValueError, match="Invalid input"):
            self.tools.generate_dataset(str(tmp_path / "x.csv"), n=5)


class TestModelAndTransferTools:
    """Test training, evaluation and transfer tools."""

    def test_pretrain_and_evaluate(self, tmp_path, artifacts, small_config):
        """Test pretraining renders the curve and evaluation renders metrics."""
        tools = ModelTools(small_config)
        out = str(tmp_path / "trained.json")
        result = tools.pretrain_model(artifacts["source"], out, epochs=2)
        assert "Training Curve" in result[0].text
        assert "epoch   2" in result[0].text
        metrics = tools.evaluate_model(out, artifacts["target"])
        assert "Accuracy" in metrics[0].text
        assert "Samples" in metrics[0].text

    def test_adapt_qva(self, tmp_path, artifacts, small_config):
        """Test one-shot adaptation renders the report and saves the model."""
        out = str(tmp_path / "adapted.json")
        result = TransferTools(small_config).adapt_qva(artifacts["model"], artifacts["source"], artifacts["target"], out)
        text = result[0].text
        assert "QVA One-Shot Adaptation" in text
        assert "Residue" in text
        assert "Type 2" in text
        assert os.path.exists(out)

    def test_finetune_gd(self, artifacts, small_config):
        """Test fine-tuning writes the model and curve next to the source model."""
        result = TransferTools(small_config).finetune_gd(artifacts["model"], artifacts["target"], epochs=3)
        assert "Training Curve" in result[0].text
        stem = os.path.splitext(artifacts["model"])[0]
        assert os.path.exists(f"{stem}.gd.json")
        assert len(open(f"{stem}.gd.curve.csv").read().splitlines()) == 4

    def test_compare_methods(self, tmp_path, small_config):
        """Test the benchmark tool renders the summary and epoch table."""
        out_dir = str(tmp_path / "run")
        result = TransferTools(small_config).compare_methods(out_dir)
        text = result[0].text
        assert "Transfer Benchmark" in text
        assert "GD accuracy" in text
        assert os.path.exists(os.path.join(out_dir, "summary.json"))


class TestErrorHandling:
    """Test mapping of library errors onto tool errors."""

    def setup_method(self):
        """Set up a bare tool."""
        self.tool = QvaTool(ExperimentConfig())

    def test_domain_error_is_value_error(self):
        """Test input errors become ValueError."""
        with pytest.raises(ValueError, match="Invalid input"):
            self.tool._handle_error("align", DomainError("empty"))

    def test_divergence_is_runtime_error(self):
        """Test numeric failures become RuntimeError."""
        with pytest.raises(RuntimeError, match="Failed to train"):
            self.tool._handle_error("train", TrainingDivergedError("nan", model=None, epoch=1))

    def test_unexpected_error_is_runtime_error(self):
        """Test anything else becomes RuntimeError."""
        with pytest.raises(RuntimeError):
            self.tool._handle_error("compare", KeyError("x"))

    def test_unknown_kind_falls_back_to_json(self):
        """Test unknown response kinds render as sorted JSON."""
        result = self.tool._format_response({"b": 1, "a": 2}, "other")
        assert result[0].text == '{\n  "a": 2,\n  "b": 1\n}'

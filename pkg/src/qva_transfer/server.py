"""
MCP server exposing quantum variational transfer experiments.

This module wires the experiment tools into a FastMCP server:
- Configuration loading and validation
- Logging setup
- MCP tool registration and routing
- Signal handling for graceful shutdown

Tools cover dataset generation, pretraining, evaluation, one-shot QVA
adaptation, gradient-descent fine-tuning and the full comparison benchmark.
"""
import os
import signal
import sys
from typing import Annotated, Optional

from mcp.server.fastmcp import FastMCP
from pydantic import Field

from .config.loader import CONFIG_ENV, load_config
from .core.logging import setup_logging
from .tools.dataset import DatasetTools
from .tools.definitions import (
    ADAPT_QVA_DESC,
    COMPARE_METHODS_DESC,
    EVALUATE_MODEL_DESC,
    FINETUNE_GD_DESC,
    GENERATE_DATASET_DESC,
    PRETRAIN_MODEL_DESC,
)
from .tools.model import ModelTools
from .tools.transfer import TransferTools


class QvaMCPServer:
    """Main server class for qva-transfer MCP."""

    def __init__(self, config_path: Optional[str] = None):
        """Initialize the server.

        Args:
            config_path: Path to an experiment config; defaults apply when None
        """
        self.config = load_config(config_path)
        self.logger = setup_logging(self.config.logging)

        self.dataset_tools = DatasetTools(self.config)
        self.model_tools = ModelTools(self.config)
        self.transfer_tools = TransferTools(self.config)

        self.mcp = FastMCP("QvaMCP")
        self._setup_tools()

    def _setup_tools(self) -> None:
        """Register MCP tools with the server."""

        # Dataset tools
        @self.mcp.tool(description=GENERATE_DATASET_DESC)
        def generate_dataset(
            out: Annotated[str, Field(description="Output CSV path (e.g. 'data/source.csv')")],
            n: Annotated[Optional[int], Field(description="Number of samples, even (e.g. 2000)")] = None,
            noise: Annotated[Optional[float], Field(description="Noise standard deviation (e.g. 0.15)")] = None,
            seed: Annotated[Optional[int], Field(description="Random seed (e.g. 42)")] = None,
            rotate_deg: Annotated[Optional[float], Field(description="Rotation in degrees (e.g. 60)")] = None,
            base: Annotated[Optional[str], Field(description="Existing CSV to transform")] = None
        ):
            return self.dataset_tools.generate_dataset(out, n, noise, seed, rotate_deg, base)

        # Model tools
        @self.mcp.tool(description=PRETRAIN_MODEL_DESC)
        def pretrain_model(
            data: Annotated[str, Field(description="Training CSV path (e.g. 'data/source.csv')")],
            out: Annotated[str, Field(description="Output model JSON path (e.g. 'models/pretrained.json')")],
            epochs: Annotated[Optional[int], Field(description="Number of epochs (e.g. 100)")] = None,
            lr: Annotated[Optional[float], Field(description="Learning rate (e.g. 0.1)")] = None,
            batch: Annotated[Optional[int], Field(description="Mini-batch size (e.g. 32)")] = None,
            seed: Annotated[Optional[int], Field(description="Random seed (e.g. 42)")] = None
        ):
            return self.model_tools.pretrain_model(data, out, epochs, lr, batch, seed)

        @self.mcp.tool(description=EVALUATE_MODEL_DESC)
        def evaluate_model(
            model: Annotated[str, Field(description="Model JSON path (e.g. 'models/pretrained.json')")],
            data: Annotated[str, Field(description="Dataset CSV path (e.g. 'data/target.csv')")]
        ):
            return self.model_tools.evaluate_model(model, data)

        # Transfer tools
        @self.mcp.tool(description=ADAPT_QVA_DESC)
        def adapt_qva(
            model: Annotated[str, Field(description="Pretrained model JSON path")],
            source: Annotated[str, Field(description="Source dataset CSV path")],
            target: Annotated[str, Field(description="Target dataset CSV path")],
            out: Annotated[Optional[str], Field(description="Adapted model JSON path")] = None
        ):
            return self.transfer_tools.adapt_qva(model, source, target, out)

        @self.mcp.tool(description=FINETUNE_GD_DESC)
        def finetune_gd(
            model: Annotated[str, Field(description="Pretrained model JSON path")],
            target: Annotated[str, Field(description="Target dataset CSV path")],
            out: Annotated[Optional[str], Field(description="Fine-tuned model JSON path")] = None,
            epochs: Annotated[Optional[int], Field(description="Number of epochs (e.g. 30)")] = None,
            lr: Annotated[Optional[float], Field(description="Learning rate (e.g. 0.05)")] = None
        ):
            return self.transfer_tools.finetune_gd(model, target, out, epochs, lr)

        @self.mcp.tool(description=COMPARE_METHODS_DESC)
        def compare_methods(
            out_dir: Annotated[Optional[str], Field(description="Artifact directory (e.g. 'runs/seed42')")] = None
        ):
            return self.transfer_tools.compare_methods(out_dir)

    def start(self) -> None:
        """Start the MCP server on stdio.

        The server runs until terminated by a signal or fatal error.
        """
        import anyio

        def signal_handler(signum, frame):
            self.logger.info("Received signal to shutdown...")
            sys.exit(0)

        signal.signal(signal.SIGINT, signal_handler)
        signal.signal(signal.SIGTERM, signal_handler)

        try:
            self.logger.info("Starting MCP server...")
            anyio.run(self.mcp.run_stdio_async)
        except Exception as e:
            self.logger.error(f"Server error: {e}")
            sys.exit(1)


def main() -> None:
    try:
        server = QvaMCPServer(os.getenv(CONFIG_ENV))
        server.start()
    except KeyboardInterrupt:
        print("\nShutting down gracefully...")
        sys.exit(0)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()

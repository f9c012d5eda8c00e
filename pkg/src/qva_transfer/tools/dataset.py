"""
Dataset tools for qva-transfer MCP.

Generates two-moons source data or derives a shifted target domain from an
existing CSV, writing the result to disk and returning a text summary.
"""
from typing import Any, Dict, List, Optional

import numpy as np
from mcp.types import TextContent as Content

from ..config.models import DomainTransform, MoonsConfig
from ..core.datagen import make_moons, read_csv, transform_domain, write_csv
from .base import QvaTool


class DatasetTools(QvaTool):
    """Tools for creating and transforming datasets."""

    def generate_dataset(
        self,
        out: str,
        n: Optional[int] = None,
        noise: Optional[float] = None,
        seed: Optional[int] = None,
        rotate_deg: Optional[float] = None,
        base: Optional[str] = None,
    ) -> List[Content]:
        """Generate or transform a dataset and write it to `out`.

        Unset parameters fall back to the configured data section. With
        `base`, the existing dataset is rotated instead of generating a new one.

        Returns:
            List of Content objects with the dataset summary

        Raises:
            ValueError: If parameters are invalid or `base` cannot be read
            RuntimeError: If writing fails unexpectedly
        """
        try:
            seed = self.config.seed if seed is None else seed
            transform = DomainTransform(rotation_deg=rotate_deg or 0.0)
            if base:
                data = transform_domain(read_csv(base), transform, seed)
            else:
                overrides = {"n": n, "noise_sigma": noise, "seed": seed}
                moons = MoonsConfig.model_validate(
                    {**self.config.data.model_dump(), **{k: v for k, v in overrides.items() if v is not None}}
                )
                data = transform_domain(make_moons(moons), transform, seed)
            write_csv(out, data)
            labels, counts = np.unique(data.y, return_counts=True)
            summary: Dict[str, Any] = {
                "out": out,
                "n": len(data),
                "counts": {str(int(label)): int(count) for label, count in zip(labels, counts)},
            }
            if transform.rotation_deg:
                summary["transform"] = transform.model_dump()
            self.logger.info(f"Wrote {len(data)} samples to {out}")
            return self._format_response(summary, "dataset")
        except Exception as e:
            self._handle_error("generate dataset", e)

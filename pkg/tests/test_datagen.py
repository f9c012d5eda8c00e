"""
Tests for two-moons generation, domain transforms and CSV persistence.
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from qva_transfer.config.models import DomainTransform, MoonsConfig
from qva_transfer.core.datagen import (
    LOWER_LABEL,
    UPPER_LABEL,
    make_moons,
    moon_point,
    read_csv,
    transform_domain,
    write_csv,
)
from qva_transfer.core.errors import DataParseError, DomainError, ShapeError
from qva_transfer.core.vqc_model import Dataset


class TestMoons:
    """Test two-moons generation."""

    def test_arc_endpoints(self):
        """Test the noise-free arc formulas at known parameters."""
        assert np.allclose(moon_point("upper", 0.0), [1.0, 0.0])
        assert np.allclose(moon_point("lower", math.pi / 2), [1.0, -0.5], atol=1e-15)
        with pytest.raises(DomainError):
            moon_point("middle", 0.0)

    def test_class_counts(self):
        """Test n/2 samples per class with the upper arc first."""
        data = make_moons(MoonsConfig(n=100, noise_sigma=0.1, seed=1))
        assert len(data) == 100
        assert np.all(data.y[:50] == UPPER_LABEL)
        assert np.all(data.y[50:] == LOWER_LABEL)

    def test_noise_free_points_lie_on_arcs(self):
        """Test every noise-free sample satisfies its arc equation."""
        data = make_moons(MoonsConfig(n=200, noise_sigma=0.0, seed=2))
        upper, lower = data.X[:100], data.X[100:]
        assert np.max(np.abs(upper[:, 0] ** 2 + upper[:, 1] ** 2 - 1.0)) <= 1e-12
        assert np.max(np.abs((1.0 - lower[:, 0]) ** 2 + (0.5 - lower[:, 1]) ** 2 - 1.0)) <= 1e-12
        assert np.all(upper[:, 1] >= 0.0)

    def test_deterministic_per_seed(self):
        """Test equal seeds are bit-identical and different seeds differ."""
        cfg = MoonsConfig(n=50, seed=3)
        assert np.array_equal(make_moons(cfg).X, make_moons(cfg).X)
        assert not np.array_equal(make_moons(cfg).X, make_moons(MoonsConfig(n=50, seed=4)).X)

    def test_streams_are_independent(self):
        """Test the target stream draws a different sample under the same seed."""
        cfg = MoonsConfig(n=50, seed=3)
        assert not np.array_equal(make_moons(cfg, stream="data").X, make_moons(cfg, stream="target").X)

    def test_odd_sample_count(self):
        """Test odd n is rejected by validation and by the generator."""
        with pytest.raises(ValidationError):
            MoonsConfig(n=7)
        with pytest.raises(DomainError):
            make_moons(MoonsConfig.model_construct(n=7, noise_sigma=0.1, seed=0))


class TestTransformDomain:
    """Test source-to-target feature transforms."""

    def setup_method(self):
        """Set up a source domain."""
        self.data = make_moons(MoonsConfig(n=60, noise_sigma=0.1, seed=5))

    def test_identity_transform(self):
        """Test a zero transform leaves the data unchanged."""
        moved = transform_domain(self.data, DomainTransform(rotation_deg=0.0), seed=1)
        assert np.array_equal(moved.X, self.data.X)
        assert np.array_equal(moved.y, self.data.y)

    def test_full_turn(self):
        """Test a 360 degree rotation is the identity within 1e-12."""
        moved = transform_domain(self.data, DomainTransform(rotation_deg=360.0), seed=1)
        assert np.max(np.abs(moved.X - self.data.X)) <= 1e-12

    def test_half_turn_fixes_centroid(self):
        """Test the centroid is the fixed point of the rotation."""
        moved = transform_domain(self.data, DomainTransform(rotation_deg=180.0), seed=1)
        assert np.max(np.abs(moved.X.mean(axis=0) - self.data.X.mean(axis=0))) <= 1e-12

    def test_rigid_motion_preserves_distances(self):
        """Test rotation plus translation preserves pairwise distances."""
        moved = transform_domain(
            self.data, DomainTransform(rotation_deg=37.0, translation=(0.5, -1.0)), seed=1
        )
        before = np.linalg.norm(self.data.X[:, None] - self.data.X[None], axis=-1)
        after = np.linalg.norm(moved.X[:, None] - moved.X[None], axis=-1)
        assert np.max(np.abs(before - after)) <= 1e-10

    def test_rotation_about_given_center(self):
        """Test an explicit center replaces the centroid."""
        point = Dataset(np.array([[1.0, 0.0]]), np.array([1]))
        moved = transform_domain(point, DomainTransform(rotation_deg=90.0), seed=1, center=np.zeros(2))
        assert np.allclose(moved.X, [[0.0, 1.0]], atol=1e-15)

    def test_extra_noise_is_seeded(self):
        """Test noise comes from the seeded transform stream."""
        transform = DomainTransform(rotation_deg=0.0, extra_noise=0.2)
        first = transform_domain(self.data, transform, seed=9)
        assert np.array_equal(first.X, transform_domain(self.data, transform, seed=9).X)
        assert not np.array_equal(first.X, self.data.X)

    def test_requires_two_features(self):
        """Test non-2D features raise ShapeError."""
        with pytest.raises(ShapeError):
            transform_domain(Dataset(np.zeros((3, 3)), np.ones(3)), DomainTransform(), seed=1)


class TestCsv:
    """Test dataset CSV files."""

    def test_round_trip(self, tmp_path):
        """Test ten random samples survive a write/read cycle exactly."""
        rng = np.random.default_rng(6)
        data = Dataset(rng.normal(size=(10, 2)), rng.choice([-1, 1], 10))
        path = str(tmp_path / "data.csv")
        write_csv(path, data)
        loaded = read_csv(path)
        assert np.array_equal(loaded.X, data.X)
        assert np.array_equal(loaded.y, data.y)

    def test_header(self, tmp_path):
        """Test the header names every feature column and the label."""
        path = tmp_path / "data.csv"
        write_csv(str(path), Dataset(np.zeros((1, 2)), np.array([1])))
        assert path.read_text().splitlines()[0] == "x1,x2,y"

    def test_empty_body(self, tmp_path):
        """Test a header-only file is an empty dataset."""
        path = tmp_path / "empty.csv"
        path.write_text("x1,x2,y\n")
        data = read_csv(str(path))
        assert len(data) == 0
        assert data.dim == 2

    def test_fractional_label(self, tmp_path):
        """Test y = 0.5 raises DataParseError on its line."""
        path = tmp_path / "bad.csv"
        path.write_text("x1,x2,y\n0.1,0.2,1\n0.3,0.4,0.5\n")
        with pytest.raises(DataParseError) as exc:
            read_csv(str(path))
        assert exc.value.line == 3

    @pytest.mark.parametrize(
        "body,line",
        [
            ("a,b,y\n0.1,0.2,1\n", 1),
            ("x1,x2,y\n0.1,1\n", 2),
            ("x1,x2,y\n0.1,abc,1\n", 2),
            ("x1,x2,y\n0.1,0.2,1\n\n0.1,nan,-1\n", 4),
        ],
    )
    def test_malformed_rows(self, tmp_path, body, line):
        """Test bad headers, field counts and values report their line."""
        path = tmp_path / "bad.csv"
        path.write_text(body)
        with pytest.raises(DataParseError) as exc:
            read_csv(str(path))
        assert exc.value.line == line
        assert f"line {line}" in str(exc.value)

import numpy as np
import pytest

from specforge import (
    ClassLabel,
    Dataset,
    Hyperrectangle,
    SpecSet,
    Specification,
    TaskKind,
    gen_grid,
    gen_tree,
    render_specs,
    window_timeseries,
)


class TestRenderSpecs:
    def test_spiral_tree_figure(self, spiral_folds, tmp_path):
        gen, _ = spiral_folds
        specs = gen_tree(gen)
        out = tmp_path / "tree.svg"
        render_specs(specs, gen, out)
        text = out.read_text()
        assert text.startswith("<svg")
        assert text.count("<rect") == len(specs) + 2  # one per spec + background + frame
        assert text.count("<circle") == gen.n

    def test_grid_cells_render_axis_aligned(self, spiral_folds, tmp_path):
        gen, _ = spiral_folds
        specs = gen_grid(gen, 5)
        out = tmp_path / "grid.svg"
        render_specs(specs, gen, out)
        assert out.read_text().count("<rect") == len(specs) + 2

    def test_infinite_sides_clamped_to_frame(self, tmp_path):
        data = Dataset([[0.0, 0.0], [1.0, 1.0]], [0, 1], TaskKind.CLASSIFICATION)
        specs = SpecSet(
            (Specification(Hyperrectangle.unbounded(2), ClassLabel(0)),), TaskKind.CLASSIFICATION, 2
        )
        out = tmp_path / "inf.svg"
        render_specs(specs, data, out, width=400, height=400)
        text = out.read_text()
        assert "inf" not in text.lower().replace("infinity", "")  # no raw infinities leak into SVG
        assert text.count("<rect") == 3

    def test_regression_labels_use_ramp(self, tmp_path):
        data = window_timeseries([1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 1)
        # 1-D windows are 1-D data: rendering requires 2-D, build a 2-D regression set instead
        data = Dataset(np.random.default_rng(0).uniform(size=(10, 2)), np.linspace(0, 1, 10), TaskKind.REGRESSION)
        from specforge import ValueInterval

        specs = SpecSet(
            (Specification(Hyperrectangle([0.0, 0.0], [0.5, 0.5]), ValueInterval(0.2, 0.4)),),
            TaskKind.REGRESSION,
            2,
        )
        out = tmp_path / "reg.svg"
        render_specs(specs, data, out)
        assert out.exists()

    def test_non_2d_rejected(self):
        data = Dataset(np.zeros((3, 4)), [0, 1, 0], TaskKind.CLASSIFICATION)
        specs = SpecSet((), TaskKind.CLASSIFICATION, 4)
        with pytest.raises(ValueError, match="2-D"):
            render_specs(specs, data, "/tmp/never.svg")

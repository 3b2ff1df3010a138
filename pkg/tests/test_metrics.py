import csv
import json
import math
import numpy as np
import pytest
from iidlab.filters import gaussian_kernel
from iidlab.imaging import ImageShapeMismatchException, ImageTensor, MissingImageException, save_image
from iidlab.metrics import (
    METRICS_CSV, METRICS_JSON, EmptyEvaluationException, MetricReport, MetricRow,
    UnmatchedPairsException, WindowSizeException, evaluate, evaluate_decomposition, mse,
    pair_directories, psnr, rmse, ssim,
)
from iidlab.phong import render_suite_dataset


def _flat(value, size=16, channels=3):
    return ImageTensor(np.full((size, size, channels), value))


class TestPointMetrics:

    def test_rmse_one_step(self):
        assert rmse(_flat(0.0), _flat(1 / 255)) == pytest.approx(1.0)

    def test_psnr_one_step(self):
        assert psnr(_flat(0.0), _flat(1 / 255)) == pytest.approx(48.1308, abs=1e-3)

    def test_identical(self, random_image):
        assert rmse(random_image, random_image) == 0.0
        assert psnr(random_image, random_image) == math.inf

    def test_symmetric(self, rng):
        a, b = ImageTensor(rng.uniform(size=(12, 12, 3))), ImageTensor(rng.uniform(size=(12, 12, 3)))
        assert rmse(a, b) == rmse(b, a)
        assert psnr(a, b) == psnr(b, a)

    def test_triangle_inequality(self, rng):
        a, b, c = (ImageTensor(rng.uniform(size=(12, 12, 3))) for _ in range(3))
        assert rmse(a, c) <= rmse(a, b) + rmse(b, c) + 1e-12

    def test_psnr_falls_with_error(self):
        values = [psnr(_flat(0.5), _flat(0.5 + d)) for d in (0.01, 0.02, 0.04)]
        assert values[0] > values[1] > values[2]

    def test_halving_mse_gains_three_db(self, rng):
        a = ImageTensor(rng.uniform(0.3, 0.7, size=(12, 12, 3)))
        noise = rng.normal(scale=0.05, size=(12, 12, 3))
        far, near = ImageTensor(a.data + noise), ImageTensor(a.data + noise / math.sqrt(2))
        assert mse(a, near) == pytest.approx(mse(a, far) / 2)
        assert psnr(a, near) - psnr(a, far) == pytest.approx(10 * math.log10(2), abs=1e-9)

    def test_shape_mismatch(self):
        with pytest.raises(ImageShapeMismatchException, match="x.png"):
            rmse(_flat(0.0, 8), _flat(0.0, 9), "x.png")


class TestSsim:

    def test_self_similarity(self, random_image):
        assert ssim(random_image, random_image) == pytest.approx(1.0)

    def test_symmetric(self, rng):
        a, b = ImageTensor(rng.uniform(size=(16, 16, 3))), ImageTensor(rng.uniform(size=(16, 16, 3)))
        assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)

    def test_inverted_checkerboard_single_window(self):
        rows, cols = np.mgrid[0:11, 0:11]
        board = ((rows + cols) % 2).astype(np.float64)
        x, y = board, 1.0 - board
        weights = gaussian_kernel(1.5, 11).taps
        mu_x, mu_y = np.sum(weights * x), np.sum(weights * y)
        var_x = np.sum(weights * x * x) - mu_x ** 2
        var_y = np.sum(weights * y * y) - mu_y ** 2
        cov = np.sum(weights * x * y) - mu_x * mu_y
        c1, c2 = 0.01 ** 2, 0.03 ** 2
        expected = ((2 * mu_x * mu_y + c1) * (2 * cov + c2)) / ((mu_x ** 2 + mu_y ** 2 + c1) * (var_x + var_y + c2))
        value = ssim(ImageTensor(x), ImageTensor(y))
        assert value < 0
        assert value == pytest.approx(expected, abs=1e-12)

    def test_same_offset_on_both_images(self, rng):
        # a pixel checkerboard has almost no weight under the Gaussian window, so only
        # the structure term differs between the two images
        rows, cols = np.mgrid[0:32, 0:32]
        board = np.where((rows + cols) % 2 == 0, 0.05, -0.05)[..., np.newaxis]
        x = rng.uniform(0.3, 0.5, size=(32, 32, 3))
        y = x + board
        base = ssim(ImageTensor(x), ImageTensor(y))
        assert base < 0.99
        assert ssim(ImageTensor(x + 0.3), ImageTensor(y + 0.3)) == pytest.approx(base, abs=1e-6)

    def test_window_too_large(self):
        with pytest.raises(WindowSizeException):
            ssim(_flat(0.2, 10), _flat(0.2, 10))


class TestReports:

    def test_single_identical_pair(self, random_image):
        report = evaluate([("a.png", random_image, random_image)])
        assert report.mean_rmse == 0.0
        assert report.mean_psnr == math.inf
        assert report.mean_ssim == pytest.approx(1.0)

    def test_means_are_arithmetic(self):
        report = MetricReport("test", [MetricRow("a", 1.0, 30.0, 0.5), MetricRow("b", 3.0, 40.0, 0.7)])
        assert report.means() == {"rmse": 2.0, "psnr": 35.0, "ssim": pytest.approx(0.6)}

    def test_empty(self):
        with pytest.raises(EmptyEvaluationException):
            evaluate([])

    def test_rows_keep_order(self, rng):
        pairs = [(f"{i}.png", _flat(0.5), _flat(0.5 + i / 255)) for i in range(5)]
        report = evaluate(pairs)
        assert [row.id for row in report.rows] == [name for name, _, _ in pairs]

    def test_written_files(self, tmp_path, random_image):
        other = ImageTensor(np.clip(random_image.data + 0.01, 0, 1))
        evaluate([("same.png", random_image, random_image), ("near.png", random_image, other)],
                 out_dir=tmp_path)
        with (tmp_path / METRICS_CSV).open(newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["id", "rmse", "psnr", "ssim", "niqe"]
        assert len(rows) == 3
        assert rows[1][2] == "inf"
        assert rows[1][4] == ""
        summary = json.loads((tmp_path / METRICS_JSON).read_text())
        assert summary["count"] == 2
        assert summary["mean"]["psnr"] == "inf"
        assert "0-255" in summary["scale"]


class TestDirectories:

    def _write(self, directory, names, value=0.5):
        directory.mkdir(exist_ok=True)
        for name in names:
            save_image(_flat(value), directory / name)

    def test_pairs_by_name(self, tmp_path):
        self._write(tmp_path / "ours", ["b.png", "a.png", "extra.png"])
        self._write(tmp_path / "theirs", ["a.png", "b.png"])
        assert [name for name, _, _ in pair_directories(tmp_path / "ours", tmp_path / "theirs")] == ["a.png", "b.png"]

    def test_nothing_matches(self, tmp_path):
        self._write(tmp_path / "ours", ["a.png"])
        self._write(tmp_path / "theirs", ["b.png"])
        with pytest.raises(UnmatchedPairsException):
            pair_directories(tmp_path / "ours", tmp_path / "theirs")

    def test_missing_directory(self, tmp_path):
        self._write(tmp_path / "ours", ["a.png"])
        with pytest.raises(MissingImageException):
            pair_directories(tmp_path / "ours", tmp_path / "absent")


class TestDecomposition:

    def test_ground_truth_scores_perfectly(self):
        triples = render_suite_dataset(2, (16, 16))
        predictions = {render_id: (triple.reflectance, triple.shading) for render_id, triple in triples}
        reports = evaluate_decomposition(triples, predictions)
        assert set(reports) == {"reflectance", "shading", "reconstruction"}
        assert all(report.mean_rmse == 0.0 for report in reports.values())

    def test_missing_prediction(self):
        triples = render_suite_dataset(1, (16, 16))
        with pytest.raises(EmptyEvaluationException):
            evaluate_decomposition(triples, {})

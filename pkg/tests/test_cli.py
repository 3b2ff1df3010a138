import json
import numpy as np
import pytest
from iidlab.cli.main import EXIT_DATA, EXIT_OK, EXIT_USAGE, MANIFEST_FILE, main
from iidlab.imaging import ImageTensor, load_image, save_image
from iidlab.metrics import METRICS_CSV
from iidlab.network import build, save_weights
from iidlab.physmaps import load_map
from iidlab.training import FINAL_WEIGHTS, LOG_FILE, read_log


@pytest.fixture
def image_file(tmp_path, random_image):
    path = tmp_path / "input.png"
    save_image(random_image, path)
    return path


@pytest.fixture
def tiny_run_config(tmp_path, tiny_net_config):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({
        "train": {"epochs": 1, "patch_size": 16, "patches_per_epoch": 4, "batch_size": 2},
        "network": tiny_net_config.to_dict(),
    }))
    return path


class TestRender:

    def test_writes_triple(self, tmp_path):
        out = tmp_path / "render"
        assert main(["render", "--scene", "two-tone-sphere", "--size", "16x16", "--out", str(out)]) == EXIT_OK
        for name in ("image.png", "reflectance.png", "shading.png"):
            assert load_image(out / name).shape[:2] == (16, 16)
        manifest = json.loads((out / MANIFEST_FILE).read_text())
        assert manifest["scene"] == "two-tone-sphere"
        assert manifest["resolution"] == [16, 16]

    def test_same_seed_same_bytes(self, tmp_path):
        for name in ("a", "b"):
            main(["render", "--scene", "two-tone-sphere", "--size", "16x16", "--seed", "4",
                  "--out", str(tmp_path / name)])
        assert (tmp_path / "a" / "image.png").read_bytes() == (tmp_path / "b" / "image.png").read_bytes()

    def test_unknown_scene(self, tmp_path):
        assert main(["render", "--scene", "teapot", "--out", str(tmp_path)]) == EXIT_USAGE

    def test_list(self, capsys):
        assert main(["render", "--list"]) == EXIT_OK
        assert "two-tone-sphere" in capsys.readouterr().out

    def test_help(self):
        with pytest.raises(SystemExit) as info:
            main(["--help"])
        assert info.value.code == 0

    def test_no_command(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == EXIT_USAGE


class TestFeaturize:

    def test_greyscale_input_has_no_ram(self, tmp_path, rng):
        path = tmp_path / "grey.png"
        save_image(ImageTensor(rng.uniform(0.1, 0.9, size=(12, 14))), path)
        assert main(["featurize", "--in", str(path), "--out", str(tmp_path / "maps")]) == EXIT_OK
        ram = load_map(tmp_path / "maps" / "ram.iidmap")
        assert ram.shape == (12, 14, 3)
        assert np.all(ram == 0.0)

    def test_sidecar_dimensions(self, tmp_path, image_file, random_image):
        assert main(["featurize", "--in", str(image_file), "--out", str(tmp_path / "maps"), "--panel"]) == EXIT_OK
        assert load_map(tmp_path / "maps" / "rrg.iidmap").shape == (random_image.height, random_image.width, 3)
        assert load_map(tmp_path / "maps" / "sg.iidmap").shape == (random_image.height, random_image.width, 6)
        assert (tmp_path / "maps" / "panel.png").is_file()

    def test_unreadable_input(self, tmp_path):
        path = tmp_path / "broken.png"
        path.write_bytes(b"not an image")
        assert main(["featurize", "--in", str(path), "--out", str(tmp_path / "maps")]) == EXIT_DATA


class TestTrain:

    def test_missing_data(self, tmp_path):
        assert main(["train", "--data", str(tmp_path / "absent"), "--out", str(tmp_path / "run")]) == EXIT_DATA

    def test_synthetic_run(self, tmp_path, tiny_run_config):
        out = tmp_path / "run"
        status = main(["train", "--synthetic", "2", "--size", "16x16", "--epochs", "5",
                       "--config", str(tiny_run_config), "--out", str(out)])
        assert status == EXIT_OK
        assert (out / FINAL_WEIGHTS).is_file()
        rows = read_log(out / LOG_FILE)
        assert {row.epoch for row in rows} == {0}
        assert len(rows) == 2

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{oops")
        status = main(["train", "--synthetic", "2", "--config", str(path), "--out", str(tmp_path / "run")])
        assert status == EXIT_DATA


class TestDecompose:

    @pytest.fixture
    def weights(self, tmp_path, tiny_net_config):
        path = tmp_path / "net.iidnet"
        save_weights(build(tiny_net_config), path)
        return path

    def test_writes_outputs(self, tmp_path, weights, image_file, random_image):
        out = tmp_path / "out"
        assert main(["decompose", "--weights", str(weights), "--in", str(image_file), "--out", str(out)]) == EXIT_OK
        for name in ("reflectance.png", "shading.png", "reconstruction.png"):
            assert load_image(out / name).shape[:2] == (random_image.height, random_image.width)

    def test_corrupt_weights(self, tmp_path, weights, image_file):
        data = bytearray(weights.read_bytes())
        data[-1] ^= 0xFF
        weights.write_bytes(bytes(data))
        assert main(["decompose", "--weights", str(weights), "--in", str(image_file),
                     "--out", str(tmp_path / "out")]) == EXIT_DATA

    def test_config_mismatch(self, tmp_path, weights, image_file):
        config = tmp_path / "other.json"
        config.write_text(json.dumps({"network": {"trunk_filters": 4}}))
        assert main(["decompose", "--weights", str(weights), "--in", str(image_file), "--config", str(config),
                     "--out", str(tmp_path / "out")]) == EXIT_DATA


class TestEvaluate:

    def _write(self, directory, size=16):
        directory.mkdir()
        save_image(ImageTensor(np.full((size, size, 3), 0.5)), directory / "a.png")
        return directory

    def test_identical_directories(self, tmp_path, capsys):
        produced, reference = self._write(tmp_path / "produced"), self._write(tmp_path / "reference")
        status = main(["evaluate", "--produced", str(produced), "--reference", str(reference),
                       "--out", str(tmp_path / "metrics")])
        assert status == EXIT_OK
        assert (tmp_path / "metrics" / METRICS_CSV).is_file()
        assert capsys.readouterr().out

    def test_size_mismatch(self, tmp_path):
        produced, reference = self._write(tmp_path / "produced"), self._write(tmp_path / "reference", 18)
        assert main(["evaluate", "--produced", str(produced), "--reference", str(reference),
                     "--out", str(tmp_path / "metrics")]) == EXIT_DATA

    def test_no_matching_names(self, tmp_path):
        produced = self._write(tmp_path / "produced")
        reference = tmp_path / "reference"
        reference.mkdir()
        save_image(ImageTensor(np.full((16, 16, 3), 0.5)), reference / "b.png")
        assert main(["evaluate", "--produced", str(produced), "--reference", str(reference),
                     "--out", str(tmp_path / "metrics")]) == EXIT_DATA

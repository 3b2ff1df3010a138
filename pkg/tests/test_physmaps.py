import math
import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy import ndimage
from iidlab.filters import gradient_arrays
from iidlab.imaging import ImageTensor, MapFormatException
from iidlab.phong import get_scene, render_lambertian
from iidlab.physmaps import (
    Channel, DEFAULT_EPS, f_ram, f_rrg, f_sg, featurize, load_map, log_ratio, m_rrg, save_map,
    sg_reduce,
)


def _pixel(r, g, b):
    return ImageTensor(np.array([[[r, g, b]]], dtype=np.float64))


def _smooth_shading(height, width):
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    return 0.3 + 0.7 * (0.5 + 0.5 * np.sin(rows / 5.0) * np.cos(cols / 7.0))


class TestLogRatio:

    def test_double_ratio(self):
        assert log_ratio(_pixel(0.5, 0.25, 0.1), Channel.R, Channel.G).data[0, 0, 0] == pytest.approx(math.log(2))

    def test_equal_channels(self):
        assert log_ratio(_pixel(0.4, 0.4, 0.4), Channel.R, Channel.B).data[0, 0, 0] == 0.0

    def test_zero_is_clamped(self):
        value = log_ratio(_pixel(0.0, 1.0, 0.5), Channel.R, Channel.G).data[0, 0, 0]
        assert value == pytest.approx(math.log(DEFAULT_EPS))
        assert math.isfinite(value)


class TestRrg:

    def test_constant_colour_is_zero(self):
        rrg = f_rrg(ImageTensor(np.broadcast_to([0.7, 0.2, 0.4], (16, 16, 3)))).data
        assert rrg.shape == (16, 16, 3)
        assert np.abs(rrg.data).max() <= 1e-10

    def test_invariant_to_shading(self, rng):
        image = rng.uniform(0.1, 1.0, size=(20, 24, 3))
        shading = _smooth_shading(20, 24)[..., np.newaxis]
        plain = f_rrg(ImageTensor(image)).data.data
        shaded = f_rrg(ImageTensor(image * shading)).data.data
        assert_allclose(shaded, plain, atol=1e-6)

    def test_chromatic_edge(self):
        image = np.empty((16, 24, 3))
        image[:, :12] = (0.8, 0.2, 0.2)
        image[:, 12:] = (0.2, 0.8, 0.2)
        rrg = f_rrg(ImageTensor(image)).data.data
        assert rrg[8, 11, 0] > 0.1
        assert np.abs(rrg[:, :6, 0]).max() < 1e-10
        assert np.abs(rrg[:, 18:, 0]).max() < 1e-10

    def test_mask_averages_channel_pairs(self, random_image):
        rrg = f_rrg(random_image).data.data
        mask = m_rrg(random_image).data
        assert_allclose(mask[..., 0], (rrg[..., 0] + rrg[..., 1]) / 2)
        assert_allclose(mask[..., 1], (rrg[..., 0] + rrg[..., 2]) / 2)
        assert_allclose(mask[..., 2], (rrg[..., 1] + rrg[..., 2]) / 2)


class TestRam:

    def test_greyscale_is_zero(self):
        ram = f_ram(ImageTensor(np.full((4, 4, 3), 0.6))).data.data
        assert_array_equal(ram, 0.0)

    def test_dominant_red(self):
        ram = f_ram(_pixel(0.6, 0.3, 0.3)).data.data[0, 0]
        assert_allclose(ram, [math.log(2), 0.0, 0.0], atol=1e-12)

    def test_saturates_at_one(self):
        ram = f_ram(_pixel(1.0, DEFAULT_EPS, DEFAULT_EPS)).data.data[0, 0]
        assert_allclose(ram, [1.0, 0.0, 0.0])

    def test_range(self, random_image):
        ram = f_ram(random_image).data.data
        assert ram.min() >= 0.0 and ram.max() <= 1.0

    def test_invariant_to_shading(self, rng):
        image = rng.uniform(0.1, 1.0, size=(12, 12, 3))
        shading = _smooth_shading(12, 12)[..., np.newaxis]
        assert_allclose(f_ram(ImageTensor(image * shading)).data.data, f_ram(ImageTensor(image)).data.data,
                        atol=1e-6)


def _random_illumination(rng, height, width):
    # smooth positive field in [0.3, 1.0] from a few random low-frequency waves
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    field = np.zeros((height, width))
    for _ in range(3):
        fy, fx = rng.uniform(-0.3, 0.3, size=2)
        field += np.sin(fy * rows + fx * cols + rng.uniform(0, 2 * np.pi))
    return (0.3 + 0.7 * (field + 3) / 6)[..., np.newaxis]


class TestIlluminationInvariance:

    @pytest.mark.parametrize("seed", range(100))
    def test_maps_ignore_shading(self, seed):
        rng = np.random.default_rng(seed)
        height, width = rng.integers(12, 25, size=2)
        image = rng.uniform(0.05, 1.0, size=(height, width, 3))
        lit = ImageTensor(image * _random_illumination(rng, height, width))
        plain = ImageTensor(image)
        assert_allclose(f_rrg(lit).data.data, f_rrg(plain).data.data, atol=1e-6)
        assert_allclose(f_ram(lit).data.data, f_ram(plain).data.data, atol=1e-6)
        assert_allclose(m_rrg(lit).data, m_rrg(plain).data, atol=1e-6)

    @pytest.mark.parametrize("seed", range(10))
    def test_rrg_ignores_per_channel_gain(self, seed):
        rng = np.random.default_rng(seed)
        image = rng.uniform(0.05, 1.0, size=(16, 16, 3))
        gained = ImageTensor(image * rng.uniform(0.3, 1.0, size=3))
        assert_allclose(f_rrg(gained).data.data, f_rrg(ImageTensor(image)).data.data, atol=1e-6)
        assert_allclose(m_rrg(gained).data, m_rrg(ImageTensor(image)).data, atol=1e-6)


class TestShadingGradient:

    def test_masked_pixels_are_exactly_zero(self, random_image):
        sg = f_sg(random_image)
        masked = sg.mask.data >= sg.threshold
        assert masked.any()
        assert np.all(sg.gx.data[masked] == 0.0)
        assert np.all(sg.gy.data[masked] == 0.0)

    def test_matches_log_shading_inside_regions(self):
        # inside each reflectance region ln I differs from ln S by a constant per channel
        triple = render_lambertian(get_scene("two-tone-sphere", seed=0), (64, 64))
        image, reflectance, shading = triple.image.data, triple.reflectance.data, triple.shading.data
        first = np.all(reflectance == reflectance[triple.coverage][0], axis=-1)
        sg = f_sg(triple.image)
        expected_x, expected_y = gradient_arrays(np.log(np.maximum(shading, DEFAULT_EPS)), 1.0)
        bright = triple.coverage & (image.min(axis=-1) > 2 * DEFAULT_EPS)
        checked = 0
        for region in (first, triple.coverage & ~first):
            inside = ndimage.binary_erosion(region & bright, structure=np.ones((7, 7)))
            for c in range(3):
                assert_allclose(sg.gx.data[inside, c], expected_x[inside, 0], atol=1e-4)
                assert_allclose(sg.gy.data[inside, c], expected_y[inside, 0], atol=1e-4)
            checked += int(inside.sum())
        assert checked > 50

    def test_reduce_multiplies_channels(self):
        sg = f_sg(ImageTensor(np.full((8, 8, 3), 0.5)))
        gx = np.tile([2.0, 3.0, 0.5], (8, 8, 1))
        reduced_x, reduced_y = sg_reduce(type(sg)(ImageTensor(gx), sg.gy, sg.mask, sg.threshold))
        assert reduced_x.shape == (8, 8, 1)
        assert_allclose(reduced_x.data, 3.0)
        assert_array_equal(reduced_y.data, 0.0)

    def test_featurize_agrees_with_single_maps(self, random_image):
        maps = featurize(random_image)
        assert_array_equal(maps.rrg.data.data, f_rrg(random_image).data.data)
        assert_array_equal(maps.ram.data.data, f_ram(random_image).data.data)
        assert_array_equal(maps.sg.gx.data, f_sg(random_image).gx.data)

    def test_sigma_changes_support(self, random_image):
        assert not np.allclose(f_rrg(random_image, sigma=2.0).data.data, f_rrg(random_image).data.data)


class TestMapFiles:

    def test_round_trip(self, tmp_path, random_image):
        path = tmp_path / "rrg.iidmap"
        save_map(f_rrg(random_image).data, path)
        loaded = load_map(path)
        assert loaded.shape == (24, 32, 3)
        assert_allclose(loaded, f_rrg(random_image).data.data.astype(np.float32))

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.iidmap"
        path.write_bytes(b"NOTAMAP" + bytes(32))
        with pytest.raises(MapFormatException):
            load_map(path)

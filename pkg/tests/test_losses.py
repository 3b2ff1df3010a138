import dataclasses
import numpy as np
import pytest
from numpy.testing import assert_allclose
from iidlab.autograd import Tensor, grad_check, sigmoid
from iidlab.filters import spatial_gradient
from iidlab.imaging import ImageTensor
from iidlab.losses import (
    LossWeights, l_ram, l_recon, l_rrg, l_sg, l_ss, loss_targets, total_loss,
)
from iidlab.physmaps import DEFAULT_EPS, f_rrg


def _batch(values):
    return np.asarray(values, dtype=np.float64)[np.newaxis]


def _ramp(height, width, start=0.1, slope=0.01):
    cols = np.tile(np.arange(width, dtype=np.float64), (height, 1))
    return (start + slope * cols)[..., np.newaxis]


class TestWeights:

    def test_defaults(self):
        assert LossWeights().as_tuple() == (1.0, 0.01, 0.01, 0.0001, 0.1)

    def test_combine_unit_terms(self):
        assert LossWeights().combine(1, 1, 1, 1, 1) == pytest.approx(1.1201)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            LossWeights(ss=-0.1)

    def test_dict_round_trip(self):
        weights = LossWeights(recon=2.0, ram=0.5)
        assert LossWeights.from_dict(weights.to_dict()) == weights


class TestRecon:

    def test_half(self):
        loss = l_recon(Tensor(np.ones((1, 4, 4, 3))), Tensor(np.ones((1, 4, 4, 1))), np.full((1, 4, 4, 3), 0.5))
        assert loss.item() == pytest.approx(0.5)

    def test_exact_product(self, sphere_render):
        images = _batch(sphere_render.image.data)
        loss = l_recon(Tensor(_batch(sphere_render.reflectance.data)),
                       Tensor(_batch(sphere_render.shading.data)), images)
        assert loss.item() <= 1e-12


class TestShadingSmoothness:

    def test_constant_shading(self, rng):
        images = rng.uniform(0.2, 0.9, size=(1, 12, 12, 3))
        assert l_ss(Tensor(np.full((1, 12, 12, 1), 0.4)), images).item() < 1e-12

    def test_ramp_on_grey_input(self):
        shading = _ramp(16, 20)
        images = np.full((1, 16, 20, 3), 0.5)
        magnitude = spatial_gradient(ImageTensor(shading)).magnitude.data
        assert_allclose(magnitude[3:-3, 3:-3], 0.01, atol=1e-12)
        assert l_ss(Tensor(shading[np.newaxis]), images).item() == pytest.approx(magnitude.mean(), abs=1e-12)

    def test_reflectance_edges_switch_it_off(self):
        shading = Tensor(_ramp(16, 20)[np.newaxis])
        images = np.full((1, 16, 20, 3), 0.5)
        targets = dataclasses.replace(loss_targets(images),
                                      smoothness_weight=np.exp(-10.0 * np.full((1, 16, 20, 1), 100.0)))
        assert l_ss(shading, images, targets).item() == 0.0


class TestRrg:

    def test_input_as_reflectance(self, rng):
        images = rng.uniform(0.1, 0.9, size=(1, 12, 12, 3))
        assert l_rrg(Tensor(images), images).item() < 1e-12

    def test_shaded_reflectance(self, rng):
        reflectance = rng.uniform(0.1, 0.9, size=(1, 12, 12, 3))
        rows, cols = np.mgrid[0:12, 0:12]
        shading = (0.4 + 0.05 * rows + 0.02 * cols)[np.newaxis, ..., np.newaxis] / 1.2
        assert l_rrg(Tensor(reflectance), reflectance * shading).item() < 1e-6

    def test_constant_reflectance(self):
        image = np.empty((16, 24, 3))
        image[:, :12] = (0.8, 0.2, 0.2)
        image[:, 12:] = (0.2, 0.8, 0.2)
        reflectance = Tensor(np.broadcast_to([0.5, 0.3, 0.2], (1, 16, 24, 3)))
        expected = f_rrg(ImageTensor(image)).data.data.mean()
        assert l_rrg(reflectance, image[np.newaxis]).item() == pytest.approx(expected, abs=1e-12)


class TestShadingGradient:

    def test_flat_input_gives_zero(self):
        shading = Tensor(_ramp(12, 12)[np.newaxis])
        assert l_sg(shading, np.full((1, 12, 12, 3), 0.5)).item() < 1e-20

    def test_constant_shading_against_shaded_input(self):
        images = (_ramp(16, 16, start=0.3, slope=0.04) * np.array([0.8, 0.6, 0.4]))[np.newaxis]
        targets = loss_targets(images)
        assert np.abs(targets.sg_x).max() > 0
        expected = np.mean(targets.sg_x ** 2) + np.mean(targets.sg_y ** 2)
        loss = l_sg(Tensor(np.full((1, 16, 16, 1), 0.5)), images, targets)
        assert loss.item() == pytest.approx(expected, abs=1e-12)


class TestRam:

    def test_greyscale_input(self, rng):
        reflectance = Tensor(rng.uniform(size=(1, 8, 8, 3)))
        assert l_ram(reflectance, np.full((1, 8, 8, 3), 0.3)).item() == 0.0

    def test_map_as_reflectance(self, rng):
        images = rng.uniform(0.1, 0.9, size=(1, 8, 8, 3))
        assert l_ram(Tensor(loss_targets(images).ram), images).item() == 0.0

    def test_saturated_red(self):
        images = np.broadcast_to([1.0, DEFAULT_EPS, DEFAULT_EPS], (1, 8, 8, 3))
        assert l_ram(Tensor(np.zeros((1, 8, 8, 3))), images).item() == pytest.approx(1 / 3)


class TestTotal:

    def _prediction(self, rng, size=8):
        images = rng.uniform(0.1, 0.9, size=(1, size, size, 3))
        reflectance = Tensor(rng.uniform(0.2, 0.8, size=(1, size, size, 3)))
        shading = Tensor(rng.uniform(0.2, 0.8, size=(1, size, size, 1)))
        return reflectance, shading, images

    def test_terms_are_non_negative(self, rng):
        breakdown = total_loss(*self._prediction(rng))
        assert all(value >= 0 for value in breakdown.terms().values())

    def test_total_combines_terms(self, rng):
        breakdown = total_loss(*self._prediction(rng))
        assert breakdown.total == LossWeights().combine(*breakdown.terms().values())
        assert breakdown.tensor.item() == pytest.approx(breakdown.total, rel=1e-12)

    def test_zero_weights(self, rng):
        weights = LossWeights(0.0, 0.0, 0.0, 0.0, 0.0)
        assert total_loss(*self._prediction(rng), weights=weights).total == 0.0

    def test_gradient_in_reflectance_and_shading(self, rng):
        reflectance, shading, images = self._prediction(rng)
        targets = loss_targets(images)

        def through_reflectance(raw):
            return total_loss(sigmoid(raw), shading, images, targets=targets).tensor

        def through_shading(raw):
            return total_loss(reflectance, sigmoid(raw), images, targets=targets).tensor

        assert grad_check(through_reflectance, rng.normal(size=(1, 8, 8, 3)), tol=1e-3).passed
        assert grad_check(through_shading, rng.normal(size=(1, 8, 8, 1)), tol=1e-3).passed

    def test_input_only_receives_reconstruction_gradient(self, rng):
        reflectance, shading, values = self._prediction(rng)
        images = Tensor(values, requires_grad=True)
        total_loss(reflectance, shading, images).tensor.backward()
        through_total = images.grad.copy()
        images.zero_grad()
        l_recon(reflectance, shading, images).backward()
        assert_allclose(through_total, images.grad, atol=1e-15)

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from iidlab import autograd as ag
from iidlab.autograd import (
    SIGMOID_BOUND, Graph, NonPositiveLogException, NonScalarLossException, ShapeMismatchException,
    Tensor, grad_check,
)
from iidlab.filters import Kernel2D, convolve2d, gaussian_derivative_kernels
from iidlab.imaging import ImageTensor


def _weighted(op, weights):
    # random fixed weights make every output element matter
    return lambda t: ag.mean(ag.mul(op(t), weights))


class TestBasics:

    def test_sigmoid_at_zero(self):
        x = Tensor(np.zeros(1), requires_grad=True)
        y = ag.sigmoid(x)
        ag.mean(y).backward()
        assert y.data[0] == 0.5
        assert x.grad[0] == pytest.approx(0.25)

    def test_sigmoid_stays_inside_unit_interval(self):
        y = ag.sigmoid(np.array([-1000.0, -40.0, 40.0, 1000.0]))
        assert np.all(y.data > 0.0) and np.all(y.data < 1.0)
        assert y.data[0] == SIGMOID_BOUND
        assert y.data[-1] == 1.0 - SIGMOID_BOUND

    def test_item_needs_single_element(self):
        assert Tensor([[2.5]]).item() == 2.5
        with pytest.raises(ValueError):
            Tensor(np.zeros(3)).item()

    def test_leaky_relu_negative(self):
        x = Tensor([-1.0], requires_grad=True)
        y = ag.leaky_relu(x)
        ag.mean(y).backward()
        assert y.data[0] == pytest.approx(-0.2)
        assert x.grad[0] == pytest.approx(0.2)

    def test_mean_of_squares(self):
        x = Tensor([1.0, 2.0, 3.0], requires_grad=True)
        ag.mean(x * x).backward()
        assert_allclose(x.grad, [2 / 3, 4 / 3, 2.0])

    def test_unused_leaf_has_zero_grad(self):
        x = Tensor([1.0, 2.0], requires_grad=True)
        unused = Tensor([5.0], requires_grad=True)
        ag.mean(ag.exp(x)).backward()
        assert_array_equal(unused.grad, 0.0)

    def test_gradients_accumulate(self):
        x = Tensor([1.0, 2.0, 3.0], requires_grad=True)
        ag.mean(x * x).backward()
        ag.mean(x * x).backward()
        assert_allclose(x.grad, [4 / 3, 8 / 3, 4.0])
        x.zero_grad()
        assert_array_equal(x.grad, 0.0)

    def test_shared_subexpression(self):
        x = Tensor([3.0], requires_grad=True)
        y = ag.exp(x)
        ag.mean(ag.add(y, y)).backward()
        assert x.grad[0] == pytest.approx(2 * np.exp(3.0))

    def test_non_scalar_loss(self):
        x = Tensor([1.0, 2.0], requires_grad=True)
        with pytest.raises(NonScalarLossException):
            ag.exp(x).backward()

    def test_log_of_non_positive(self):
        with pytest.raises(NonPositiveLogException):
            ag.log(Tensor([1.0, 0.0]))

    def test_log_with_clamp(self):
        x = Tensor([1e-5, 1.0], requires_grad=True)
        y = ag.log(x, eps=1e-3)
        ag.mean(y).backward()
        assert y.data[0] == pytest.approx(np.log(1e-3))
        assert_allclose(x.grad, [0.0, 0.5])

    def test_mul_shape_mismatch(self):
        with pytest.raises(ShapeMismatchException):
            ag.mul(Tensor(np.ones((1, 2, 2, 2))), Tensor(np.ones((1, 2, 2, 3))))

    def test_mul_broadcasts_single_channel(self):
        shading = Tensor(np.full((1, 2, 2, 1), 2.0), requires_grad=True)
        colour = Tensor(np.ones((1, 2, 2, 3)))
        out = ag.mul(colour, shading)
        assert out.shape == (1, 2, 2, 3)
        ag.mean(out).backward()
        assert_allclose(shading.grad, 3 / 12)

    def test_graph_is_topological(self):
        x = Tensor([1.0, 2.0], requires_grad=True)
        out = ag.mean(ag.mul(ag.exp(x), ag.sigmoid(x)))
        graph = Graph.from_output(out)
        position = {id(node): i for i, node in enumerate(graph.nodes)}
        for node in graph.nodes:
            for parent in node.parents:
                assert position[id(parent)] < position[id(node)]
        assert graph.output is out

    def test_untracked_graph_is_empty(self):
        out = ag.mean(ag.exp(Tensor([1.0])))
        assert not out.requires_grad
        assert out.parents == ()


class TestGradCheck:

    def test_quadratic_is_exact(self, rng):
        coefficients = rng.uniform(0.5, 2.0, size=5)
        report = grad_check(lambda t: ag.mean(ag.mul(ag.mul(t, t), coefficients)),
                            rng.uniform(0.5, 2.0, size=5))
        assert report.max_rel_error < 1e-8
        assert report.passed

    def test_kink_is_excluded(self):
        report = grad_check(lambda t: ag.mean(ag.abs(t)), [0.0, 1.0])
        assert report.excluded == ((0,),)
        assert report.checked == 1
        assert report.passed

    @pytest.mark.parametrize("name, op, low, high", [
        ("exp", ag.exp, -1.0, 1.0),
        ("log", lambda t: ag.log(t), 0.2, 1.0),
        ("log_clamped", lambda t: ag.log(t, 1e-3), 0.2, 1.0),
        ("abs", ag.abs, 0.2, 1.0),
        ("sigmoid", ag.sigmoid, -2.0, 2.0),
        ("leaky_relu", ag.leaky_relu, -1.0, 1.0),
        ("scalar_mul", lambda t: ag.scalar_mul(t, -1.5), -1.0, 1.0),
        ("select_channel", lambda t: ag.concat([ag.select_channel(t, 2)] * 3), -1.0, 1.0),
        ("channel_max", lambda t: ag.mul(ag.channel_max(t), t), -1.0, 1.0),
        ("reflection_pad", lambda t: ag.reflection_pad(t, 1), -1.0, 1.0),
    ])
    def test_unary_ops(self, rng, name, op, low, high):
        point = rng.uniform(low, high, size=(1, 4, 4, 3))
        weights = rng.normal(size=op(Tensor(point)).shape)
        report = grad_check(_weighted(op, weights), point)
        assert report.passed, f"{name}: {report.max_rel_error}"

    def test_binary_ops(self, rng):
        other = Tensor(rng.uniform(0.5, 1.5, size=(1, 4, 4, 3)))
        shading = Tensor(rng.uniform(0.5, 1.5, size=(1, 4, 4, 1)))
        for op in (lambda t: ag.add(t, other), lambda t: ag.sub(other, t), lambda t: ag.mul(t, other),
                   lambda t: ag.mul(t, shading), lambda t: ag.hypot(t, other)):
            point = rng.uniform(0.5, 1.5, size=(1, 4, 4, 3))
            weights = rng.normal(size=(1, 4, 4, 3))
            assert grad_check(_weighted(op, weights), point).passed

    def test_broadcast_operand(self, rng):
        colour = Tensor(rng.uniform(0.5, 1.5, size=(1, 3, 3, 3)))
        weights = rng.normal(size=(1, 3, 3, 3))
        point = rng.uniform(0.5, 1.5, size=(1, 3, 3, 1))
        assert grad_check(_weighted(lambda t: ag.mul(colour, t), weights), point).passed

    def test_concat(self, rng):
        fixed = Tensor(rng.normal(size=(1, 3, 3, 2)))
        weights = rng.normal(size=(1, 3, 3, 3))
        point = rng.normal(size=(1, 3, 3, 1))
        assert grad_check(_weighted(lambda t: ag.concat([fixed, t]), weights), point).passed

    def test_conv2d_input_kernel_and_bias(self, rng):
        x = rng.normal(size=(2, 5, 5, 2))
        kernel = rng.normal(size=(3, 3, 2, 3))
        bias = rng.normal(size=3)
        weights = rng.normal(size=(2, 3, 3, 3))
        assert grad_check(_weighted(lambda t: ag.conv2d(t, kernel, bias), weights), x).passed
        assert grad_check(_weighted(lambda t: ag.conv2d(x, t, bias), weights), kernel).passed
        assert grad_check(_weighted(lambda t: ag.conv2d(x, kernel, t), weights), bias).passed

    def test_fixed_conv2d(self, rng):
        kernel = gaussian_derivative_kernels(1.0)[0]
        point = rng.normal(size=(1, 8, 8, 2))
        weights = rng.normal(size=(1, 8, 8, 2))
        assert grad_check(_weighted(lambda t: ag.fixed_conv2d(t, kernel), weights), point).passed


class TestConvolution:

    @pytest.mark.parametrize("seed", range(200))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        kh, kw = rng.choice([1, 3, 5], size=2)
        n, c_in, c_out = rng.integers(1, 4, size=3)
        height, width = kh + rng.integers(0, 5), kw + rng.integers(0, 5)
        x = rng.normal(size=(n, height, width, c_in))
        kernel = rng.normal(size=(kh, kw, c_in, c_out))
        bias = rng.normal(size=c_out)
        out_h, out_w = height - kh + 1, width - kw + 1
        expected = np.empty((n, out_h, out_w, c_out))
        for b in range(n):
            for row in range(out_h):
                for col in range(out_w):
                    window = x[b, row:row + kh, col:col + kw, :]
                    for k in range(c_out):
                        expected[b, row, col, k] = np.sum(window * kernel[..., k]) + bias[k]
        assert_allclose(ag.conv2d(x, kernel, bias).data, expected, atol=1e-12)

    def test_padded_conv_agrees_with_filters(self, rng):
        x = rng.normal(size=(6, 6))
        taps = rng.normal(size=(3, 3))
        out = ag.conv2d(ag.reflection_pad(x[np.newaxis, :, :, np.newaxis], 1),
                        taps[:, :, np.newaxis, np.newaxis], [0.5])
        assert out.shape == (1, 6, 6, 1)
        assert_allclose(out.data[0], convolve2d(ImageTensor(x), Kernel2D(taps)).data + 0.5, atol=1e-12)

    def test_fixed_conv2d_agrees_with_filters(self, rng):
        x = rng.normal(size=(9, 9, 3))
        kernel = gaussian_derivative_kernels(1.0)[1]
        assert_allclose(ag.fixed_conv2d(x[np.newaxis], kernel).data[0],
                        convolve2d(ImageTensor(x), kernel).data, atol=1e-12)

    def test_reflection_pad_values(self):
        x = np.arange(9, dtype=np.float64).reshape(1, 3, 3, 1)
        padded = ag.reflection_pad(x, 1).data[0, :, :, 0]
        assert_array_equal(padded[0], [4, 3, 4, 5, 4])
        assert_array_equal(padded[:, 0], [4, 1, 4, 7, 4])

    def test_reflection_pad_too_wide(self):
        with pytest.raises(ShapeMismatchException):
            ag.reflection_pad(np.zeros((1, 2, 2, 1)), 2)

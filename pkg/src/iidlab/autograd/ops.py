"""Differentiable operations over (N, H, W, C) tensors. Every op returns a new Tensor
whose backward rule maps the upstream gradient to the exact adjoint for each input.
"""

from collections.abc import Sequence
from typing import Optional
import numpy as np
from numpy.typing import ArrayLike, NDArray
from .autograd_exceptions import NonPositiveLogException, ShapeMismatchException
from .tensor import Tensor, as_tensor
from ..filters.filter_exceptions import KernelSizeException
from ..filters.kernels import Kernel2D

Operand = Tensor | ArrayLike

SIGMOID_BOUND = 1e-12


def _broadcast_pair(a: Tensor, b: Tensor, operation: str) -> None:
    # equal shapes, or the same shape except a 1-channel vs 3-channel last axis
    if a.shape == b.shape:
        return
    if (a.data.ndim == b.data.ndim and a.data.ndim > 0 and a.shape[:-1] == b.shape[:-1]
            and {a.shape[-1], b.shape[-1]} == {1, 3}):
        return
    raise ShapeMismatchException(a.shape, b.shape, operation)


def _unbroadcast(grad: NDArray[np.float64], shape: tuple[int, ...]) -> NDArray[np.float64]:
    if grad.shape == shape:
        return grad
    return grad.sum(axis=-1, keepdims=True)


def add(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_pair(a, b, "add")
    return Tensor.from_op(a.data + b.data, "add", (a, b),
                          lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)))


def sub(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_pair(a, b, "sub")
    return Tensor.from_op(a.data - b.data, "sub", (a, b),
                          lambda g: (_unbroadcast(g, a.shape), -_unbroadcast(g, b.shape)))


def mul(a: Operand, b: Operand) -> Tensor:
    """Elementwise product; a 1-channel operand is broadcast across 3 channels.
    """

    a, b = as_tensor(a), as_tensor(b)
    _broadcast_pair(a, b, "mul")
    return Tensor.from_op(a.data * b.data, "mul", (a, b),
                          lambda g: (_unbroadcast(g * b.data, a.shape),
                                     _unbroadcast(g * a.data, b.shape)))


def scalar_mul(x: Operand, factor: float) -> Tensor:
    x = as_tensor(x)
    return Tensor.from_op(x.data * factor, "scalar_mul", (x,), lambda g: (g * factor,))


def exp(x: Operand) -> Tensor:
    x = as_tensor(x)
    values = np.exp(x.data)
    return Tensor.from_op(values, "exp", (x,), lambda g: (g * values,))


def log(x: Operand, eps: Optional[float] = None) -> Tensor:
    """Natural log. With `eps`, inputs below eps are clamped to eps and receive no
    gradient; without it, non-positive inputs are an error.

    :param x: Input
    :type x: Tensor | ArrayLike
    :param eps: Optional lower clamp
    :type eps: optional float
    :return: ln(max(x, eps))
    :rtype: Tensor
    """

    x = as_tensor(x)
    if eps is None:
        minimum = float(x.data.min()) if x.data.size else 1.0
        if minimum <= 0:
            raise NonPositiveLogException(minimum)
        return Tensor.from_op(np.log(x.data), "log", (x,), lambda g: (g / x.data,))
    active = x.data > eps
    clamped = np.where(active, x.data, eps)
    return Tensor.from_op(np.log(clamped), "log", (x,),
                          lambda g: (np.where(active, g / clamped, 0.0),))


def abs(x: Operand) -> Tensor:
    """|x| with subgradient 0 at 0.
    """

    x = as_tensor(x)
    return Tensor.from_op(np.abs(x.data), "abs", (x,), lambda g: (g * np.sign(x.data),))


def mean(x: Operand) -> Tensor:
    """Mean over every element, as a 0-d tensor.
    """

    x = as_tensor(x)
    count = x.data.size
    return Tensor.from_op(np.asarray(x.data.mean()), "mean", (x,),
                          lambda g: (np.full(x.shape, float(g) / count),))


def concat(tensors: Sequence[Operand], axis: int = -1) -> Tensor:
    """Concatenates along the channel axis (default) or any other axis.
    """

    tensors = [as_tensor(t) for t in tensors]
    reference = tensors[0].shape
    axis = axis % len(reference)
    for t in tensors[1:]:
        if t.data.ndim != len(reference) or t.shape[:axis] + t.shape[axis + 1:] != reference[:axis] + reference[axis + 1:]:
            raise ShapeMismatchException(reference, t.shape, "concat")
    bounds = np.cumsum([t.shape[axis] for t in tensors])[:-1]
    return Tensor.from_op(np.concatenate([t.data for t in tensors], axis=axis), "concat", tensors,
                          lambda g: np.split(g, bounds, axis=axis))


def select_channel(x: Operand, index: int) -> Tensor:
    """Single channel of an (..., C) tensor, keeping the channel axis.
    """

    x = as_tensor(x)
    if not 0 <= index < x.shape[-1]:
        raise ShapeMismatchException(x.shape, (index,), "select_channel")

    def rule(g):
        grad = np.zeros(x.shape)
        grad[..., index:index + 1] = g
        return (grad,)

    return Tensor.from_op(x.data[..., index:index + 1].copy(), "select_channel", (x,), rule)


def channel_max(x: Operand) -> Tensor:
    """Maximum over the channel axis, keeping it with length 1. The gradient goes to
    the first channel that attains the maximum.
    """

    x = as_tensor(x)
    winner = np.argmax(x.data, axis=-1)[..., np.newaxis]

    def rule(g):
        grad = np.zeros(x.shape)
        np.put_along_axis(grad, winner, g, axis=-1)
        return (grad,)

    return Tensor.from_op(np.take_along_axis(x.data, winner, axis=-1), "channel_max", (x,), rule)


def sigmoid(x: Operand) -> Tensor:
    """Logistic function, bounded to [SIGMOID_BOUND, 1 - SIGMOID_BOUND] so outputs stay
    strictly inside (0, 1) where float64 tanh saturates.
    """

    x = as_tensor(x)
    values = np.clip(0.5 * (1.0 + np.tanh(0.5 * x.data)), SIGMOID_BOUND, 1.0 - SIGMOID_BOUND)
    return Tensor.from_op(values, "sigmoid", (x,), lambda g: (g * values * (1.0 - values),))


def leaky_relu(x: Operand, slope: float = 0.2) -> Tensor:
    x = as_tensor(x)
    positive = x.data > 0
    return Tensor.from_op(np.where(positive, x.data, slope * x.data), "leaky_relu", (x,),
                          lambda g: (np.where(positive, g, slope * g),))


def hypot(a: Operand, b: Operand) -> Tensor:
    """sqrt(a^2 + b^2), with zero subgradient where both inputs vanish.
    """

    a, b = as_tensor(a), as_tensor(b)
    if a.shape != b.shape:
        raise ShapeMismatchException(a.shape, b.shape, "hypot")
    values = np.hypot(a.data, b.data)
    safe = np.where(values > 0, values, 1.0)

    def rule(g):
        scale = np.where(values > 0, g / safe, 0.0)
        return scale * a.data, scale * b.data

    return Tensor.from_op(values, "hypot", (a, b), rule)


def _reflect_indices(length: int, pad: int) -> NDArray[np.intp]:
    return np.pad(np.arange(length), pad, mode="reflect")


def reflection_pad(x: Operand, pad: int = 1) -> Tensor:
    """Pads axes 1 and 2 of an (N, H, W, C) tensor by reflect-101 (edge not repeated).

    :param x: Input batch
    :type x: Tensor | ArrayLike
    :param pad: Border width
    :type pad: int
    :return: (N, H + 2 pad, W + 2 pad, C) tensor
    :rtype: Tensor
    """

    x = as_tensor(x)
    if x.data.ndim != 4:
        raise ShapeMismatchException(x.shape, (0, 0, 0, 0), "reflection_pad",
                                     f"reflection_pad expects (N, H, W, C), got {x.shape}")
    if pad == 0:
        return x
    height, width = x.shape[1], x.shape[2]
    if pad >= height or pad >= width:
        raise ShapeMismatchException(x.shape, (pad,), "reflection_pad",
                                     f"Padding {pad} needs H and W above {pad}, got {height}x{width}")
    rows, cols = _reflect_indices(height, pad), _reflect_indices(width, pad)

    def rule(g):
        folded = np.zeros((g.shape[0], g.shape[1], width, g.shape[3]))
        np.add.at(folded, (slice(None), slice(None), cols), g)
        grad = np.zeros(x.shape)
        np.add.at(grad, (slice(None), rows), folded)
        return (grad,)

    padded = np.pad(x.data, ((0, 0), (pad, pad), (pad, pad), (0, 0)), mode="reflect")
    return Tensor.from_op(padded, "reflection_pad", (x,), rule)


def conv2d(x: Operand, kernel: Operand, bias: Optional[Operand] = None) -> Tensor:
    """Valid 2D correlation, stride 1.

    :param x: Input batch, (N, H, W, C_in)
    :type x: Tensor | ArrayLike
    :param kernel: Weights, (kh, kw, C_in, C_out)
    :type kernel: Tensor | ArrayLike
    :param bias: Optional (C_out,) bias
    :type bias: optional Tensor | ArrayLike
    :return: (N, H - kh + 1, W - kw + 1, C_out) tensor
    :rtype: Tensor
    """

    x, kernel = as_tensor(x), as_tensor(kernel)
    if x.data.ndim != 4 or kernel.data.ndim != 4 or x.shape[3] != kernel.shape[2]:
        raise ShapeMismatchException(x.shape, kernel.shape, "conv2d")
    kh, kw, _, c_out = kernel.shape
    n, height, width, c_in = x.shape
    out_h, out_w = height - kh + 1, width - kw + 1
    if out_h <= 0 or out_w <= 0:
        raise ShapeMismatchException(x.shape, kernel.shape, "conv2d",
                                     f"Kernel {kh}x{kw} does not fit a {height}x{width} input")
    out = np.zeros((n, out_h, out_w, c_out))
    for i in range(kh):
        for j in range(kw):
            out += x.data[:, i:i + out_h, j:j + out_w, :] @ kernel.data[i, j]
    parents = [x, kernel]
    if bias is not None:
        bias = as_tensor(bias)
        if bias.shape != (c_out,):
            raise ShapeMismatchException(kernel.shape, bias.shape, "conv2d")
        out += bias.data
        parents.append(bias)

    def rule(g):
        grad_x = np.zeros(x.shape) if x.requires_grad else None
        grad_k = np.zeros(kernel.shape) if kernel.requires_grad else None
        flat_g = g.reshape(-1, c_out)
        for i in range(kh):
            for j in range(kw):
                if grad_k is not None:
                    window = x.data[:, i:i + out_h, j:j + out_w, :].reshape(-1, c_in)
                    grad_k[i, j] = window.T @ flat_g
                if grad_x is not None:
                    grad_x[:, i:i + out_h, j:j + out_w, :] += g @ kernel.data[i, j].T
        grads = [grad_x, grad_k]
        if bias is not None:
            grads.append(g.sum(axis=(0, 1, 2)))
        return grads

    return Tensor.from_op(out, "conv2d", parents, rule)


def fixed_conv2d(x: Operand, kernel: Kernel2D) -> Tensor:
    """Same-size per-channel correlation with a constant kernel and reflect-101
    borders; agrees with `filters.convolve2d` on every channel.

    :param x: Input batch, (N, H, W, C)
    :type x: Tensor | ArrayLike
    :param kernel: Non-trainable kernel, no larger than the map
    :type kernel: Kernel2D
    :return: Filtered batch of the same shape
    :rtype: Tensor
    """

    x = as_tensor(x)
    if x.data.ndim != 4:
        raise ShapeMismatchException(x.shape, kernel.taps.shape, "fixed_conv2d")
    height, width = x.shape[1], x.shape[2]
    if kernel.size > height or kernel.size > width:
        raise KernelSizeException(kernel.size, (height, width))
    padded = reflection_pad(x, kernel.radius)
    taps = kernel.taps
    size = kernel.size
    out = np.zeros(x.shape)
    for i in range(size):
        for j in range(size):
            if taps[i, j] != 0:
                out += taps[i, j] * padded.data[:, i:i + height, j:j + width, :]

    def rule(g):
        grad = np.zeros(padded.shape)
        for i in range(size):
            for j in range(size):
                if taps[i, j] != 0:
                    grad[:, i:i + height, j:j + width, :] += taps[i, j] * g
        return (grad,)

    return Tensor.from_op(out, "fixed_conv2d", (padded,), rule)

from collections.abc import Mapping
import numpy as np
from numpy.typing import NDArray
from ..autograd.autograd_exceptions import ShapeMismatchException
from ..autograd.tensor import Tensor


class AdamState:
    """First and second moment estimates per parameter, plus the step count.

    :param beta1: Decay of the first moment
    :type beta1: float
    :param beta2: Decay of the second moment
    :type beta2: float
    :param eps: Denominator offset
    :type eps: float
    """

    __slots__ = "m", "v", "t", "_beta1", "_beta2", "_eps"

    def __init__(self, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        if not 0 <= beta1 < 1 or not 0 <= beta2 < 1:
            raise ValueError("Parameters 'beta1' and 'beta2' must lie in [0, 1).")
        if eps <= 0:
            raise ValueError("Parameter 'eps' must be positive.")
        self.m: dict[str, NDArray[np.float64]] = {}
        self.v: dict[str, NDArray[np.float64]] = {}
        self.t = 0
        self._beta1 = beta1
        self._beta2 = beta2
        self._eps = eps

    def __repr__(self):
        return (f"{self.__class__.__name__}(beta1={self._beta1!r}, beta2={self._beta2!r}, "
                f"eps={self._eps!r}, t={self.t!r})")

    @property
    def beta1(self) -> float:
        return self._beta1

    @property
    def beta2(self) -> float:
        return self._beta2

    @property
    def eps(self) -> float:
        return self._eps


def adam_step(params: Mapping[str, Tensor], grads: Mapping[str, NDArray[np.float64]],
              state: AdamState, lr: float) -> None:
    """One Adam update with bias correction, applied in place to every parameter that
    has a gradient:

        m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
        p <- p - lr * m_hat / (sqrt(v_hat) + eps)

    :param params: Parameters by name
    :type params: Mapping[str, Tensor]
    :param grads: Gradients by name, shaped like the parameters
    :type grads: Mapping[str, NDArray[np.float64]]
    :param state: Optimizer state, updated in place
    :type state: AdamState
    :param lr: Learning rate
    :type lr: float
    """

    if lr <= 0:
        raise ValueError("Parameter 'lr' must be positive.")
    for name, grad in grads.items():
        if grad.shape != params[name].shape:
            raise ShapeMismatchException(params[name].shape, grad.shape, "adam_step")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1 ** state.t
    correction2 = 1.0 - b2 ** state.t
    for name, grad in grads.items():
        param = params[name]
        m = b1 * state.m.get(name, 0.0) + (1.0 - b1) * grad
        v = b2 * state.v.get(name, 0.0) + (1.0 - b2) * grad * grad
        state.m[name], state.v[name] = m, v
        param.data = param.data - lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)

from dataclasses import asdict, dataclass, field
from typing import Any, Optional
import numpy as np
from numpy.typing import NDArray
from ..autograd import ops
from ..autograd.tensor import Tensor, as_tensor
from ..filters.kernels import gaussian_derivative_kernels
from ..physmaps.feature_maps import (DEFAULT_EPS, DEFAULT_SG_THRESHOLD, DEFAULT_SIGMA, RRG_PAIRS,
                                     ram_array, rrg_array, sg_reduced_arrays)

# edge-aware smoothness falls off as exp(-SMOOTHNESS_FALLOFF * rrg)
SMOOTHNESS_FALLOFF = 10.0

TERM_NAMES = ("recon", "ss", "rrg", "sg", "ram")


@dataclass(frozen=True, slots=True)
class LossWeights:
    """Balancing coefficients of the five loss terms.

    :param recon: Weight of the reconstruction term
    :type recon: float
    :param ss: Weight of the shading smoothness term
    :type ss: float
    :param rrg: Weight of the reflectance ratio gradient term
    :type rrg: float
    :param sg: Weight of the shading gradient term
    :type sg: float
    :param ram: Weight of the reflectance approximation term
    :type ram: float
    """

    recon: float = 1.0
    ss: float = 0.01
    rrg: float = 0.01
    sg: float = 0.0001
    ram: float = 0.1

    def __post_init__(self):
        for name in TERM_NAMES:
            if getattr(self, name) < 0:
                raise ValueError(f"Parameter '{name}' must be non-negative.")

    def __str__(self):
        return "LossWeights(" + ", ".join(f"{name}={getattr(self, name):g}" for name in TERM_NAMES) + ")"

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return tuple(getattr(self, name) for name in TERM_NAMES)

    def combine(self, recon: float, ss: float, rrg: float, sg: float, ram: float) -> float:
        """Weighted sum, accumulated left to right in term order.
        """

        total = 0.0
        for weight, term in zip(self.as_tuple(), (recon, ss, rrg, sg, ram)):
            total = total + weight * term
        return total

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LossWeights":
        return cls(**{name: float(data[name]) for name in TERM_NAMES if name in data})


@dataclass(frozen=True, slots=True, eq=False)
class LossBreakdown:
    """Values of the five terms and their weighted total. `tensor` is the total as a
    tracked scalar to backpropagate from.
    """

    recon: float
    ss: float
    rrg: float
    sg: float
    ram: float
    total: float
    tensor: Optional[Tensor] = field(default=None, repr=False)

    def terms(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in TERM_NAMES}

    def is_finite(self) -> bool:
        return bool(np.isfinite([*self.terms().values(), self.total]).all())


@dataclass(frozen=True, slots=True, eq=False)
class LossTargets:
    """Feature maps of the input batch, computed once and treated as constants.

    :param rrg: f_rrg of the input, (N, H, W, 3)
    :type rrg: NDArray[np.float64]
    :param smoothness_weight: exp(-10 * channel mean of rrg), (N, H, W, 1)
    :type smoothness_weight: NDArray[np.float64]
    :param sg_x: Channel-reduced shading gradient, x component, (N, H, W, 1)
    :type sg_x: NDArray[np.float64]
    :param sg_y: Channel-reduced shading gradient, y component, (N, H, W, 1)
    :type sg_y: NDArray[np.float64]
    :param ram: f_ram of the input, (N, H, W, 3)
    :type ram: NDArray[np.float64]
    """

    rrg: NDArray[np.float64]
    smoothness_weight: NDArray[np.float64]
    sg_x: NDArray[np.float64]
    sg_y: NDArray[np.float64]
    ram: NDArray[np.float64]
    sigma: float = DEFAULT_SIGMA
    eps: float = DEFAULT_EPS


def loss_targets(images: Tensor | NDArray[np.float64], sigma: float = DEFAULT_SIGMA,
                 eps: float = DEFAULT_EPS, threshold: float = DEFAULT_SG_THRESHOLD) -> LossTargets:
    """Computes the constant feature maps of an (N, H, W, 3) input batch.
    """

    data = images.data if isinstance(images, Tensor) else np.asarray(images, dtype=np.float64)
    rrg = rrg_array(data, sigma, eps)
    sg_x, sg_y = sg_reduced_arrays(data, sigma, eps, threshold)
    return LossTargets(
        rrg=rrg,
        smoothness_weight=np.exp(-SMOOTHNESS_FALLOFF * rrg.mean(axis=-1, keepdims=True)),
        sg_x=sg_x,
        sg_y=sg_y,
        ram=ram_array(data, eps),
        sigma=sigma,
        eps=eps,
    )


def _targets(images, targets: Optional[LossTargets]) -> LossTargets:
    return targets if targets is not None else loss_targets(images)


def _gradient(x: Tensor, sigma: float) -> tuple[Tensor, Tensor]:
    kx, ky = gaussian_derivative_kernels(sigma)
    return ops.fixed_conv2d(x, kx), ops.fixed_conv2d(x, ky)


def rrg_tensor(images: Tensor, sigma: float = DEFAULT_SIGMA, eps: float = DEFAULT_EPS) -> Tensor:
    """Differentiable f_rrg of an (N, H, W, 3) tensor, in the RrgMap channel order.
    """

    channels = []
    for a, b in RRG_PAIRS:
        ratio = ops.sub(ops.log(ops.select_channel(images, a.value), eps),
                        ops.log(ops.select_channel(images, b.value), eps))
        channels.append(ops.hypot(*_gradient(ratio, sigma)))
    return ops.concat(channels)


def l_recon(reflectance: Tensor, shading: Tensor, images: Tensor | NDArray[np.float64]) -> Tensor:
    """mean |R * S - I| with S broadcast over the colour channels.

    :param reflectance: (N, H, W, 3)
    :type reflectance: Tensor
    :param shading: (N, H, W, 1)
    :type shading: Tensor
    :param images: Network input, (N, H, W, 3)
    :type images: Tensor | NDArray[np.float64]
    :return: Scalar loss
    :rtype: Tensor
    """

    return ops.mean(ops.abs(ops.sub(ops.mul(reflectance, shading), as_tensor(images))))


def l_ss(shading: Tensor, images: Tensor | NDArray[np.float64],
         targets: Optional[LossTargets] = None) -> Tensor:
    """Shading smoothness: mean |∇S| * exp(-10 * rrg(I)), where |∇S| is the
    derivative-of-Gaussian gradient magnitude and rrg(I) is averaged over channels.
    Both factors are non-negative.

    :param shading: (N, H, W, 1)
    :type shading: Tensor
    :param images: Network input
    :type images: Tensor | NDArray[np.float64]
    :param targets: Precomputed input features
    :type targets: optional LossTargets
    :return: Scalar loss
    :rtype: Tensor
    """

    targets = _targets(images, targets)
    magnitude = ops.hypot(*_gradient(as_tensor(shading), targets.sigma))
    return ops.mean(ops.mul(magnitude, targets.smoothness_weight))


def l_rrg(reflectance: Tensor, images: Tensor | NDArray[np.float64],
          targets: Optional[LossTargets] = None) -> Tensor:
    """mean |f_rrg(R) - f_rrg(I)|; gradients reach R through the log, filter and
    magnitude ops.
    """

    targets = _targets(images, targets)
    predicted = rrg_tensor(as_tensor(reflectance), targets.sigma, targets.eps)
    return ops.mean(ops.abs(ops.sub(predicted, targets.rrg)))


def l_sg(shading: Tensor, images: Tensor | NDArray[np.float64],
         targets: Optional[LossTargets] = None) -> Tensor:
    """Sum over the x and y components of mean |(∇ln S - f'_SG) * f'_SG|, with S
    clamped at eps before the log.
    """

    targets = _targets(images, targets)
    log_shading = ops.log(as_tensor(shading), targets.eps)
    gx, gy = _gradient(log_shading, targets.sigma)
    terms = [ops.mean(ops.abs(ops.mul(ops.sub(g, reference), reference)))
             for g, reference in ((gx, targets.sg_x), (gy, targets.sg_y))]
    return ops.add(*terms)


def l_ram(reflectance: Tensor, images: Tensor | NDArray[np.float64],
          targets: Optional[LossTargets] = None) -> Tensor:
    """mean |(R - f_ram(I)) * f_ram(I)|; greyscale regions contribute nothing.
    """

    targets = _targets(images, targets)
    return ops.mean(ops.abs(ops.mul(ops.sub(reflectance, targets.ram), targets.ram)))


def total_loss(reflectance: Tensor, shading: Tensor, images: Tensor | NDArray[np.float64],
               weights: Optional[LossWeights] = None,
               targets: Optional[LossTargets] = None) -> LossBreakdown:
    """All five terms and their weighted sum.

    :param reflectance: Predicted reflectance, (N, H, W, 3)
    :type reflectance: Tensor
    :param shading: Predicted shading, (N, H, W, 1)
    :type shading: Tensor
    :param images: Network input, (N, H, W, 3)
    :type images: Tensor | NDArray[np.float64]
    :param weights: Term weights; defaults to the standard balance
    :type weights: optional LossWeights
    :param targets: Precomputed input features
    :type targets: optional LossTargets
    :return: Term values, total, and the total as a tensor
    :rtype: LossBreakdown
    """

    weights = weights if weights is not None else LossWeights()
    targets = _targets(images, targets)
    terms = (
        l_recon(reflectance, shading, images),
        l_ss(shading, images, targets),
        l_rrg(reflectance, images, targets),
        l_sg(shading, images, targets),
        l_ram(reflectance, images, targets),
    )
    total = Tensor(0.0)
    for weight, term in zip(weights.as_tuple(), terms):
        total = ops.add(total, ops.scalar_mul(term, weight))
    values = [term.item() for term in terms]
    return LossBreakdown(*values, total=weights.combine(*values), tensor=total)

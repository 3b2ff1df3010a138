from collections.abc import Mapping
import math
from typing import Optional
import numpy as np
from numpy.typing import NDArray
from .config import Activation, LayerSpec, NetConfig
from .network_exceptions import InputSizeException, WeightFormatException
from ..autograd import ops
from ..autograd.tensor import Tensor, as_tensor
from ..imaging.imaging_exceptions import ChannelCountException

MIN_INPUT_SIZE = 8


class NetworkParams:
    """Trainable kernels and biases of every convolution, keyed by stable layer names
    ("trunk0" ... "neck", "refl0" ... "refl_out", "shad0" ... "shad_out").

    Each array is a leaf Tensor with `requires_grad=True`; kernels have shape
    (k, k, C_in, C_out) and biases (C_out,).

    :param config: Architecture the parameters belong to
    :type config: NetConfig
    :param arrays: Values keyed "<layer>.weight" and "<layer>.bias"
    :type arrays: Mapping[str, NDArray[np.float64]]
    """

    __slots__ = "_config", "_tensors"

    def __init__(self, config: NetConfig, arrays: Mapping[str, NDArray[np.float64]]):
        expected = expected_shapes(config)
        if set(arrays) != set(expected):
            missing = sorted(set(expected) - set(arrays))
            extra = sorted(set(arrays) - set(expected))
            raise ValueError(f"Parameter 'arrays' does not match the config (missing {missing}, "
                             f"unexpected {extra}).")
        tensors = {}
        for name, shape in expected.items():
            values = np.asarray(arrays[name], dtype=np.float64)
            if values.shape != shape:
                raise ValueError(f"Parameter '{name}' must have shape {shape}, got {values.shape}.")
            tensors[name] = Tensor(values.copy(), requires_grad=True)
        self._config = config
        self._tensors = tensors

    def __repr__(self):
        return (f"{self.__class__.__name__}(config={self._config!r}, "
                f"parameters={self.parameter_count!r})")

    def __str__(self):
        return (
            f"--- Network Parameters ---\n"
            f"  Layers:      {len(self._tensors) // 2}\n"
            f"  Parameters:  {self.parameter_count}"
        )

    @property
    def config(self) -> NetConfig:
        return self._config

    @property
    def tensors(self) -> dict[str, Tensor]:
        return self._tensors

    @property
    def parameter_count(self) -> int:
        return sum(t.data.size for t in self._tensors.values())

    def weight(self, layer: str) -> Tensor:
        return self._tensors[f"{layer}.weight"]

    def bias(self, layer: str) -> Tensor:
        return self._tensors[f"{layer}.bias"]

    def arrays(self) -> dict[str, NDArray[np.float64]]:
        """Copies of every parameter in storage order.
        """

        return {name: t.data.copy() for name, t in self._tensors.items()}

    def zero_grad(self) -> None:
        for t in self._tensors.values():
            t.zero_grad()

    def is_finite(self) -> bool:
        return all(bool(np.isfinite(t.data).all()) for t in self._tensors.values())


def expected_shapes(config: NetConfig) -> dict[str, tuple[int, ...]]:
    """Parameter names and shapes in storage order.
    """

    k = config.kernel_size
    shapes = {}
    for layer in config.layers():
        shapes[f"{layer.name}.weight"] = (k, k, layer.in_channels, layer.out_channels)
        shapes[f"{layer.name}.bias"] = (layer.out_channels,)
    return shapes


def build(config: Optional[NetConfig] = None) -> NetworkParams:
    """Initializes a network: kernels uniform in ±sqrt(6 / fan_in), biases zero, drawn
    layer by layer in storage order from a generator seeded with `config.seed`.

    :param config: Architecture and seed; defaults to the standard network
    :type config: optional NetConfig
    :return: Fresh parameters
    :rtype: NetworkParams
    """

    config = config if config is not None else NetConfig()
    rng = np.random.default_rng(config.seed)
    arrays = {}
    for name, shape in expected_shapes(config).items():
        if name.endswith(".bias"):
            arrays[name] = np.zeros(shape)
            continue
        fan_in = shape[0] * shape[1] * shape[2]
        limit = math.sqrt(6.0 / fan_in)
        arrays[name] = rng.uniform(-limit, limit, size=shape)
    return NetworkParams(config, arrays)


def from_arrays(config: NetConfig, arrays: Mapping[str, NDArray[np.float64]],
                source: str = "<memory>") -> NetworkParams:
    try:
        return NetworkParams(config, arrays)
    except ValueError as error:
        raise WeightFormatException(source, str(error)) from error


def _block(params: Mapping[str, Tensor], layer: LayerSpec, x: Tensor, config: NetConfig) -> Tensor:
    padded = ops.reflection_pad(x, config.padding)
    y = ops.conv2d(padded, params[f"{layer.name}.weight"], params[f"{layer.name}.bias"])
    if layer.activation is Activation.SIGMOID:
        return ops.sigmoid(y)
    return ops.leaky_relu(y, config.leaky_slope)


def _as_batch(images: Tensor | NDArray[np.float64]) -> Tensor:
    batch = as_tensor(images)
    if batch.data.ndim == 3:
        batch = Tensor(batch.data[np.newaxis]) if not batch.requires_grad else batch
    if batch.data.ndim != 4:
        raise InputSizeException(batch.shape, MIN_INPUT_SIZE,
                                 f"Expected an (N, H, W, 3) batch, got shape {batch.shape}")
    if batch.shape[3] != 3:
        raise ChannelCountException(batch.shape[3], (3,))
    if batch.shape[1] < MIN_INPUT_SIZE or batch.shape[2] < MIN_INPUT_SIZE:
        raise InputSizeException(batch.shape, MIN_INPUT_SIZE)
    return batch


def forward(params: NetworkParams, images: Tensor | NDArray[np.float64],
            track: bool = True) -> tuple[Tensor, Tensor]:
    """Runs the network on a batch.

    The image is concatenated with its channel-wise maximum, passed through the shared
    trunk and neck, then through the reflectance and shading heads.

    :param params: Network parameters
    :type params: NetworkParams
    :param images: (N, H, W, 3) batch, or a single (H, W, 3) image
    :type images: Tensor | NDArray[np.float64]
    :param track: Record the graph for backpropagation into the parameters
    :type track: bool
    :return: Reflectance (N, H, W, 3) and shading (N, H, W, 1), both in (0, 1)
    :rtype: tuple[Tensor, Tensor]
    """

    config = params.config
    batch = _as_batch(images)
    weights = (params.tensors if track
               else {name: Tensor(t.data) for name, t in params.tensors.items()})
    x = ops.concat([batch, ops.channel_max(batch)])
    for layer in config.trunk_layers():
        x = _block(weights, layer, x, config)
    reflectance = x
    for layer in config.head_layers("refl", NetConfig.REFLECTANCE_CHANNELS):
        reflectance = _block(weights, layer, reflectance, config)
    shading = x
    for layer in config.head_layers("shad", NetConfig.SHADING_CHANNELS):
        shading = _block(weights, layer, shading, config)
    return reflectance, shading

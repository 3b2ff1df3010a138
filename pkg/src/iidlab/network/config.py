from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any


class Activation(Enum):
    """Nonlinearity that follows a convolution.
    """

    LEAKY_RELU = "leaky_relu"
    SIGMOID = "sigmoid"

    def __str__(self):
        return self.value

    def __repr__(self):
        return f"<Activation.{self.name}: {self.value!r}>"


@dataclass(frozen=True, slots=True)
class LayerSpec:
    """One reflection-padded convolution of the network.
    """

    name: str
    in_channels: int
    out_channels: int
    activation: Activation


@dataclass(frozen=True, slots=True)
class NetConfig:
    """Architecture of the decomposition network.

    :param trunk_blocks: Number of shared trunk convolution blocks
    :type trunk_blocks: int
    :param trunk_filters: Filters of every trunk block
    :type trunk_filters: int
    :param kernel_size: Odd spatial size of every convolution kernel
    :type kernel_size: int
    :param neck_filters: Filters of the shared layer that feeds both heads
    :type neck_filters: int
    :param head_filters: Filters of the hidden layers of each head
    :type head_filters: tuple[int, ...]
    :param leaky_slope: Negative slope of the leaky ReLUs
    :type leaky_slope: float
    :param seed: Seed of the weight initialization
    :type seed: int
    """

    trunk_blocks: int = 5
    trunk_filters: int = 64
    kernel_size: int = 3
    neck_filters: int = 32
    head_filters: tuple[int, ...] = (16, 8, 4)
    leaky_slope: float = 0.2
    seed: int = 0

    # image channels plus their channel-wise maximum
    INPUT_CHANNELS = 4
    REFLECTANCE_CHANNELS = 3
    SHADING_CHANNELS = 1

    def __post_init__(self):
        object.__setattr__(self, "head_filters", tuple(int(f) for f in self.head_filters))
        if self.trunk_blocks <= 0:
            raise ValueError("Parameter 'trunk_blocks' must be positive.")
        if self.trunk_filters <= 0 or self.neck_filters <= 0:
            raise ValueError("Parameter 'trunk_filters' and 'neck_filters' must be positive.")
        if any(f <= 0 for f in self.head_filters):
            raise ValueError("Parameter 'head_filters' must be positive.")
        if self.kernel_size <= 0 or self.kernel_size % 2 == 0:
            raise ValueError("Parameter 'kernel_size' must be a positive odd integer.")
        if self.leaky_slope < 0:
            raise ValueError("Parameter 'leaky_slope' must be non-negative.")

    def __str__(self):
        return (f"NetConfig: {self.trunk_blocks}x{self.trunk_filters} trunk, neck {self.neck_filters}, "
                f"heads {self.head_filters}, {self.kernel_size}x{self.kernel_size} kernels")

    @property
    def padding(self) -> int:
        return self.kernel_size // 2

    @property
    def depth(self) -> int:
        """Convolutions on any input-to-output path.
        """

        return self.trunk_blocks + 1 + len(self.head_filters) + 1

    @property
    def receptive_radius(self) -> int:
        return self.depth * self.padding

    def architecture(self) -> tuple:
        """Every field that changes what stored weights compute; only the seed is excluded.
        """

        return (self.trunk_blocks, self.trunk_filters, self.kernel_size, self.neck_filters,
                self.head_filters, self.leaky_slope)

    def trunk_layers(self) -> list[LayerSpec]:
        layers = []
        channels = self.INPUT_CHANNELS
        for index in range(self.trunk_blocks):
            layers.append(LayerSpec(f"trunk{index}", channels, self.trunk_filters, Activation.LEAKY_RELU))
            channels = self.trunk_filters
        layers.append(LayerSpec("neck", channels, self.neck_filters, Activation.LEAKY_RELU))
        return layers

    def head_layers(self, head: str, out_channels: int) -> list[LayerSpec]:
        layers = []
        channels = self.neck_filters
        for index, filters in enumerate(self.head_filters):
            layers.append(LayerSpec(f"{head}{index}", channels, filters, Activation.LEAKY_RELU))
            channels = filters
        layers.append(LayerSpec(f"{head}_out", channels, out_channels, Activation.SIGMOID))
        return layers

    def layers(self) -> list[LayerSpec]:
        """All layers in their stable storage order: trunk, neck, reflectance head,
        shading head.
        """

        return (self.trunk_layers()
                + self.head_layers("refl", self.REFLECTANCE_CHANNELS)
                + self.head_layers("shad", self.SHADING_CHANNELS))

    def parameter_count(self) -> int:
        k2 = self.kernel_size ** 2
        return sum(k2 * layer.in_channels * layer.out_channels + layer.out_channels
                   for layer in self.layers())

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["head_filters"] = list(self.head_filters)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "NetConfig":
        known = {name: data[name] for name in cls.__dataclass_fields__ if name in data}
        return cls(**known)

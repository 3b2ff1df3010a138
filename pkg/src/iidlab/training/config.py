from dataclasses import dataclass, field, fields, replace
import json
import math
from os import PathLike
from pathlib import Path
from typing import Any, Optional
from ..imaging.imaging_exceptions import MissingImageException, UnwritablePathException
from ..losses.losses import LossWeights
from ..network.config import NetConfig

DEFAULT_DECAY = math.exp(-0.01)


@dataclass(frozen=True, slots=True)
class TrainConfig:
    """Hyperparameters of a training run.

    :param epochs: Number of epochs
    :type epochs: int
    :param patches_per_epoch: Patches drawn (with replacement) per epoch
    :type patches_per_epoch: int
    :param patch_size: Side of the square patches
    :type patch_size: int
    :param batch_size: Patches per optimizer step; the last batch may be smaller
    :type batch_size: int
    :param lr0: Learning rate of epoch 0
    :type lr0: float
    :param decay: Multiplicative learning-rate decay per epoch
    :type decay: float
    :param seed: Seed of patch sampling and augmentation
    :type seed: int
    :param weights: Loss term weights
    :type weights: LossWeights
    :param resample_each_epoch: Draw fresh patches every epoch; otherwise one fixed pool
        is drawn up front and reshuffled each epoch
    :type resample_each_epoch: bool
    :param checkpoint_every: Write a checkpoint every this many epochs
    :type checkpoint_every: int
    :param prefetch: Batches prepared ahead of the optimizer
    :type prefetch: int
    """

    epochs: int = 100
    patches_per_epoch: int = 2000
    patch_size: int = 64
    batch_size: int = 16
    lr0: float = 0.002
    decay: float = DEFAULT_DECAY
    seed: int = 0
    weights: LossWeights = field(default_factory=LossWeights)
    resample_each_epoch: bool = True
    checkpoint_every: int = 10
    prefetch: int = 2
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        for name in ("epochs", "patches_per_epoch", "patch_size", "batch_size",
                     "checkpoint_every", "prefetch"):
            if getattr(self, name) <= 0:
                raise ValueError(f"Parameter '{name}' must be positive.")
        if self.lr0 <= 0:
            raise ValueError("Parameter 'lr0' must be positive.")
        if not 0 < self.decay <= 1:
            raise ValueError("Parameter 'decay' must lie in (0, 1].")

    def __str__(self):
        return (f"TrainConfig: {self.epochs} epochs x {self.patches_per_epoch} patches "
                f"({self.patch_size}px, batch {self.batch_size}), lr0 {self.lr0:g}, seed {self.seed}")

    @property
    def steps_per_epoch(self) -> int:
        return math.ceil(self.patches_per_epoch / self.batch_size)

    def to_dict(self) -> dict[str, Any]:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["weights"] = self.weights.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TrainConfig":
        known = {f.name: data[f.name] for f in fields(cls) if f.name in data}
        if "weights" in known and not isinstance(known["weights"], LossWeights):
            known["weights"] = LossWeights.from_dict(known["weights"])
        return cls(**known)

    def updated(self, **changes: Any) -> "TrainConfig":
        return replace(self, **changes)


def lr_schedule(epoch: int, cfg: Optional[TrainConfig] = None) -> float:
    """Learning rate of an epoch: lr0 * decay ** epoch.

    :param epoch: Zero-based epoch
    :type epoch: int
    :param cfg: Run configuration; defaults give 0.002 * e^(-0.01 epoch)
    :type cfg: optional TrainConfig
    :return: The learning rate
    :rtype: float
    """

    if epoch < 0:
        raise ValueError("Parameter 'epoch' must be non-negative.")
    cfg = cfg if cfg is not None else TrainConfig()
    return cfg.lr0 * cfg.decay ** epoch


def save_run_config(path: PathLike | str, train: TrainConfig, network: NetConfig) -> None:
    """Writes {"train": ..., "network": ...} as JSON.
    """

    try:
        Path(path).write_text(json.dumps({"train": train.to_dict(), "network": network.to_dict()},
                                         indent=2, sort_keys=True))
    except OSError as error:
        raise UnwritablePathException(path, f"Cannot write config to {path}: {error}") from error


def load_run_config(path: PathLike | str, train: Optional[TrainConfig] = None,
                    network: Optional[NetConfig] = None) -> tuple[TrainConfig, NetConfig]:
    """Reads a JSON run configuration and overlays it on `train` and `network`; values in
    the file take precedence, missing keys keep the given values.

    :param path: JSON file with optional "train" and "network" objects
    :type path: PathLike | str
    :param train: Base training configuration
    :type train: optional TrainConfig
    :param network: Base network configuration
    :type network: optional NetConfig
    :return: The merged configurations
    :rtype: tuple[TrainConfig, NetConfig]
    """

    path = Path(path)
    if not path.is_file():
        raise MissingImageException(path, f"Config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as error:
        raise ValueError(f"Config file {path} is not valid JSON: {error}") from error
    train = train if train is not None else TrainConfig()
    network = network if network is not None else NetConfig()
    train_data = train.to_dict()
    file_train = dict(data.get("train", {}))
    if "weights" in file_train:
        train_data["weights"] = {**train_data["weights"], **file_train.pop("weights")}
    train_data.update(file_train)
    return (TrainConfig.from_dict(train_data),
            NetConfig.from_dict({**network.to_dict(), **data.get("network", {})}))

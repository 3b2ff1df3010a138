from collections.abc import Iterator, Sequence
import logging
from os import PathLike
from pathlib import Path
import queue
import threading
from typing import Any, Optional
import numpy as np
from numpy.typing import NDArray
from .adam import AdamState, adam_step
from .config import TrainConfig, lr_schedule, save_run_config
from .training_exceptions import EmptyDatasetException, NumericalInstabilityException
from .training_log import LogRow, TrainingLog, truncate_log
from ..imaging.datasets import as_rgb
from ..imaging.image_tensor import ImageTensor, Patch, stack_batch
from ..imaging.patches import random_augment, sample_dataset_patches
from ..losses.losses import LossBreakdown, TERM_NAMES, loss_targets, total_loss
from ..network.config import NetConfig
from ..network.model import MIN_INPUT_SIZE, NetworkParams, build, forward, from_arrays
from ..network.network_exceptions import ConfigMismatchException, InputSizeException
from ..network.weights import read_weight_file, save_weights, write_weight_file

logger = logging.getLogger(__name__)

CHECKPOINT_PATTERN = "epoch_{:04d}.iidnet"
FINAL_WEIGHTS = "final.iidnet"
LOG_FILE = "train_log.csv"
CONFIG_FILE = "config.json"

_ADAM_M = "adam.m."
_ADAM_V = "adam.v."

Dataset = Sequence[ImageTensor] | Sequence[tuple[str, ImageTensor]]


class Trainer:
    """Unsupervised training of the decomposition network.

    Each epoch draws `patches_per_epoch` patches (or reshuffles a fixed pool), applies a
    random augmentation to every patch, and runs one Adam step per batch with the
    epoch's learning rate. A producer thread prepares batches through a bounded queue
    while the calling thread owns the parameters; batch order is fixed by the seed.

    :param dataset: Training images, optionally with ids
    :type dataset: Dataset
    :param cfg: Training configuration
    :type cfg: TrainConfig
    :param out_dir: Directory receiving the log, checkpoints and final weights
    :type out_dir: PathLike | str
    :param net_config: Architecture of the network to train
    :type net_config: optional NetConfig
    """

    __slots__ = "_images", "_cfg", "_out_dir", "_net_config", "_skipped"

    def __init__(self, dataset: Dataset, cfg: TrainConfig, out_dir: PathLike | str,
                 net_config: Optional[NetConfig] = None):
        self._cfg = cfg
        self._out_dir = Path(out_dir)
        self._net_config = net_config if net_config is not None else NetConfig()
        self._images, self._skipped = self._usable_images(dataset)

    def __repr__(self):
        return (f"{self.__class__.__name__}(images={len(self._images)}, cfg={self._cfg!r}, "
                f"out_dir={str(self._out_dir)!r})")

    def __str__(self):
        return (
            f"--- Trainer ---\n"
            f"  Images:   {len(self._images)} ({self._skipped} skipped)\n"
            f"  Config:   {self._cfg}\n"
            f"  Network:  {self._net_config}\n"
            f"  Output:   {self._out_dir}"
        )

    @property
    def images(self) -> list[tuple[str, ImageTensor]]:
        return self._images

    @property
    def config(self) -> TrainConfig:
        return self._cfg

    def _usable_images(self, dataset: Dataset) -> tuple[list[tuple[str, ImageTensor]], int]:
        size = self._cfg.patch_size
        usable, skipped = [], 0
        for index, entry in enumerate(dataset):
            image_id, img = entry if isinstance(entry, tuple) else (f"image-{index:04d}", entry)
            if img.height < size or img.width < size:
                logger.warning("skipping %s: %dx%d is smaller than the %dpx patch",
                               image_id, img.height, img.width, size)
                skipped += 1
                continue
            usable.append((image_id, as_rgb(img)))
        if not usable:
            raise EmptyDatasetException("the training set", skipped)
        return usable, skipped

    def run(self, resume_from: Optional[PathLike | str] = None) -> NetworkParams:
        """Trains for `cfg.epochs` epochs, or continues from a checkpoint.

        :param resume_from: Checkpoint written by an earlier run with the same settings
        :type resume_from: optional PathLike | str
        :return: The trained parameters (also saved as final.iidnet)
        :rtype: NetworkParams
        """

        cfg = self._cfg
        self._out_dir.mkdir(parents=True, exist_ok=True)
        save_run_config(self._out_dir / CONFIG_FILE, cfg, self._net_config)
        adam = AdamState(cfg.beta1, cfg.beta2, cfg.adam_eps)
        rng = np.random.default_rng([cfg.seed, 0])
        log_path = self._out_dir / LOG_FILE
        if resume_from is not None:
            params, start_epoch = self._restore(resume_from, adam, rng)
            truncate_log(log_path, start_epoch - 1)
            logger.info("resuming from %s at epoch %d", resume_from, start_epoch)
        else:
            params, start_epoch = build(self._net_config), 0
        pool = None
        if not cfg.resample_each_epoch:
            pool = sample_dataset_patches(self._images, cfg.patches_per_epoch, cfg.patch_size,
                                          np.random.default_rng([cfg.seed, 1]))

        with TrainingLog(log_path, append=resume_from is not None) as log:
            for epoch in range(start_epoch, cfg.epochs):
                self._run_epoch(epoch, params, adam, rng, pool, log)
                log.flush()
                completed = epoch + 1
                if completed % cfg.checkpoint_every == 0 and completed < cfg.epochs:
                    save_checkpoint(self._out_dir / CHECKPOINT_PATTERN.format(completed),
                                    params, adam, completed, rng, cfg)
        if cfg.epochs % cfg.checkpoint_every == 0:
            save_checkpoint(self._out_dir / CHECKPOINT_PATTERN.format(cfg.epochs),
                            params, adam, cfg.epochs, rng, cfg)
        save_weights(params, self._out_dir / FINAL_WEIGHTS)
        logger.info("training finished; weights in %s", self._out_dir / FINAL_WEIGHTS)
        return params

    def _restore(self, path: PathLike | str, adam: AdamState,
                 rng: np.random.Generator) -> tuple[NetworkParams, int]:
        contents = read_weight_file(path)
        if contents.config.architecture() != self._net_config.architecture():
            raise ConfigMismatchException(self._net_config, contents.config)
        params = from_arrays(contents.config, contents.network_arrays(), str(path))
        for name, values in contents.arrays.items():
            if name.startswith(_ADAM_M):
                adam.m[name[len(_ADAM_M):]] = values
            elif name.startswith(_ADAM_V):
                adam.v[name[len(_ADAM_V):]] = values
        adam.t = int(contents.extra["adam_t"])
        rng.bit_generator.state = contents.extra["rng_state"]
        return params, int(contents.extra["epoch"])

    def _epoch_patches(self, rng: np.random.Generator, pool: Optional[list[Patch]]) -> list[Patch]:
        cfg = self._cfg
        if pool is None:
            patches = sample_dataset_patches(self._images, cfg.patches_per_epoch, cfg.patch_size, rng)
        else:
            patches = [pool[i] for i in rng.permutation(len(pool))]
        return [random_augment(patch, rng) for patch in patches]

    def _batches(self, rng: np.random.Generator,
                 pool: Optional[list[Patch]]) -> Iterator[NDArray[np.float64]]:
        # producer draws from rng; the consumer never touches it
        cfg = self._cfg
        batches: queue.Queue = queue.Queue(maxsize=cfg.prefetch)
        failure: list[BaseException] = []
        stop = threading.Event()

        def produce():
            try:
                patches = self._epoch_patches(rng, pool)
                for start in range(0, len(patches), cfg.batch_size):
                    batch = stack_batch([p.tensor for p in patches[start:start + cfg.batch_size]])
                    while not stop.is_set():
                        try:
                            batches.put(batch, timeout=0.1)
                            break
                        except queue.Full:
                            continue
            except BaseException as error:
                failure.append(error)
            finally:
                batches.put(None)

        producer = threading.Thread(target=produce, name="patch-producer", daemon=True)
        producer.start()
        try:
            while (batch := batches.get()) is not None:
                yield batch
        finally:
            stop.set()
            while producer.is_alive():
                try:
                    batches.get(timeout=0.1)
                except queue.Empty:
                    pass
            producer.join()
        if failure:
            raise failure[0]

    def _run_epoch(self, epoch: int, params: NetworkParams, adam: AdamState,
                   rng: np.random.Generator, pool: Optional[list[Patch]], log: TrainingLog) -> None:
        cfg = self._cfg
        lr = lr_schedule(epoch, cfg)
        sums = dict.fromkeys((*TERM_NAMES, "total"), 0.0)
        steps = 0
        for step, batch in enumerate(self._batches(rng, pool)):
            breakdown = train_step(params, batch, adam, lr, cfg, epoch, step)
            log.write(LogRow.from_breakdown(epoch, step, breakdown, lr))
            for name in sums:
                sums[name] += getattr(breakdown, name)
            steps += 1
        means = {name: value / max(steps, 1) for name, value in sums.items()}
        logger.info("epoch %d/%d  lr %.3e  total %.5f  recon %.5f  ss %.5f  rrg %.5f  sg %.5f  ram %.5f",
                    epoch + 1, cfg.epochs, lr, means["total"], means["recon"], means["ss"],
                    means["rrg"], means["sg"], means["ram"])


def train_step(params: NetworkParams, batch: NDArray[np.float64], adam: AdamState, lr: float,
               cfg: TrainConfig, epoch: int = 0, step: int = 0) -> LossBreakdown:
    """Forward, loss, backward and one Adam update on a single batch.

    :param params: Parameters, updated in place
    :type params: NetworkParams
    :param batch: (N, H, W, 3) patches
    :type batch: NDArray[np.float64]
    :param adam: Optimizer state
    :type adam: AdamState
    :param lr: Learning rate of this step
    :type lr: float
    :param cfg: Training configuration (loss weights)
    :type cfg: TrainConfig
    :return: The loss terms before the update
    :rtype: LossBreakdown
    """

    params.zero_grad()
    reflectance, shading = forward(params, batch)
    breakdown = total_loss(reflectance, shading, batch, cfg.weights, loss_targets(batch))
    if not breakdown.is_finite():
        raise NumericalInstabilityException(epoch, step, f"Loss became non-finite at epoch {epoch}, "
                                                         f"step {step}: {breakdown.terms()}")
    breakdown.tensor.backward()
    grads = {name: t.grad for name, t in params.tensors.items()}
    if not all(np.isfinite(g).all() for g in grads.values()):
        raise NumericalInstabilityException(epoch, step, f"Gradient became non-finite at epoch "
                                                         f"{epoch}, step {step}")
    adam_step(params.tensors, grads, adam, lr)
    if not params.is_finite():
        raise NumericalInstabilityException(epoch, step)
    return breakdown


def save_checkpoint(path: PathLike | str, params: NetworkParams, adam: AdamState, epoch: int,
                    rng: np.random.Generator, cfg: TrainConfig) -> None:
    """Writes parameters, Adam moments, the step count and the sampling generator state
    so that training can resume bit-identically.
    """

    arrays: dict[str, NDArray[np.float64]] = params.arrays()
    arrays.update({_ADAM_M + name: values for name, values in adam.m.items()})
    arrays.update({_ADAM_V + name: values for name, values in adam.v.items()})
    extra: dict[str, Any] = {
        "epoch": epoch,
        "adam_t": adam.t,
        "rng_state": rng.bit_generator.state,
        "train": cfg.to_dict(),
    }
    write_weight_file(path, params.config, arrays, extra)
    logger.info("checkpoint %s", path)


def train(dataset: Dataset, cfg: Optional[TrainConfig] = None, out_dir: PathLike | str = "out",
          net_config: Optional[NetConfig] = None,
          resume_from: Optional[PathLike | str] = None) -> NetworkParams:
    """Trains a network and writes train_log.csv, config.json, periodic
    epoch_NNNN.iidnet checkpoints and final.iidnet to `out_dir`.

    :param dataset: Training images (each at least patch-size in both dimensions)
    :type dataset: Dataset
    :param cfg: Training configuration
    :type cfg: optional TrainConfig
    :param out_dir: Output directory
    :type out_dir: PathLike | str
    :param net_config: Network architecture
    :type net_config: optional NetConfig
    :param resume_from: Optional checkpoint to continue from
    :type resume_from: optional PathLike | str
    :return: Trained parameters
    :rtype: NetworkParams
    """

    cfg = cfg if cfg is not None else TrainConfig()
    return Trainer(dataset, cfg, out_dir, net_config).run(resume_from)


class _TileLayout:
    """Core tiles covering an image. Each entry gives the input window (core plus halo,
    cut at the image border), the core's position inside that window, and the core's
    position in the full image.
    """

    __slots__ = "_height", "_width", "_tile", "_halo"

    def __init__(self, height: int, width: int, tile: int, halo: int):
        self._height, self._width, self._tile, self._halo = height, width, tile, halo

    def __iter__(self) -> Iterator[tuple[tuple[slice, slice], tuple[slice, slice], tuple[slice, slice]]]:
        for r0, r1, wr0, wr1 in self._spans(self._height):
            for c0, c1, wc0, wc1 in self._spans(self._width):
                yield ((slice(wr0, wr1), slice(wc0, wc1)),
                       (slice(r0 - wr0, r1 - wr0), slice(c0 - wc0, c1 - wc0)),
                       (slice(r0, r1), slice(c0, c1)))

    def _spans(self, length: int) -> Iterator[tuple[int, int, int, int]]:
        for start in range(0, length, self._tile):
            stop = min(start + self._tile, length)
            yield start, stop, max(0, start - self._halo), min(length, stop + self._halo)


class Decomposer:
    """Full-image inference. Images whose estimated activation memory exceeds the limit
    are processed as overlapping tiles with a halo equal to the receptive-field radius,
    so every output pixel sees exactly the context it would see in a single pass.

    :param params: Trained or loaded parameters
    :type params: NetworkParams
    :param memory_limit_bytes: Largest activation footprint of one pass
    :type memory_limit_bytes: int
    :param tile: Side of the core tiles when tiling
    :type tile: int
    """

    _BYTES_PER_VALUE = 8
    # live arrays per layer output: padded input, conv output, activation
    _ARRAYS_PER_LAYER = 3
    _DEFAULT_MEMORY_LIMIT = 1024 ** 3
    _DEFAULT_TILE = 256

    __slots__ = "_params", "_memory_limit", "_tile"

    def __init__(self, params: NetworkParams, memory_limit_bytes: Optional[int] = None,
                 tile: Optional[int] = None):
        self._params = params
        self._memory_limit = memory_limit_bytes if memory_limit_bytes is not None else self._DEFAULT_MEMORY_LIMIT
        self._tile = tile if tile is not None else self._DEFAULT_TILE
        if self._tile < MIN_INPUT_SIZE:
            raise ValueError(f"Parameter 'tile' must be at least {MIN_INPUT_SIZE}.")

    def __repr__(self):
        return (f"{self.__class__.__name__}(params={self._params!r}, "
                f"memory_limit_bytes={self._memory_limit!r}, tile={self._tile!r})")

    def estimate_bytes(self, height: int, width: int) -> int:
        channels = sum(layer.out_channels for layer in self._params.config.layers())
        return height * width * channels * self._ARRAYS_PER_LAYER * self._BYTES_PER_VALUE

    def decompose(self, image: ImageTensor) -> tuple[ImageTensor, ImageTensor]:
        """Reflectance (H, W, 3) and shading (H, W, 1) of one image.
        """

        image = as_rgb(image)
        if image.height < MIN_INPUT_SIZE or image.width < MIN_INPUT_SIZE:
            raise InputSizeException(image.shape, MIN_INPUT_SIZE)
        if self.estimate_bytes(image.height, image.width) <= self._memory_limit:
            reflectance, shading = forward(self._params, image.data[np.newaxis], track=False)
            return ImageTensor(reflectance.data[0]), ImageTensor(shading.data[0])
        return self._tiled(image)

    def _tiled(self, image: ImageTensor) -> tuple[ImageTensor, ImageTensor]:
        halo = self._params.config.receptive_radius
        layout = _TileLayout(image.height, image.width, self._tile, halo)
        reflectance = np.zeros((image.height, image.width, 3))
        shading = np.zeros((image.height, image.width, 1))
        count = 0
        for window_at, core_at, out_at in layout:
            window = image.data[window_at][np.newaxis]
            r, s = forward(self._params, window, track=False)
            reflectance[out_at] = r.data[0][core_at]
            shading[out_at] = s.data[0][core_at]
            count += 1
        logger.debug("decomposed %dx%d image in %d tiles (halo %d)", image.height, image.width,
                     count, halo)
        return ImageTensor(reflectance), ImageTensor(shading)


def decompose(params: NetworkParams, image: ImageTensor,
              memory_limit_bytes: Optional[int] = None) -> tuple[ImageTensor, ImageTensor]:
    """Decomposes an image of any size (at least 8x8) into reflectance and shading.

    :param params: Network parameters
    :type params: NetworkParams
    :param image: RGB image (greyscale is replicated)
    :type image: ImageTensor
    :param memory_limit_bytes: Activation budget above which tiles are used
    :type memory_limit_bytes: optional int
    :return: Reflectance (H, W, 3) and shading (H, W, 1), values in (0, 1)
    :rtype: tuple[ImageTensor, ImageTensor]
    """

    return Decomposer(params, memory_limit_bytes).decompose(image)

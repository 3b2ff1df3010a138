from collections.abc import Sequence
from enum import Enum
import numpy as np
from .image_tensor import ImageTensor, Patch
from .imaging_exceptions import NonSquarePatchException, PatchSizeException


class AugmentOp(Enum):
    """Pixel permutations applied to training patches.
    """

    IDENTITY = "identity"
    FLIP_H = "flip-h"
    FLIP_V = "flip-v"
    ROT90 = "rot90"
    ROT180 = "rot180"
    ROT270 = "rot270"

    def __str__(self):
        return self.value

    def __repr__(self):
        return f"<AugmentOp.{self.name}: {self.value!r}>"

    @property
    def is_rotation(self) -> bool:
        return self in (AugmentOp.ROT90, AugmentOp.ROT180, AugmentOp.ROT270)


def _as_generator(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_patches(img: ImageTensor, count: int, size: int,
                   seed: int | np.random.Generator, source_id: str = "image") -> list[Patch]:
    """Cuts `count` square patches at uniformly random valid origins.

    :param img: The source image
    :type img: ImageTensor
    :param count: Number of patches
    :type count: int
    :param size: Patch edge length in pixels
    :type size: int
    :param seed: Seed or generator; a fixed integer seed reproduces the same origins
    :type seed: int | np.random.Generator
    :param source_id: Identifier stored in every patch
    :type source_id: str
    :return: The patches, in sampling order
    :rtype: list[Patch]
    """

    if count <= 0:
        raise ValueError("Parameter 'count' must be positive.")
    if size <= 0:
        raise ValueError("Parameter 'size' must be positive.")
    if img.height < size or img.width < size:
        raise PatchSizeException(img.shape, size)

    rng = _as_generator(seed)
    rows = rng.integers(0, img.height - size + 1, size=count)
    cols = rng.integers(0, img.width - size + 1, size=count)
    return [_crop(img, int(row), int(col), size, source_id) for row, col in zip(rows, cols)]


def sample_dataset_patches(images: Sequence[tuple[str, ImageTensor]], count: int, size: int,
                           rng: np.random.Generator) -> list[Patch]:
    """Samples patches with replacement across images: each draw picks an image uniformly,
    then a uniform origin inside it. Images smaller than the patch must be filtered out
    by the caller.
    """

    if not images:
        raise ValueError("Parameter 'images' must not be empty.")
    patches = []
    picks = rng.integers(0, len(images), size=count)
    for pick in picks:
        source_id, img = images[int(pick)]
        if img.height < size or img.width < size:
            raise PatchSizeException(img.shape, size)
        row = int(rng.integers(0, img.height - size + 1))
        col = int(rng.integers(0, img.width - size + 1))
        patches.append(_crop(img, row, col, size, source_id))
    return patches


def _crop(img: ImageTensor, row: int, col: int, size: int, source_id: str) -> Patch:
    tensor = ImageTensor(img.data[row:row + size, col:col + size, :])
    return Patch(source_id=source_id, origin=(row, col), tensor=tensor)


def augment(patch: Patch, op: AugmentOp) -> Patch:
    """Applies a flip or rotation. Only permutes pixels, so every channel histogram is
    preserved exactly. Rotations are counter-clockwise.

    :param patch: The patch to transform
    :type patch: Patch
    :param op: The permutation to apply
    :type op: AugmentOp
    :return: The transformed patch, same source and origin
    :rtype: Patch
    """

    data = patch.tensor.data
    if op.is_rotation and data.shape[0] != data.shape[1]:
        raise NonSquarePatchException(data.shape, str(op))

    if op == AugmentOp.IDENTITY:
        return patch
    if op == AugmentOp.FLIP_H:
        out = data[:, ::-1, :]
    elif op == AugmentOp.FLIP_V:
        out = data[::-1, :, :]
    elif op == AugmentOp.ROT90:
        out = np.rot90(data, k=1, axes=(0, 1))
    elif op == AugmentOp.ROT180:
        out = np.rot90(data, k=2, axes=(0, 1))
    else:
        out = np.rot90(data, k=3, axes=(0, 1))
    return Patch(source_id=patch.source_id, origin=patch.origin, tensor=ImageTensor(out))


def random_augment(patch: Patch, rng: np.random.Generator) -> Patch:
    """Applies one of the six permutations chosen uniformly at random.
    """

    ops = list(AugmentOp)
    return augment(patch, ops[int(rng.integers(0, len(ops)))])

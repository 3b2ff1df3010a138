import logging
from os import PathLike
from pathlib import Path
import numpy as np
from .image_io import load_image
from .image_tensor import ImageTensor
from .imaging_exceptions import MissingImageException

logger = logging.getLogger(__name__)

_IMAGE_SUFFIXES = (".png", ".ppm")

# LOL training split; both exposures are used
_LOL_TRAIN_DIRS = ("our485/low", "our485/high")


def _image_files(directory: Path) -> list[Path]:
    return sorted(p for p in directory.iterdir()
                  if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES)


def discover_images(root: PathLike | str, split: str | None = None) -> list[Path]:
    """Lists the image files of a dataset directory. Recognizes, in order: the LOL layout
    (`our485/low` and `our485/high`), an explicit `<root>/<split>` directory, and a flat
    directory of images with its immediate subdirectories.

    :param root: Dataset root
    :type root: PathLike | str
    :param split: Optional split subdirectory name
    :type split: optional str
    :return: Sorted image paths
    :rtype: list[Path]
    """

    root = Path(root)
    if not root.is_dir():
        raise MissingImageException(root, f"Dataset directory not found: {root}")

    lol_dirs = [root / name for name in _LOL_TRAIN_DIRS]
    if all(directory.is_dir() for directory in lol_dirs):
        logger.info("recognized LOL layout under %s", root)
        return [path for directory in lol_dirs for path in _image_files(directory)]

    if split is not None:
        split_dir = root / split
        if not split_dir.is_dir():
            raise MissingImageException(split_dir, f"Split directory not found: {split_dir}")
        logger.info("using split '%s' under %s", split, root)
        return _image_files(split_dir)

    paths = _image_files(root)
    for child in sorted(p for p in root.iterdir() if p.is_dir()):
        paths.extend(_image_files(child))
    logger.info("found %d images under %s", len(paths), root)
    return paths


def as_rgb(img: ImageTensor) -> ImageTensor:
    """Promotes a greyscale image to three identical channels.
    """

    if img.channels == 3:
        return img
    return ImageTensor(np.repeat(img.data, 3, axis=2))


def load_dataset(root: PathLike | str, split: str | None = None) -> list[tuple[str, ImageTensor]]:
    """Loads every image of a dataset directory as RGB.

    :param root: Dataset root
    :type root: PathLike | str
    :param split: Optional split subdirectory name
    :type split: optional str
    :return: (identifier, image) pairs; identifiers are paths relative to the root
    :rtype: list[tuple[str, ImageTensor]]
    """

    root = Path(root)
    dataset = []
    for path in discover_images(root, split):
        img = load_image(path)
        if img.channels == 1:
            logger.debug("promoting greyscale %s to RGB", path)
            img = as_rgb(img)
        dataset.append((path.relative_to(root).as_posix(), img))
    return dataset

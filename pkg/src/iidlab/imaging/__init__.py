from .image_tensor import ImageTensor, Patch, channel_max, stack_batch
from .image_io import load_image, save_image, quantize
from .patches import AugmentOp, augment, random_augment, sample_patches, sample_dataset_patches
from .datasets import as_rgb, discover_images, load_dataset
from .imaging_exceptions import (ChannelCountException, CorruptImageException,
                                 ImageShapeMismatchException, MapFormatException,
                                 MissingImageException, NonSquarePatchException,
                                 PatchSizeException, UnsupportedFormatException,
                                 UnwritablePathException)

__all__ = ['ImageTensor', 'Patch', 'channel_max', 'stack_batch', 'load_image', 'save_image',
           'quantize', 'AugmentOp', 'augment', 'random_augment', 'sample_patches',
           'sample_dataset_patches', 'as_rgb', 'discover_images', 'load_dataset',
           'ChannelCountException', 'CorruptImageException', 'ImageShapeMismatchException',
           'MapFormatException', 'MissingImageException', 'NonSquarePatchException',
           'PatchSizeException', 'UnsupportedFormatException', 'UnwritablePathException']

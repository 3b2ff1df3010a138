from typing import Optional
from matplotlib.figure import Figure
import numpy as np
from .display import DisplaySettings, Panel, show_image, show_map
from ..imaging.image_tensor import ImageTensor
from ..physmaps.feature_maps import FeatureMaps


class FeaturePanel(Panel):
    """One row of image, RRG, SG and RAM tiles. RRG and SG are summarised by their mean
    magnitude over channels; RAM is drawn as a colour image since it lives in [0, 1].

    :param image: The featurized image
    :type image: ImageTensor
    :param maps: Its physics maps
    :type maps: FeatureMaps
    :param settings: Optional display settings
    :type settings: DisplaySettings (optional)
    """

    _TITLES = ("Image", "RRG", "SG", "RAM")

    def __init__(self, image: ImageTensor, maps: FeatureMaps, *,
                 settings: Optional[DisplaySettings] = None):
        super().__init__(settings)
        self._image = image
        self._maps = maps

    def __str__(self):
        return (
            f"--- {self.__class__.__name__} ---\n"
            f"  Image:    {self._image.height}x{self._image.width}\n"
            f"  Tiles:    {', '.join(self._TITLES)}\n"
        )

    def draw(self, fig: Figure) -> None:
        axes = fig.subplots(1, len(self._TITLES))
        sg = self._maps.sg
        sg_magnitude = np.hypot(sg.gx.data, sg.gy.data).mean(axis=2)
        show_image(axes[0], self._image, self._TITLES[0])
        show_map(axes[1], self._maps.rrg.data.data.mean(axis=2), self._TITLES[1])
        show_map(axes[2], sg_magnitude, self._TITLES[2])
        show_image(axes[3], self._maps.ram.data, self._TITLES[3])


class DecompositionPanel(Panel):
    """One row of input, reflectance, shading and reconstruction R * S.

    :param image: The decomposed image
    :type image: ImageTensor
    :param reflectance: 3-channel reflectance
    :type reflectance: ImageTensor
    :param shading: 1-channel shading
    :type shading: ImageTensor
    :param settings: Optional display settings
    :type settings: DisplaySettings (optional)
    """

    _TITLES = ("Image", "Reflectance", "Shading", "Reconstruction")

    def __init__(self, image: ImageTensor, reflectance: ImageTensor, shading: ImageTensor, *,
                 settings: Optional[DisplaySettings] = None):
        super().__init__(settings)
        image.require_same_shape(reflectance)
        self._image = image
        self._reflectance = reflectance
        self._shading = shading

    def __str__(self):
        return (
            f"--- {self.__class__.__name__} ---\n"
            f"  Image:    {self._image.height}x{self._image.width}\n"
            f"  Tiles:    {', '.join(self._TITLES)}\n"
        )

    @property
    def reconstruction(self) -> ImageTensor:
        return ImageTensor(self._reflectance.data * self._shading.data).clipped()

    def draw(self, fig: Figure) -> None:
        axes = fig.subplots(1, len(self._TITLES))
        tiles = (self._image, self._reflectance, self._shading, self.reconstruction)
        for ax, tile, title in zip(axes, tiles, self._TITLES):
            show_image(ax, tile, title)

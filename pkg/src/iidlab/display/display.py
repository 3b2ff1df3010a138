from abc import ABC, abstractmethod
from dataclasses import dataclass
import logging
from os import PathLike
from pathlib import Path
from typing import Optional
import matplotlib
matplotlib.use("Agg")
from matplotlib.axes import Axes
from matplotlib.figure import Figure
import matplotlib.pyplot as plt
import numpy as np
from numpy.typing import NDArray
from ..imaging.image_tensor import ImageTensor
from ..imaging.imaging_exceptions import UnwritablePathException

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class DisplaySettings:
    """Class that stores display settings, which can be optionally passed into a
    panel's constructor to change its appearance.

    :param width: The width of the figure in inches
    :type width: float
    :param height: The height of the figure in inches
    :type height: float
    :param background_color: The color of the background, represented by a hex code
    :type background_color: str
    :param dpi: Resolution of the saved PNG
    :type dpi: int
    """

    width: float
    height: float
    background_color: str
    dpi: int = 100

    def __repr__(self):
        return (f"{self.__class__.__name__}(width={self.width!r}, height={self.height!r}, "
                f"background_color={self.background_color!r}, dpi={self.dpi!r})")

    def __str__(self):
        return f"DisplaySettings: {self.width}x{self.height} @ {self.dpi} dpi [BG: {self.background_color}]"

    def __post_init__(self):
        """Validates the data class
        """

        if self.width <= 0:
            raise ValueError("Parameter 'width' must be positive.")
        if self.height <= 0:
            raise ValueError("Parameter 'height' must be positive.")
        if self.dpi <= 0:
            raise ValueError("Parameter 'dpi' must be positive.")


class Panel(ABC):
    """Abstract grid of image tiles saved as a single PNG.

    :param settings: Optional settings that can be passed in to change characteristics
        of the panel
    :type settings: DisplaySettings (optional)
    """

    # default settings for a panel
    _DEFAULT_WIDTH = 12
    _DEFAULT_HEIGHT = 4
    _DEFAULT_BACKGROUND_COLOR = "#E6E6E6"

    def __init__(self, settings: Optional[DisplaySettings] = None):
        # default settings used if no settings are passed in
        self.settings = settings if settings is not None else DisplaySettings(
            width=self._DEFAULT_WIDTH,
            height=self._DEFAULT_HEIGHT,
            background_color=self._DEFAULT_BACKGROUND_COLOR,
        )

    def __repr__(self):
        return f"{self.__class__.__name__}(settings={self.settings!r})"

    def __str__(self):
        return f"<{self.__class__.__name__}> panel ({self.settings.width}x{self.settings.height})"

    @abstractmethod
    def draw(self, fig: Figure) -> None:
        """Draws the panel's tiles onto a figure."""
        pass

    def create_fig(self) -> Figure:
        """Creates a figure, which can be modified in the draw method.
        Ensures consistency across panels.

        :return: A figure defined with the panel's settings
        :rtype: Figure
        """

        return plt.figure(
            figsize=(self.settings.width, self.settings.height),
            facecolor=self.settings.background_color,
            constrained_layout=True
        )

    def save(self, path: PathLike | str) -> Path:
        """Draws the panel and writes it as a PNG.

        :param path: Destination file
        :type path: PathLike | str
        :return: The written path
        :rtype: Path
        """

        path = Path(path)
        fig = self.create_fig()
        try:
            self.draw(fig)
            fig.savefig(path, format="png", dpi=self.settings.dpi,
                        facecolor=self.settings.background_color)
        except OSError as e:
            raise UnwritablePathException(path, f"Cannot write panel to {path}: {e}") from e
        finally:
            plt.close(fig)
        logger.debug("saved %s to %s", self.__class__.__name__, path)
        return path


def show_image(ax: Axes, img: ImageTensor, title: str) -> None:
    """Draws an image in [0, 1]; single-channel images use a grey colormap."""
    if img.channels == 1:
        ax.imshow(img.data[:, :, 0], cmap="gray", vmin=0.0, vmax=1.0)
    else:
        ax.imshow(np.clip(img.data, 0.0, 1.0))
    _finish(ax, title)


def show_map(ax: Axes, values: NDArray[np.float64], title: str, cmap: str = "magma",
             symmetric: bool = False) -> None:
    """Draws a real-valued 2D map with its own colour scale."""
    if symmetric:
        limit = float(np.max(np.abs(values))) or 1.0
        ax.imshow(values, cmap=cmap, vmin=-limit, vmax=limit)
    else:
        ax.imshow(values, cmap=cmap)
    _finish(ax, title)


def _finish(ax: Axes, title: str) -> None:
    ax.set_title(title, fontsize=9)
    ax.set_xticks([])
    ax.set_yticks([])

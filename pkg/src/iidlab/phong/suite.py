import logging
import numpy as np
from .phong_exceptions import UnknownSceneException
from .renderer import RenderTriple, Resolution, render_lambertian
from .scene import (Light, ReflectanceSplit, Scene, SceneObject, Sphere, TexturedQuad,
                    light_direction)
from ..imaging.image_tensor import ImageTensor

logger = logging.getLogger(__name__)

SUITE_NAMES = ("single-sphere", "two-tone-sphere", "textured-quad", "multi-sphere")

TWO_TONE_COLOURS = ((0.8, 0.3, 0.2), (0.2, 0.4, 0.8))

# polar angle range of the light, in degrees away from the viewer axis
_POLAR_RANGE = {
    "single-sphere": (10.0, 35.0),
    "two-tone-sphere": (10.0, 35.0),
    "textured-quad": (20.0, 45.0),
    "multi-sphere": (15.0, 40.0),
}

_CHECKER_CELLS = 4


def _light(rng: np.random.Generator, name: str) -> Light:
    low, high = _POLAR_RANGE[name]
    polar = rng.uniform(low, high)
    azimuth = rng.uniform(0.0, 360.0)
    return Light(direction=light_direction(polar, azimuth))


def _colour(rng: np.random.Generator, low: float = 0.3, high: float = 0.9) -> tuple[float, float, float]:
    return tuple(float(c) for c in rng.uniform(low, high, size=3))


def _single_sphere(rng: np.random.Generator) -> Scene:
    sphere = SceneObject(Sphere((0.0, 0.0, 0.0), 0.8), reflectance=_colour(rng))
    return Scene(objects=(sphere,), lights=(_light(rng, "single-sphere"),),
                 description="one sphere, uniform reflectance")


def _two_tone_sphere(rng: np.random.Generator) -> Scene:
    first, second = TWO_TONE_COLOURS
    split = ReflectanceSplit(direction=(1.0, 0.0, 0.0), offset=0.0, reflectance=second)
    sphere = SceneObject(Sphere((0.0, 0.0, 0.0), 0.85), reflectance=first, split=split)
    return Scene(objects=(sphere,), lights=(_light(rng, "two-tone-sphere"),),
                 description="sphere split at x = 0 into two reflectances")


def _textured_quad(rng: np.random.Generator) -> Scene:
    texture = rng.uniform(0.2, 0.9, size=(_CHECKER_CELLS, _CHECKER_CELLS, 3))
    quad = TexturedQuad(center=(0.0, 0.0, 0.0), half_extent=(0.9, 0.9), texture=ImageTensor(texture))
    return Scene(objects=(SceneObject(quad),), lights=(_light(rng, "textured-quad"),),
                 description=f"{_CHECKER_CELLS}x{_CHECKER_CELLS} random checker quad")


def _multi_sphere(rng: np.random.Generator) -> Scene:
    layout = (((-0.5, 0.35, 0.0), 0.4), ((0.45, 0.3, -0.2), 0.45), ((0.0, -0.45, 0.2), 0.4))
    objects = tuple(SceneObject(Sphere(center, radius), reflectance=_colour(rng))
                    for center, radius in layout)
    return Scene(objects=objects, lights=(_light(rng, "multi-sphere"),),
                 description="three overlapping spheres")


_BUILDERS = {
    "single-sphere": _single_sphere,
    "two-tone-sphere": _two_tone_sphere,
    "textured-quad": _textured_quad,
    "multi-sphere": _multi_sphere,
}


def make_test_suite(seed: int = 0) -> list[tuple[str, Scene]]:
    """Deterministic catalogue of Lambertian scenes. Each scene draws its own light
    direction (and random colours) from a generator keyed on (seed, scene index), so
    adding a scene never perturbs the others.

    Light polar angles (degrees from the viewer axis): single and two-tone sphere
    10-35, textured quad 20-45, multi-sphere 15-40; azimuth uniform in [0, 360).

    :param seed: Suite seed
    :type seed: int
    :return: (name, scene) pairs in catalogue order
    :rtype: list[tuple[str, Scene]]
    """

    suite = []
    for index, name in enumerate(SUITE_NAMES):
        rng = np.random.default_rng([seed, index])
        suite.append((name, _BUILDERS[name](rng)))
    return suite


def get_scene(name: str, seed: int = 0) -> Scene:
    """Looks up one scene of the suite by name.
    """

    for scene_name, scene in make_test_suite(seed):
        if scene_name == name:
            return scene
    raise UnknownSceneException(name, SUITE_NAMES)


def render_suite_dataset(count: int, resolution: Resolution = (64, 64),
                         seed: int = 0) -> list[tuple[str, RenderTriple]]:
    """Renders `count` suite scenes, cycling through the catalogue and bumping the suite
    seed after each full cycle. Used as a training set when no photographs are given.

    :param count: Number of renders
    :type count: int
    :param resolution: (height, width) of every render
    :type resolution: tuple[int, int]
    :param seed: Seed of the first cycle
    :type seed: int
    :return: (id, triple) pairs, ids like "two-tone-sphere-001"
    :rtype: list[tuple[str, RenderTriple]]
    """

    if count < 0:
        raise ValueError("Parameter 'count' must be non-negative.")
    renders = []
    suite: list[tuple[str, Scene]] = []
    for index in range(count):
        cycle, position = divmod(index, len(SUITE_NAMES))
        if position == 0:
            suite = make_test_suite(seed + cycle)
        name, scene = suite[position]
        renders.append((f"{name}-{index:03d}", render_lambertian(scene, resolution)))
    logger.info("rendered %d synthetic scenes at %dx%d", count, *resolution)
    return renders

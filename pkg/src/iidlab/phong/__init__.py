from .scene import (Light, Plane, ReflectanceSplit, Scene, SceneObject, Specular, Sphere,
                    TexturedQuad, light_direction, normalize)
from .renderer import PhongRenderer, RenderTriple, pixel_grid, render_full, render_lambertian
from .suite import SUITE_NAMES, TWO_TONE_COLOURS, get_scene, make_test_suite, render_suite_dataset
from .phong_exceptions import (DegenerateGeometryException, SceneConstraintException,
                               UnknownSceneException)

__all__ = ['Light', 'Plane', 'ReflectanceSplit', 'Scene', 'SceneObject', 'Specular', 'Sphere',
           'TexturedQuad', 'light_direction', 'normalize', 'PhongRenderer', 'RenderTriple',
           'pixel_grid', 'render_full', 'render_lambertian', 'SUITE_NAMES', 'TWO_TONE_COLOURS',
           'get_scene', 'make_test_suite', 'render_suite_dataset', 'DegenerateGeometryException',
           'SceneConstraintException', 'UnknownSceneException']

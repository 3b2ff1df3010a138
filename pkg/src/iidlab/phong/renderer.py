from dataclasses import dataclass
import logging
import numpy as np
from numpy.typing import NDArray
from .phong_exceptions import DegenerateGeometryException, SceneConstraintException
from .scene import Geometry, Plane, Scene, SceneObject, Sphere, TexturedQuad
from ..imaging.image_tensor import ImageTensor

logger = logging.getLogger(__name__)

Resolution = tuple[int, int]


@dataclass(frozen=True, slots=True, eq=False)
class RenderTriple:
    """Ground truth of a Lambertian render. `image` equals `reflectance * shading`
    exactly; `coverage` marks pixels that hit a surface.
    """

    image: ImageTensor
    reflectance: ImageTensor
    shading: ImageTensor
    coverage: NDArray[np.bool_]

    def __repr__(self):
        return f"RenderTriple(shape={self.image.shape!r}, coverage={float(self.coverage.mean()):.3f})"


@dataclass(frozen=True, slots=True, eq=False)
class _SurfaceHits:
    covered: NDArray[np.bool_]
    normals: NDArray[np.float64]
    reflectance: NDArray[np.float64]
    specular_reflectance: NDArray[np.float64]


def pixel_grid(resolution: Resolution) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """World (x, y) of every pixel centre. y runs from +1 at the top row to -1 at the bottom, x spans
    [-W/H, W/H]; an odd resolution puts a pixel centre exactly on the optical axis.

    :param resolution: (height, width) in pixels
    :type resolution: tuple[int, int]
    :return: x and y coordinate grids of shape (H, W)
    :rtype: tuple[NDArray[np.float64], NDArray[np.float64]]
    """

    height, width = resolution
    if height <= 0 or width <= 0:
        raise ValueError("Parameter 'resolution' must be two positive integers.")
    aspect = width / height
    xs = -aspect + (2 * np.arange(width) + 1) * aspect / width
    ys = 1.0 - (2 * np.arange(height) + 1) / height
    return np.meshgrid(xs, ys)


class PhongRenderer:
    """Renders a Scene with an orthographic camera looking down -z. Surfaces are resolved
    with a depth buffer (largest z is nearest the viewer); there are no cast shadows.

    :param scene: The scene to render
    :type scene: Scene
    """

    _TEXTURE_EDGE = 1 - 1e-12

    __slots__ = "_scene",

    def __init__(self, scene: Scene):
        self._scene = scene

    def __repr__(self):
        return f"PhongRenderer(scene={self._scene!r})"

    @property
    def scene(self) -> Scene:
        return self._scene

    def render_full(self, resolution: Resolution) -> ImageTensor:
        """Full Phong model: ambient, diffuse and specular terms per light, each dot product
        clamped at zero, result clamped into [0, 1].

        :param resolution: (height, width)
        :type resolution: tuple[int, int]
        :return: The rendered RGB image
        :rtype: ImageTensor
        """

        scene = self._scene
        hits = self._trace(resolution)
        r, normals = hits.reflectance, hits.normals
        out = r * np.asarray(scene.ambient)
        viewer = np.asarray(scene.viewer)
        for light in scene.lights:
            direction = np.asarray(light.direction)
            n_dot_l = normals @ direction
            lit = np.maximum(n_dot_l, 0.0)[..., np.newaxis]
            out = out + scene.k_d * r * lit * np.asarray(light.diffuse)
            if scene.specular is not None and scene.specular.k_s > 0:
                mirrored = 2 * n_dot_l[..., np.newaxis] * normals - direction
                r_dot_v = np.maximum(mirrored @ viewer, 0.0)
                highlight = np.where(n_dot_l > 0, r_dot_v ** scene.specular.gamma, 0.0)
                out = out + (scene.specular.k_s * hits.specular_reflectance
                             * highlight[..., np.newaxis] * np.asarray(light.specular))
        out = np.where(hits.covered[..., np.newaxis], out, 0.0)
        return ImageTensor(np.clip(out, 0.0, 1.0))

    def render_lambertian(self, resolution: Resolution) -> RenderTriple:
        """Single-light diffuse render returning the image together with its ground-truth
        reflectance and single-channel shading, with image = reflectance * shading.

        :param resolution: (height, width)
        :type resolution: tuple[int, int]
        :return: The render and its decomposition
        :rtype: RenderTriple
        """

        scene = self._scene
        self._check_lambertian()
        light = scene.lights[0]
        hits = self._trace(resolution)
        n_dot_l = np.maximum(hits.normals @ np.asarray(light.direction), 0.0)
        shading = np.where(hits.covered, np.clip(scene.k_d * n_dot_l * light.diffuse[0], 0.0, 1.0), 0.0)
        shading = shading[..., np.newaxis]
        reflectance = np.where(hits.covered[..., np.newaxis], hits.reflectance, 0.0)
        logger.debug("lambertian render %dx%d, coverage %.3f", *resolution, hits.covered.mean())
        return RenderTriple(image=ImageTensor(reflectance * shading),
                            reflectance=ImageTensor(reflectance),
                            shading=ImageTensor(shading),
                            coverage=hits.covered)

    def _check_lambertian(self) -> None:
        scene = self._scene
        if len(scene.lights) != 1:
            raise SceneConstraintException(f"exactly one light required, found {len(scene.lights)}")
        if scene.specular is not None and scene.specular.k_s != 0:
            raise SceneConstraintException("specular term must be disabled")
        if any(scene.ambient):
            raise SceneConstraintException("ambient term must be zero")
        diffuse = scene.lights[0].diffuse
        if not diffuse[0] == diffuse[1] == diffuse[2]:
            raise SceneConstraintException("diffuse intensity must be equal across channels")

    def _trace(self, resolution: Resolution) -> _SurfaceHits:
        x, y = pixel_grid(resolution)
        shape = x.shape
        depth = np.full(shape, -np.inf)
        covered = np.zeros(shape, dtype=bool)
        normals = np.zeros(shape + (3,))
        reflectance = np.zeros(shape + (3,))
        specular_reflectance = np.zeros(shape + (3,))
        for obj in self._scene.objects:
            hit, z, normal = _intersect(obj.geometry, x, y)
            nearer = hit & (z > depth)
            if not nearer.any():
                continue
            depth = np.where(nearer, z, depth)
            covered |= nearer
            normals[nearer] = normal[nearer]
            points = np.stack([x, y, np.where(hit, z, 0.0)], axis=-1)
            reflectance[nearer] = self._reflectance(obj, x, y, points)[nearer]
            specular_reflectance[nearer] = obj.specular_reflectance
        return _SurfaceHits(covered, normals, reflectance, specular_reflectance)

    def _reflectance(self, obj: SceneObject, x: NDArray[np.float64], y: NDArray[np.float64],
                     points: NDArray[np.float64]) -> NDArray[np.float64]:
        geometry = obj.geometry
        if isinstance(geometry, TexturedQuad):
            texture = geometry.texture.data
            cx, cy, _ = geometry.center
            hw, hh = geometry.half_extent
            u = np.clip((x - (cx - hw)) / (2 * hw), 0.0, self._TEXTURE_EDGE)
            v = np.clip(((cy + hh) - y) / (2 * hh), 0.0, self._TEXTURE_EDGE)
            rows = (v * texture.shape[0]).astype(int)
            cols = (u * texture.shape[1]).astype(int)
            values = texture[rows, cols]
        else:
            values = np.broadcast_to(np.asarray(obj.reflectance), x.shape + (3,)).copy()
        if obj.split is not None:
            offsets = (points - np.asarray(geometry.anchor)) @ np.asarray(obj.split.direction)
            values[offsets > obj.split.offset] = obj.split.reflectance
        return values


def _intersect(geometry: Geometry, x: NDArray[np.float64], y: NDArray[np.float64]
               ) -> tuple[NDArray[np.bool_], NDArray[np.float64], NDArray[np.float64]]:
    # hit mask, depth and unit normal facing the viewer
    if isinstance(geometry, Sphere):
        if geometry.radius == 0:
            raise DegenerateGeometryException(geometry, "Sphere radius must be positive.")
        cx, cy, cz = geometry.center
        dx, dy = x - cx, y - cy
        remainder = geometry.radius ** 2 - dx ** 2 - dy ** 2
        hit = remainder >= 0
        dz = np.sqrt(np.maximum(remainder, 0.0))
        normal = np.stack([dx, dy, dz], axis=-1) / geometry.radius
        return hit, cz + dz, normal
    if isinstance(geometry, Plane):
        nx, ny, nz = geometry.normal
        if nz == 0:
            # seen edge-on by an orthographic camera
            return np.zeros(x.shape, dtype=bool), np.zeros(x.shape), np.zeros(x.shape + (3,))
        z = (geometry.offset - nx * x - ny * y) / nz
        normal = np.asarray(geometry.normal) * (1.0 if nz > 0 else -1.0)
        return np.ones(x.shape, dtype=bool), z, np.broadcast_to(normal, x.shape + (3,))
    if isinstance(geometry, TexturedQuad):
        cx, cy, cz = geometry.center
        hw, hh = geometry.half_extent
        hit = (np.abs(x - cx) <= hw) & (np.abs(y - cy) <= hh)
        normal = np.broadcast_to(np.array([0.0, 0.0, 1.0]), x.shape + (3,))
        return hit, np.full(x.shape, cz), normal
    raise TypeError(f"Unsupported geometry {geometry!r}")


def render_full(scene: Scene, resolution: Resolution) -> ImageTensor:
    """Renders a scene with the full Phong reflection model.

    :param scene: Scene to render
    :type scene: Scene
    :param resolution: (height, width)
    :type resolution: tuple[int, int]
    :return: RGB image with values in [0, 1]
    :rtype: ImageTensor
    """

    return PhongRenderer(scene).render_full(resolution)


def render_lambertian(scene: Scene, resolution: Resolution) -> RenderTriple:
    """Renders a single-light diffuse scene together with its decomposition.

    :param scene: Scene with one light, no ambient and no specular term
    :type scene: Scene
    :param resolution: (height, width)
    :type resolution: tuple[int, int]
    :return: Image, reflectance, shading and coverage
    :rtype: RenderTriple
    """

    return PhongRenderer(scene).render_lambertian(resolution)

from dataclasses import dataclass, field
import math
from typing import Any, Optional
import numpy as np
from ..imaging.image_tensor import ImageTensor

Vector3 = tuple[float, float, float]
Colour = tuple[float, float, float]

_UNIT_TOLERANCE = 1e-9


def _vector(value, name: str) -> Vector3:
    values = tuple(float(v) for v in value)
    if len(values) != 3:
        raise ValueError(f"Parameter '{name}' must have three components.")
    return values


def _unit(value, name: str) -> Vector3:
    vector = _vector(value, name)
    norm = math.sqrt(sum(v * v for v in vector))
    if abs(norm - 1.0) > _UNIT_TOLERANCE:
        raise ValueError(f"Parameter '{name}' must be a unit vector (norm {norm:.12f}).")
    return vector


def _non_negative(value, name: str) -> Colour:
    colour = _vector(value, name)
    if any(c < 0 for c in colour):
        raise ValueError(f"Parameter '{name}' must be non-negative.")
    return colour


def _reflectance(value, name: str) -> Colour:
    colour = _non_negative(value, name)
    if any(c > 1 for c in colour):
        raise ValueError(f"Parameter '{name}' must lie in [0, 1].")
    return colour


def normalize(vector) -> Vector3:
    """Scales a non-zero 3-vector to unit length.
    """

    array = np.asarray(vector, dtype=np.float64)
    norm = np.linalg.norm(array)
    if norm == 0:
        raise ValueError("Cannot normalize the zero vector.")
    return tuple(float(v) for v in array / norm)


def light_direction(polar_deg: float, azimuth_deg: float) -> Vector3:
    """Unit vector towards a light that sits `polar_deg` away from the viewer axis (+z),
    rotated `azimuth_deg` counter-clockwise from +x in the image plane.
    """

    theta, phi = math.radians(polar_deg), math.radians(azimuth_deg)
    return normalize((math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi),
                      math.cos(theta)))


@dataclass(frozen=True, slots=True)
class Sphere:
    """Sphere in world space. Orthographic view along -z; +z points at the viewer.
    """

    center: Vector3
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _vector(self.center, "center"))
        if self.radius < 0:
            raise ValueError("Parameter 'radius' must be non-negative.")

    @property
    def anchor(self) -> Vector3:
        return self.center

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "sphere", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True, slots=True)
class Plane:
    """Infinite plane {p : normal . p = offset}.
    """

    normal: Vector3
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _unit(self.normal, "normal"))

    @property
    def anchor(self) -> Vector3:
        return (0.0, 0.0, 0.0)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "plane", "normal": list(self.normal), "offset": self.offset}


@dataclass(frozen=True, slots=True, eq=False)
class TexturedQuad:
    """Viewer-facing rectangle whose reflectance is a texture, sampled nearest-neighbour.

    :param center: Centre of the rectangle
    :type center: Vector3
    :param half_extent: Half width and half height in world units
    :type half_extent: tuple[float, float]
    :param texture: 3-channel reflectance texture with values in [0, 1]
    :type texture: ImageTensor
    """

    center: Vector3
    half_extent: tuple[float, float]
    texture: ImageTensor

    def __post_init__(self):
        object.__setattr__(self, "center", _vector(self.center, "center"))
        if len(self.half_extent) != 2 or min(self.half_extent) <= 0:
            raise ValueError("Parameter 'half_extent' must be two positive numbers.")
        self.texture.require_channels(3)
        if not self.texture.is_normalized:
            raise ValueError("Parameter 'texture' must lie in [0, 1].")

    @property
    def anchor(self) -> Vector3:
        return self.center

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "textured-quad", "center": list(self.center),
                "half_extent": list(self.half_extent), "texture": self.texture.data.tolist()}


Geometry = Sphere | Plane | TexturedQuad


@dataclass(frozen=True, slots=True)
class ReflectanceSplit:
    """Half-space {p : direction . (p - anchor) > offset} that takes a second reflectance.
    """

    direction: Vector3
    offset: float
    reflectance: Colour

    def __post_init__(self):
        object.__setattr__(self, "direction", _unit(self.direction, "direction"))
        object.__setattr__(self, "reflectance", _reflectance(self.reflectance, "reflectance"))

    def to_dict(self) -> dict[str, Any]:
        return {"direction": list(self.direction), "offset": self.offset,
                "reflectance": list(self.reflectance)}


@dataclass(frozen=True, slots=True, eq=False)
class SceneObject:
    """A geometry with its diffuse reflectance r(λ_c) and optional specular reflectance
    s(λ_c). Textured quads take their diffuse reflectance from the texture.
    """

    geometry: Geometry
    reflectance: Colour = (1.0, 1.0, 1.0)
    specular_reflectance: Colour = (1.0, 1.0, 1.0)
    split: Optional[ReflectanceSplit] = None

    def __post_init__(self):
        object.__setattr__(self, "reflectance", _reflectance(self.reflectance, "reflectance"))
        object.__setattr__(self, "specular_reflectance",
                           _reflectance(self.specular_reflectance, "specular_reflectance"))

    def to_dict(self) -> dict[str, Any]:
        return {"geometry": self.geometry.to_dict(), "reflectance": list(self.reflectance),
                "specular_reflectance": list(self.specular_reflectance),
                "split": None if self.split is None else self.split.to_dict()}


@dataclass(frozen=True, slots=True)
class Light:
    """Directional light.

    :param direction: Unit vector from the surface towards the light
    :type direction: Vector3
    :param diffuse: Diffuse intensity i_d per channel
    :type diffuse: Colour
    :param specular: Specular intensity i_s per channel
    :type specular: Colour
    """

    direction: Vector3
    diffuse: Colour = (1.0, 1.0, 1.0)
    specular: Colour = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "direction", _unit(self.direction, "direction"))
        object.__setattr__(self, "diffuse", _non_negative(self.diffuse, "diffuse"))
        object.__setattr__(self, "specular", _non_negative(self.specular, "specular"))

    def to_dict(self) -> dict[str, Any]:
        return {"direction": list(self.direction), "diffuse": list(self.diffuse),
                "specular": list(self.specular)}


@dataclass(frozen=True, slots=True)
class Specular:
    """Specular coefficient k_s and exponent γ.
    """

    k_s: float
    gamma: float

    def __post_init__(self):
        if self.k_s < 0:
            raise ValueError("Parameter 'k_s' must be non-negative.")
        if self.gamma <= 0:
            raise ValueError("Parameter 'gamma' must be positive.")

    def to_dict(self) -> dict[str, Any]:
        return {"k_s": self.k_s, "gamma": self.gamma}


@dataclass(frozen=True, slots=True, eq=False)
class Scene:
    """Parametric scene for the Phong renderer.

    :param objects: Surfaces in the scene
    :type objects: tuple[SceneObject, ...]
    :param lights: Directional lights
    :type lights: tuple[Light, ...]
    :param ambient: Product k_a * i_a per channel
    :type ambient: Colour
    :param viewer: Unit direction towards the viewer
    :type viewer: Vector3
    :param k_d: Diffuse coefficient
    :type k_d: float
    :param specular: Optional specular term
    :type specular: optional Specular
    """

    objects: tuple[SceneObject, ...]
    lights: tuple[Light, ...]
    ambient: Colour = (0.0, 0.0, 0.0)
    viewer: Vector3 = (0.0, 0.0, 1.0)
    k_d: float = 1.0
    specular: Optional[Specular] = None
    description: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "lights", tuple(self.lights))
        object.__setattr__(self, "ambient", _non_negative(self.ambient, "ambient"))
        object.__setattr__(self, "viewer", _unit(self.viewer, "viewer"))
        if self.k_d < 0:
            raise ValueError("Parameter 'k_d' must be non-negative.")

    def __repr__(self):
        return (f"{self.__class__.__name__}(objects={len(self.objects)}, lights={len(self.lights)}, "
                f"ambient={self.ambient!r}, specular={self.specular!r})")

    def __str__(self):
        return (
            f"--- Phong Scene ---\n"
            f"  Objects:  {len(self.objects)}\n"
            f"  Lights:   {len(self.lights)}\n"
            f"  Ambient:  {self.ambient}\n"
            f"  Notes:    {self.description or '-'}"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "objects": [obj.to_dict() for obj in self.objects],
            "lights": [light.to_dict() for light in self.lights],
            "ambient": list(self.ambient),
            "viewer": list(self.viewer),
            "k_d": self.k_d,
            "specular": None if self.specular is None else self.specular.to_dict(),
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Scene":
        """Builds a scene from the structure produced by `to_dict`. Directions are
        normalized on the way in so hand-written files need not be exact.
        """

        objects = []
        for entry in data["objects"]:
            geometry = _geometry_from_dict(entry["geometry"])
            split = entry.get("split")
            objects.append(SceneObject(
                geometry=geometry,
                reflectance=entry.get("reflectance", (1.0, 1.0, 1.0)),
                specular_reflectance=entry.get("specular_reflectance", (1.0, 1.0, 1.0)),
                split=None if split is None else ReflectanceSplit(
                    direction=normalize(split["direction"]), offset=float(split["offset"]),
                    reflectance=split["reflectance"]),
            ))
        lights = [Light(direction=normalize(entry["direction"]),
                        diffuse=entry.get("diffuse", (1.0, 1.0, 1.0)),
                        specular=entry.get("specular", (0.0, 0.0, 0.0)))
                  for entry in data["lights"]]
        specular = data.get("specular")
        return cls(
            objects=tuple(objects),
            lights=tuple(lights),
            ambient=data.get("ambient", (0.0, 0.0, 0.0)),
            viewer=normalize(data.get("viewer", (0.0, 0.0, 1.0))),
            k_d=float(data.get("k_d", 1.0)),
            specular=None if specular is None else Specular(float(specular["k_s"]),
                                                            float(specular["gamma"])),
            description=data.get("description", ""),
        )


def _geometry_from_dict(data: dict[str, Any]) -> Geometry:
    kind = data.get("kind")
    if kind == "sphere":
        return Sphere(center=data["center"], radius=float(data["radius"]))
    if kind == "plane":
        return Plane(normal=normalize(data["normal"]), offset=float(data["offset"]))
    if kind == "textured-quad":
        return TexturedQuad(center=data["center"], half_extent=tuple(data["half_extent"]),
                            texture=ImageTensor(np.asarray(data["texture"], dtype=np.float64)))
    raise ValueError(f"Unknown geometry kind {kind!r}.")

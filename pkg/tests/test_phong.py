import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from iidlab.phong import (
    SUITE_NAMES, DegenerateGeometryException, Light, Plane, Scene, SceneConstraintException,
    SceneObject, Specular, Sphere, UnknownSceneException, get_scene, light_direction,
    make_test_suite, pixel_grid, render_full, render_lambertian, render_suite_dataset,
)
from iidlab.physmaps import f_rrg


def _facing_plane(reflectance=(1.0, 1.0, 1.0)):
    return SceneObject(Plane((0.0, 0.0, 1.0), 0.0), reflectance=reflectance)


class TestPixelGrid:

    def test_odd_grid_has_centre_on_axis(self):
        x, y = pixel_grid((5, 5))
        assert x[2, 2] == 0.0 and y[2, 2] == 0.0
        assert y[0, 0] > 0 > y[-1, 0]

    def test_aspect(self):
        x, _ = pixel_grid((10, 20))
        assert x.max() == pytest.approx(1.9)
        assert x.min() == pytest.approx(-1.9)


class TestFullRender:

    def test_light_along_normal(self):
        scene = Scene(objects=(_facing_plane(),), lights=(Light((0.0, 0.0, 1.0)),))
        assert_allclose(render_full(scene, (8, 8)).data, 1.0, atol=1e-12)

    def test_light_at_sixty_degrees(self):
        scene = Scene(objects=(_facing_plane(),), lights=(Light(light_direction(60.0, 0.0)),))
        assert_allclose(render_full(scene, (8, 8)).data, 0.5, atol=1e-12)

    def test_ambient_only(self):
        scene = Scene(objects=(_facing_plane((0.5, 0.5, 1.0)),), lights=(), ambient=(0.2, 0.4, 0.6))
        assert_allclose(render_full(scene, (4, 4)).data, np.broadcast_to([0.1, 0.2, 0.6], (4, 4, 3)))

    def test_mirror_highlight(self):
        scene = Scene(objects=(_facing_plane(),),
                      lights=(Light((0.0, 0.0, 1.0), diffuse=(0.0, 0.0, 0.0), specular=(1.0, 1.0, 1.0)),),
                      specular=Specular(0.5, 10.0))
        assert_allclose(render_full(scene, (4, 4)).data, 0.5, atol=1e-12)

    def test_output_clamped(self):
        scene = Scene(objects=(_facing_plane(),),
                      lights=(Light((0.0, 0.0, 1.0), diffuse=(3.0, 3.0, 3.0)),))
        assert render_full(scene, (4, 4)).data.max() == 1.0

    def test_background_is_black(self):
        scene = Scene(objects=(SceneObject(Sphere((0.0, 0.0, 0.0), 0.5)),),
                      lights=(Light((0.0, 0.0, 1.0)),))
        assert_array_equal(render_full(scene, (32, 32)).data[0, 0], 0.0)


class TestLambertian:

    def test_centre_of_sphere(self, sphere_render):
        assert sphere_render.shading.data[32, 32, 0] == pytest.approx(1.0, abs=1e-12)
        assert_allclose(sphere_render.image.data[32, 32], [1.0, 0.5, 0.25], atol=1e-12)

    def test_image_is_product(self, sphere_render):
        assert_array_equal(sphere_render.image.data,
                           sphere_render.reflectance.data * sphere_render.shading.data)

    def test_background(self, sphere_render):
        assert not sphere_render.coverage[0, 0]
        assert_array_equal(sphere_render.image.data[~sphere_render.coverage], 0.0)

    def test_shading_is_single_channel(self, sphere_render):
        assert sphere_render.shading.channels == 1

    def test_linear_in_light_intensity(self):
        def shading(intensity):
            scene = Scene(objects=(SceneObject(Sphere((0.0, 0.0, 0.0), 0.8)),),
                          lights=(Light(light_direction(20.0, 45.0), diffuse=(intensity,) * 3),))
            return render_lambertian(scene, (33, 33)).shading.data

        assert_allclose(shading(0.8), 2.0 * shading(0.4), atol=1e-12)

    def test_constant_reflectance_has_no_ratio_gradient(self):
        normal = np.array([0.3, -0.2, 1.0])
        scene = Scene(objects=(SceneObject(Plane(tuple(normal / np.linalg.norm(normal)), 0.0),
                                           reflectance=(0.7, 0.4, 0.2)),),
                      lights=(Light(light_direction(15.0, 30.0)),))
        triple = render_lambertian(scene, (24, 24))
        assert triple.coverage.all()
        assert np.abs(f_rrg(triple.image).data.data).max() <= 1e-6

    @pytest.mark.parametrize("scene, reason", [
        (Scene(objects=(), lights=(Light((0.0, 0.0, 1.0)), Light((0.0, 0.0, 1.0)))), "one light"),
        (Scene(objects=(), lights=(Light((0.0, 0.0, 1.0)),), ambient=(0.1, 0.1, 0.1)), "ambient"),
        (Scene(objects=(), lights=(Light((0.0, 0.0, 1.0)),), specular=Specular(0.2, 5.0)), "specular"),
        (Scene(objects=(), lights=(Light((0.0, 0.0, 1.0), diffuse=(1.0, 0.5, 1.0)),)), "white light"),
    ])
    def test_constraints(self, scene, reason):
        with pytest.raises(SceneConstraintException):
            render_lambertian(scene, (8, 8))

    def test_zero_radius(self):
        scene = Scene(objects=(SceneObject(Sphere((0.0, 0.0, 0.0), 0.0)),),
                      lights=(Light((0.0, 0.0, 1.0)),))
        with pytest.raises(DegenerateGeometryException):
            render_lambertian(scene, (8, 8))

    def test_scene_validation(self):
        with pytest.raises(ValueError):
            Sphere((0.0, 0.0, 0.0), -1.0)
        with pytest.raises(ValueError):
            Light((0.0, 0.0, 2.0))


class TestSuite:

    def test_catalogue(self):
        assert [name for name, _ in make_test_suite(0)] == list(SUITE_NAMES)

    def test_deterministic(self):
        first = [scene.to_dict() for _, scene in make_test_suite(7)]
        second = [scene.to_dict() for _, scene in make_test_suite(7)]
        assert first == second

    def test_two_tone_has_two_reflectances(self):
        triple = render_lambertian(get_scene("two-tone-sphere"), (48, 48))
        colours = np.unique(triple.reflectance.data[triple.coverage], axis=0)
        assert len(colours) == 2

    @pytest.mark.parametrize("name", SUITE_NAMES)
    def test_every_scene_in_range(self, name):
        triple = render_lambertian(get_scene(name, seed=2), (32, 32))
        for component in (triple.image, triple.reflectance, triple.shading):
            assert component.data.min() >= 0.0 and component.data.max() <= 1.0

    def test_scene_survives_dict(self):
        scene = get_scene("multi-sphere", seed=4)
        restored = type(scene).from_dict(scene.to_dict())
        assert_array_equal(render_lambertian(restored, (24, 24)).image.data,
                           render_lambertian(scene, (24, 24)).image.data)

    def test_unknown_scene(self):
        with pytest.raises(UnknownSceneException):
            get_scene("teapot")

    def test_dataset_ids(self):
        renders = render_suite_dataset(5, (16, 16), seed=1)
        assert [render_id for render_id, _ in renders] == [
            "single-sphere-000", "two-tone-sphere-001", "textured-quad-002", "multi-sphere-003",
            "single-sphere-004"]

import numpy as np
import pytest
from iidlab.imaging.image_tensor import ImageTensor
from iidlab.network.config import NetConfig
from iidlab.phong.scene import Light, Scene, SceneObject, Sphere
from iidlab.phong.renderer import render_lambertian
from iidlab.phong.suite import render_suite_dataset
from iidlab.training.config import TrainConfig


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_image(rng):
    return ImageTensor(rng.uniform(0.1, 1.0, size=(24, 32, 3)))


@pytest.fixture
def tiny_net_config():
    return NetConfig(trunk_blocks=2, trunk_filters=8, neck_filters=8, head_filters=(4,), seed=3)


@pytest.fixture
def tiny_train_config():
    return TrainConfig(epochs=2, patches_per_epoch=5, patch_size=16, batch_size=2,
                       checkpoint_every=2, seed=11)


@pytest.fixture
def sphere_render():
    scene = Scene(objects=(SceneObject(Sphere((0.0, 0.0, 0.0), 0.8), reflectance=(1.0, 0.5, 0.25)),),
                  lights=(Light((0.0, 0.0, 1.0)),))
    return render_lambertian(scene, (65, 65))


@pytest.fixture
def synthetic_dataset():
    return [(render_id, triple.image) for render_id, triple in render_suite_dataset(4, (24, 24), seed=5)]

import pytest
from numpy.testing import assert_array_equal
from iidlab.display import DecompositionPanel, DisplaySettings, FeaturePanel
from iidlab.imaging import ImageTensor, UnwritablePathException
from iidlab.physmaps import featurize

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def test_settings_validation():
    with pytest.raises(ValueError):
        DisplaySettings(width=0, height=4, background_color="#FFFFFF")
    with pytest.raises(ValueError):
        DisplaySettings(width=4, height=4, background_color="#FFFFFF", dpi=0)


def test_feature_panel_writes_png(tmp_path, random_image):
    path = FeaturePanel(random_image, featurize(random_image)).save(tmp_path / "panel.png")
    assert path.read_bytes().startswith(PNG_SIGNATURE)


def test_decomposition_panel(tmp_path, rng):
    image = ImageTensor(rng.uniform(size=(16, 16, 3)))
    reflectance = ImageTensor(rng.uniform(size=(16, 16, 3)))
    shading = ImageTensor(rng.uniform(size=(16, 16, 1)))
    settings = DisplaySettings(width=8, height=2, background_color="#FFFFFF", dpi=50)
    panel = DecompositionPanel(image, reflectance, shading, settings=settings)
    assert_array_equal(panel.reconstruction.data, reflectance.data * shading.data)
    assert panel.save(tmp_path / "decomposition.png").is_file()


def test_unwritable_destination(tmp_path, random_image):
    with pytest.raises(UnwritablePathException):
        FeaturePanel(random_image, featurize(random_image)).save(tmp_path / "missing" / "panel.png")

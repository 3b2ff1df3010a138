from .display import DisplaySettings, Panel, show_image, show_map
from .panels import DecompositionPanel, FeaturePanel

__all__ = ['DisplaySettings', 'Panel', 'show_image', 'show_map', 'DecompositionPanel',
           'FeaturePanel']

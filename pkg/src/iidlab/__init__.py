from .imaging import *
from .filters import *
from .physmaps import *
from .phong import *
from .autograd import *
from .network import *
from .losses import *
from .training import *
from .metrics import *
from .display import *

__version__ = "0.1.0"

__all__ = [*imaging.__all__, *filters.__all__, *physmaps.__all__, *phong.__all__,
           *autograd.__all__, *network.__all__, *losses.__all__, *training.__all__,
           *metrics.__all__, *display.__all__]

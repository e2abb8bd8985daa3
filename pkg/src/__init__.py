from .decorators import *
from .exceptions import *
from .fields import *
from .file_storage import *
from .frechet import *
from .geom import *
from .models import *
from .oracle import *
from .pmean import *
from .service import *
from .simplify import *
from .utils import *

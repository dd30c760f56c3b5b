from . import utility
from . import errors

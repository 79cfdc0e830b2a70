# do not remove, required for package imports
from .addon import SpamTomographyRoomsAddon

__version__ = "0.1.0"

__all__ = ["SpamTomographyRoomsAddon", "__version__"]

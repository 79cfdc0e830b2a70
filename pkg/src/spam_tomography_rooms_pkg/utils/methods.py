from enum import Enum


class Method(str, Enum):
    """Reconstruction method tag.

    A: constrained static model (12 parameters).
    B: free-evolution time series (18 parameters).
    C: over-complete static model (25 parameters).
    """

    A = "A"
    B = "B"
    C = "C"

    def __str__(self) -> str:
        return self.value

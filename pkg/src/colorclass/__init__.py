"""Random submanifolds as color classes of vertex-colored grid triangulations."""
from .lattice import GridComplex, LatticeSimplex, build

__all__ = ["GridComplex", "LatticeSimplex", "build"]
__version__ = "0.1.0"

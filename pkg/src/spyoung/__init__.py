"""Random Young diagrams for symplectic groups.

Exact sampling through the two-column Berele/Schensted insertion, the exact
determinantal measure, the semiclassical orthogonal polynomials behind its
correlation kernel, and the bulk (discrete sine kernel) asymptotics.
"""

from .backend import BACKEND, get_backend
from .params import EnsembleParams

__all__ = ["BACKEND", "EnsembleParams", "get_backend", "__version__"]

__version__ = "0.1.0"

"""Certified degree-bounded ideal membership.

Exact division certificates ``sum F_j Q_j = Phi^nu`` with ``deg F_j Q_j <= r``
found by Macaulay-matrix linear algebra, a residue-current test for monomial
complete intersections, and a numerical integral division formula on P^1 and
P^2 that is cross-checked against the exact solver.
"""

from .forms import *  # noqa: F401,F403
from .kernel import *  # noqa: F401,F403
from .linalg import *  # noqa: F401,F403
from .membership import *  # noqa: F401,F403
from .poly import *  # noqa: F401,F403
from .quadrature import *  # noqa: F401,F403
from .residue import *  # noqa: F401,F403
from . import forms, kernel, linalg, membership, poly, quadrature, residue

__version__ = "0.1.0"

__all__ = (
    poly.__all__ + linalg.__all__ + membership.__all__ + residue.__all__
    + forms.__all__ + quadrature.__all__ + kernel.__all__
)

"""Determinant inequalities for Hadamard products of positive block matrices.

Matrices are NumPy arrays (converted to complex128); 1-D arrays are column
vectors. A block family is a list of ``(matrix, block_sizes)`` pairs.
"""

from ._core import *  # noqa: F401,F403
from ._core import Error, InequalityReport

__version__ = "0.1.0"

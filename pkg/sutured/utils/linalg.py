"""Exact integer and mod-2 matrix helpers on top of sympy.

Matrices travel through the package as lists of integer rows; these helpers
convert to sympy only for the operations that need it.
"""

import logging

from sympy import GF, Matrix
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from sutured.errors import ConsistencyError, StructuralError

logger = logging.getLogger(__name__)

_GF2 = GF(2)


def _is_f2(ring):
    # accepts a CoefficientRing or its tag
    return getattr(ring, "value", ring) == "f2"


def shape(rows, n_cols=None):
    n_rows = len(rows)
    if n_rows == 0:
        return 0, (n_cols or 0)
    return n_rows, len(rows[0])


def to_rows(matrix):
    """Convert a sympy matrix to a list of integer rows."""
    return [[int(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def columns_to_rows(columns, n_rows):
    """Build a matrix whose j-th column is ``columns[j]``."""
    return [[int(col[i]) for col in columns] for i in range(n_rows)]


def reduce_rows(rows, ring):
    if _is_f2(ring):
        return [[v % 2 for v in row] for row in rows]
    return [list(row) for row in rows]


def _gf2_matrix(rows, n_cols):
    data = [[_GF2(v % 2) for v in row] for row in rows]
    return DomainMatrix(data, (len(rows), n_cols), _GF2)


def matrix_rank(rows, ring, n_cols=None):
    """Rank over Q (for the integers) or over F2."""
    n_rows, n_cols = shape(rows, n_cols)
    if n_rows == 0 or n_cols == 0:
        return 0
    if _is_f2(ring):
        return _gf2_matrix(rows, n_cols).rank()
    return Matrix(rows).rank()


def determinant(rows, ring):
    if not rows:
        return 1
    value = int(Matrix(rows).det())
    return value % 2 if _is_f2(ring) else value


def invert(rows, ring):
    """Inverse over the ring; raises ConsistencyError when it does not exist.

    Over the integers the matrix must be unimodular.
    """
    n_rows, n_cols = shape(rows)
    if n_rows != n_cols:
        raise StructuralError(f"cannot invert a {n_rows}x{n_cols} matrix")
    if n_rows == 0:
        return []
    matrix = Matrix(rows)
    if _is_f2(ring):
        try:
            return reduce_rows(to_rows(matrix.inv_mod(2)), ring)
        except ValueError as exc:
            raise ConsistencyError("matrix is singular over F2") from exc
    det = matrix.det()
    if det not in (1, -1):
        raise ConsistencyError(f"matrix is not unimodular (det={det})")
    inverse = matrix.inv()
    if any(not entry.is_integer for entry in inverse):
        raise ConsistencyError("integer inverse has non-integral entries")
    return to_rows(inverse)


def apply(rows, vector, ring=None):
    """Matrix times column vector."""
    result = [sum(int(a) * int(b) for a, b in zip(row, vector)) for row in rows]
    if ring is not None and _is_f2(ring):
        result = [v % 2 for v in result]
    return result


def torsion_coefficients(rows, n_cols=None):
    """Invariant factors greater than one of an integer matrix."""
    n_rows, n_cols = shape(rows, n_cols)
    if n_rows == 0 or n_cols == 0:
        return []
    factors = invariant_factors(Matrix(rows), domain=ZZ)
    torsion = [abs(int(f)) for f in factors if abs(int(f)) > 1]
    if torsion:
        logger.warning("torsion coefficients found: %s", torsion)
    return torsion

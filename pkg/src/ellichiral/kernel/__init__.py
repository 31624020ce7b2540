from .scalar import (CC, G2, G4, G6, LAM, ONE, Poly, Scalar, ZERO,
                     parse_poly, parse_scalar, poly_to_string,
                     scalar_to_string)
from .series import INF, LaurentSeries, QSeries, coefficient, series_multiply
from .sparse import SparseMatrix, nullspace, rank, rref
from .loday import LeibnizAlgebra, loday_differential

__all__ = [
    "CC", "G2", "G4", "G6", "LAM", "ONE", "Poly", "Scalar", "ZERO",
    "parse_poly", "parse_scalar", "poly_to_string", "scalar_to_string",
    "INF", "LaurentSeries", "QSeries", "coefficient", "series_multiply",
    "SparseMatrix", "nullspace", "rank", "rref",
    "LeibnizAlgebra", "loday_differential",
]

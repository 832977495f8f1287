from mtc.exactalg.laplacian import (
    RightInverse,
    apply_laplacian,
    degree_laplacian_matrix,
    harmonic_basis,
    right_inverse,
    right_inverse_monomial,
    truncate_jet,
)
from mtc.exactalg.poly import ONE, X1, X2, Monomial2, Poly2, TensorElem

__all__ = [
    "ONE",
    "X1",
    "X2",
    "Monomial2",
    "Poly2",
    "RightInverse",
    "TensorElem",
    "apply_laplacian",
    "degree_laplacian_matrix",
    "harmonic_basis",
    "right_inverse",
    "right_inverse_monomial",
    "truncate_jet",
]

import random

import pytest
import sympy

from mtc.errors import ValidationError
from mtc.exactalg import ONE, X1, X2, Poly2, TensorElem, apply_laplacian
from mtc.petri_wendl.petri import (
    PetriKernelElement,
    harmonic_pairs,
    multiplication_matrix,
    petri_kernel_basis,
    petri_map,
    sample_kernel_elements,
)


def test_petri_map():
    assert petri_map(TensorElem.pure(ONE, ONE)) == 1
    assert petri_map(TensorElem([(1, X1, ONE), (-1, ONE, X1)])) == Poly2.zero()

    B = TensorElem.pure(Poly2.parse("x1^2 - x2^2"), X1 * X2)
    assert petri_map(B) == Poly2.parse("x1^3*x2 - x1*x2^3")


def test_kernel_basis_small(b1, b1_second):
    assert petri_kernel_basis(0) == []
    assert petri_kernel_basis(1) == [b1, b1_second]
    assert len(petri_kernel_basis(2)) == 5


def test_kernel_dimension_matches_brute_force():
    for d in range(0, 7):
        pairs = harmonic_pairs(d)
        assert len(pairs) == (4 * d if d else 1)

        oracle = sympy.Matrix(multiplication_matrix(d)).nullspace()
        basis = petri_kernel_basis(d)
        assert len(basis) == len(oracle), f"Kernel dimension in degree {d}"
        if d:
            assert len(basis) == 3 * d - 1


def test_kernel_elements_are_valid():
    for d in range(1, 5):
        for element in petri_kernel_basis(d):
            assert element.degree == d
            assert not petri_map(element.tensor)
            assert all(c == 0 for c in element.certificate)
            assert len(element.certificate) == d + 1
            for _, p, q in element.tensor.summands:
                assert not apply_laplacian(p) and not apply_laplacian(q)


def test_from_tensor_rejects():
    with pytest.raises(ValidationError):
        PetriKernelElement.from_tensor(TensorElem())
    with pytest.raises(ValidationError):
        # Not homogeneous.
        PetriKernelElement.from_tensor(TensorElem([(1, X1, X2), (1, ONE, ONE)]))
    with pytest.raises(ValidationError):
        x1_sq = Poly2.parse("x1^2")
        PetriKernelElement.from_tensor(TensorElem([(1, x1_sq, ONE), (-1, ONE, x1_sq)]))
    with pytest.raises(ValidationError):
        PetriKernelElement.from_tensor(TensorElem.pure(ONE, ONE))


def test_sample_kernel_elements():
    samples = sample_kernel_elements(2, 5, random.Random(7))
    assert len(samples) == 5
    assert samples == sample_kernel_elements(2, 5, random.Random(7)), "Seeded"
    for element in samples:
        assert element.tensor
        assert not petri_map(element.tensor)

    assert sample_kernel_elements(0, 5, random.Random(7)) == []

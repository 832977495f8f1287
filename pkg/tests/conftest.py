import random

import pytest

from mtc import DEFAULT_SEED
from mtc.exactalg import ONE, X1, X2, Poly2, TensorElem
from mtc.petri_wendl.petri import PetriKernelElement


@pytest.fixture
def rng():
    yield random.Random(DEFAULT_SEED)


@pytest.fixture
def b1() -> PetriKernelElement:
    # x1 (x) 1 - 1 (x) x1, the first degree-1 kernel basis element.
    tensor = TensorElem([(1, X1, ONE), (-1, ONE, X1)])
    return PetriKernelElement.from_tensor(tensor)


@pytest.fixture
def b1_second() -> PetriKernelElement:
    tensor = TensorElem([(1, X2, ONE), (-1, ONE, X2)])
    return PetriKernelElement.from_tensor(tensor)


@pytest.fixture
def b_sym() -> PetriKernelElement:
    # p (x) 1 + 1 (x) p - 2 x1 (x) x1 + 2 x2 (x) x2 with p = x1^2 - x2^2.
    # Symmetric under swapping the factors.
    p = Poly2.parse("x1^2 - x2^2")
    tensor = TensorElem([
        (1, p, ONE),
        (1, ONE, p),
        (-2, X1, X1),
        (2, X2, X2),
    ])
    return PetriKernelElement.from_tensor(tensor)


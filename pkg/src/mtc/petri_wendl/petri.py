import logging
import random
import typing
from fractions import Fraction

from mtc.errors import ValidationError
from mtc.exactalg.laplacian import apply_laplacian, harmonic_basis
from mtc.exactalg.linalg import nullspace, zeros
from mtc.exactalg.poly import Poly2, TensorElem, monomials_of_degree
from mtc.petri_wendl import SAMPLE_DENOMINATOR_MAX, SAMPLE_NUMERATOR_MAX

if typing.TYPE_CHECKING:
    from mtc.types import Degree, Matrix

logger = logging.getLogger(__name__)


def petri_map(B: TensorElem) -> Poly2:
    """Multiply the two tensor factors: sum_i c_i * p_i * q_i."""
    result = Poly2.zero()
    for c, p, q in B.summands:
        result = result + (p * q) * c
    return result


class PetriKernelElement:
    """A homogeneous element of the Petri kernel with harmonic factors.

    Arguments:
        tensor: The element itself.
        certificate: Coefficients of `petri_map(tensor)` on the degree-d
            monomials, all zero for a valid element.

    """
    __slots__ = ["tensor", "degree", "certificate"]

    def __init__(self, tensor: TensorElem, degree: "Degree", certificate: tuple[Fraction, ...]):
        self.tensor = tensor
        self.degree = degree
        self.certificate = certificate

    @classmethod
    def from_tensor(cls, tensor: TensorElem) -> "PetriKernelElement":
        """Validate `tensor` and wrap it.

        Raises:
            ValidationError: If the tensor is zero, not homogeneous, has a
                non-harmonic factor or does not multiply to zero.

        """
        if not tensor:
            raise ValidationError("The zero tensor is not accepted as a kernel element.")
        d = tensor.degree
        if d is None:
            raise ValidationError("Kernel elements must be homogeneous.")

        for _, p, q in tensor.summands:
            if apply_laplacian(p) or apply_laplacian(q):
                raise ValidationError(f"Factor is not harmonic in summand {p} (x) {q}.")

        product = petri_map(tensor)
        certificate = tuple(product.coefficient(mon) for mon in monomials_of_degree(d))
        if product:
            raise ValidationError(f"Tensor is not in the Petri kernel, it multiplies to {product}.")

        return cls(tensor, d, certificate)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PetriKernelElement):
            return NotImplemented
        return self.tensor == other.tensor

    def __hash__(self) -> int:
        return hash(self.tensor)

    def __str__(self) -> str:
        return str(self.tensor)

    def __repr__(self) -> str:
        return f"PetriKernelElement(degree={self.degree}, tensor={str(self.tensor)!r})"


def harmonic_pairs(d: "Degree") -> list[tuple[Poly2, Poly2]]:
    """Basis of the degree-d tensors whose factors are harmonic.

    The pairs are h (x) h' with h from harmonic_basis(l) and h' from
    harmonic_basis(d - l), for l = 0..d. There are 4d of them for d >= 1.

    """
    return [
        (left, right)
        for l in range(d + 1)
        for left in harmonic_basis(l)
        for right in harmonic_basis(d - l)
    ]


def multiplication_matrix(d: "Degree") -> "Matrix":
    """The Petri map on `harmonic_pairs(d)`; rows are degree-d monomials."""
    pairs = harmonic_pairs(d)
    rows = monomials_of_degree(d)
    row_of = {mon: i for i, mon in enumerate(rows)}

    matrix = zeros(len(rows), len(pairs))
    for j, (left, right) in enumerate(pairs):
        for mon, c in left * right:
            matrix[row_of[mon]][j] = c
    return matrix


def petri_kernel_basis(d: "Degree") -> list[PetriKernelElement]:
    """Basis of the Petri kernel in degree d.

    Solves the multiplication constraints, one per degree-d monomial, over
    the span of `harmonic_pairs(d)`. The kernel is empty for d = 0 and has
    dimension 3d - 1 for d >= 1.

    """
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got {d}.")

    pairs = harmonic_pairs(d)
    vectors = nullspace(multiplication_matrix(d), len(pairs))
    logger.debug("Petri kernel in degree %s: %s of %s pairs", d, len(vectors), len(pairs))

    basis = []
    for v in vectors:
        tensor = TensorElem((c, left, right) for c, (left, right) in zip(v, pairs) if c != 0)
        basis.append(PetriKernelElement.from_tensor(tensor))
    return basis


def random_coefficient(rng: random.Random) -> Fraction:
    """A non-zero rational p/q with small numerator and denominator."""
    num = rng.randint(1, SAMPLE_NUMERATOR_MAX) * rng.choice((1, -1))
    return Fraction(num, rng.randint(1, SAMPLE_DENOMINATOR_MAX))


def sample_kernel_elements(d: "Degree", count: int, rng: random.Random) -> list[PetriKernelElement]:
    """Seeded random combinations of the degree-d kernel basis.

    Every basis element gets a non-zero coefficient, so the samples are
    never zero. Returns nothing when the kernel is trivial.

    """
    basis = petri_kernel_basis(d)
    if not basis:
        return []

    samples = []
    for _ in range(count):
        combo = TensorElem()
        for element in basis:
            combo = combo + element.tensor * random_coefficient(rng)
        samples.append(PetriKernelElement.from_tensor(combo))
    return samples

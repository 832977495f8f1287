"""Finite-dimensional model of the Fredholm stratification.

An operator T: X -> Y is split along X = V + K and Y = I + C, where K and
C model the kernel and cokernel of a base operator L. In block form

    T = [[A, B],
         [Cb, D]]

with A: V -> I, B: K -> I, Cb: V -> C and D: K -> C. While A stays
invertible, T has the same kernel and cokernel dimensions as its Schur
reduction D - Cb A^-1 B: K -> C.

"""
import logging
import random
import typing
from fractions import Fraction

from mtc.errors import SingularBlockError, ValidationError
from mtc.exactalg.linalg import (
    bareiss_rank,
    identity,
    inverse,
    matmul,
    matsub,
    shape,
    submatrix,
    zeros,
)
from mtc.orbifold.local import Convention, LocalSystem, twisted_index

if typing.TYPE_CHECKING:
    from mtc.types import Matrix

logger = logging.getLogger(__name__)

# Randomized operators stay small so exact nullspace oracles are instant.
MAX_MODEL_SIZE = 12
# The stratum bound needs (n - 2)/2 >= 2.
MIN_AMBIENT_DIM = 6


class FiniteOperator:
    """An exact matrix together with the kernel/cokernel splitting.

    Arguments:
        matrix: rows x cols matrix of T.
        kernel_cols: Column indices spanning K.
        cokernel_rows: Row indices spanning C.
        base: Optional base operator L with the same splitting.

    """
    __slots__ = ["matrix", "nrows", "ncols", "kernel_cols", "cokernel_rows", "base"]

    def __init__(
        self,
        matrix: "Matrix",
        kernel_cols: typing.Sequence[int],
        cokernel_rows: typing.Sequence[int],
        base: "Matrix | None" = None,
        ncols: int | None = None,
    ):
        self.nrows, self.ncols = shape(matrix, ncols)
        if any(len(row) != self.ncols for row in matrix):
            raise ValidationError("Matrix rows have different lengths.")
        if len(set(kernel_cols)) != len(kernel_cols) or not all(0 <= j < self.ncols for j in kernel_cols):
            raise ValidationError(f"Invalid kernel columns {list(kernel_cols)}.")
        if len(set(cokernel_rows)) != len(cokernel_rows) or not all(0 <= i < self.nrows for i in cokernel_rows):
            raise ValidationError(f"Invalid cokernel rows {list(cokernel_rows)}.")
        if self.nrows - len(cokernel_rows) != self.ncols - len(kernel_cols):
            raise ValidationError("The A-block must be square: dim V must equal dim I.")

        self.matrix = [[Fraction(x) for x in row] for row in matrix]
        self.kernel_cols = sorted(kernel_cols)
        self.cokernel_rows = sorted(cokernel_rows)
        self.base = base

        if base is not None:
            L = FiniteOperator(base, self.kernel_cols, self.cokernel_rows, ncols=self.ncols)
            kernel = self.ncols - bareiss_rank(L.matrix)
            cokernel = self.nrows - bareiss_rank(L.matrix)
            if kernel != len(self.kernel_cols) or cokernel != len(self.cokernel_rows):
                raise ValidationError(
                    f"Splitting has dim K={len(self.kernel_cols)}, dim C={len(self.cokernel_rows)} "
                    f"but the base has kernel {kernel} and cokernel {cokernel}."
                )

    @property
    def domain_cols(self) -> list[int]:
        """Column indices spanning V."""
        kernel = set(self.kernel_cols)
        return [j for j in range(self.ncols) if j not in kernel]

    @property
    def image_rows(self) -> list[int]:
        """Row indices spanning I."""
        cokernel = set(self.cokernel_rows)
        return [i for i in range(self.nrows) if i not in cokernel]

    def blocks(self) -> tuple["Matrix", "Matrix", "Matrix", "Matrix"]:
        """The blocks A, B, Cb, D."""
        V, K = self.domain_cols, self.kernel_cols
        I, C = self.image_rows, self.cokernel_rows
        return (
            submatrix(self.matrix, I, V),
            submatrix(self.matrix, I, K),
            submatrix(self.matrix, C, V),
            submatrix(self.matrix, C, K),
        )

    def with_matrix(self, matrix: "Matrix") -> "FiniteOperator":
        return FiniteOperator(matrix, self.kernel_cols, self.cokernel_rows, ncols=self.ncols)

    def kernel_dim(self) -> int:
        return self.ncols - bareiss_rank(self.matrix)

    def cokernel_dim(self) -> int:
        return self.nrows - bareiss_rank(self.matrix)


def _a_inverse(T: FiniteOperator) -> "Matrix":
    A = T.blocks()[0]
    try:
        return inverse(A)
    except SingularBlockError:
        raise SingularBlockError("The A-block is not invertible, T is too far from the base.") from None


def schur_reduce(T: FiniteOperator) -> "Matrix":
    """D - Cb A^-1 B, a |C| x |K| matrix.

    Raises:
        SingularBlockError: The A-block is not invertible.

    """
    _, B, Cb, D = T.blocks()
    a_inv = _a_inverse(T)
    nv = len(T.domain_cols)
    correction = matmul(Cb, matmul(a_inv, B, nv, len(T.kernel_cols)), nv, len(T.kernel_cols))
    return matsub(D, correction)


def verify_kernel_equivalence(T: FiniteOperator) -> bool:
    """Compare kernel and cokernel dimensions of T and of its reduction."""
    reduced = schur_reduce(T)
    rank = bareiss_rank(reduced)
    ker_reduced = len(T.kernel_cols) - rank
    coker_reduced = len(T.cokernel_rows) - rank
    ker, coker = T.kernel_dim(), T.cokernel_dim()
    logger.debug("ker %s vs %s, coker %s vs %s", ker, ker_reduced, coker, coker_reduced)
    return ker == ker_reduced and coker == coker_reduced


def _permutation_rows(order: list[int]) -> "Matrix":
    """P with (P @ M)[i] = M[order[i]]."""
    P = zeros(len(order), len(order))
    for i, j in enumerate(order):
        P[i][j] = Fraction(1)
    return P


def schur_normal_form(T: FiniteOperator) -> tuple["Matrix", "Matrix"]:
    """Invertible Phi, Psi with Phi @ T @ Psi = diag(Id, schur_reduce(T)).

    The diagonal form is written in block order: first I then C for the
    rows, first V then K for the columns.

    """
    _, B, Cb, _ = T.blocks()
    a_inv = _a_inverse(T)
    nv, nk, nc = len(T.domain_cols), len(T.kernel_cols), len(T.cokernel_rows)

    # Phi_blk = [[A^-1, 0], [-Cb A^-1, Id]]
    cb_a_inv = matmul(Cb, a_inv, nv, nv)
    phi_blk = zeros(nv + nc, nv + nc)
    for i in range(nv):
        phi_blk[i][:nv] = a_inv[i]
    for i in range(nc):
        phi_blk[nv + i][:nv] = [-x for x in cb_a_inv[i]]
        phi_blk[nv + i][nv + i] = Fraction(1)

    # Psi_blk = [[Id, -A^-1 B], [0, Id]]
    a_inv_b = matmul(a_inv, B, nv, nk)
    psi_blk = identity(nv + nk)
    for i in range(nv):
        psi_blk[i][nv:] = [-x for x in a_inv_b[i]]

    row_perm = _permutation_rows(T.image_rows + T.cokernel_rows)
    col_perm = _permutation_rows(T.domain_cols + T.kernel_cols)
    phi = matmul(phi_blk, row_perm)
    # Transpose of a permutation matrix, (M @ Q^T)[:, j] = M[:, order[j]].
    col_perm_t = [list(col) for col in zip(*col_perm)] if col_perm else []
    psi = matmul(col_perm_t, psi_blk)
    return phi, psi


def schur_differential(T: FiniteOperator, tangent: "Matrix") -> "Matrix":
    """Derivative of `schur_reduce` at T in the direction `tangent`.

    At the base operator, where B, Cb and D vanish, this is the K -> C
    block of the tangent.

    """
    _, B, Cb, _ = T.blocks()
    dA, dB, dC, dD = T.with_matrix(tangent).blocks()
    a_inv = _a_inverse(T)
    nv, nk = len(T.domain_cols), len(T.kernel_cols)

    term_c = matmul(dC, matmul(a_inv, B, nv, nk), nv, nk)
    term_b = matmul(Cb, matmul(a_inv, dB, nv, nk), nv, nk)
    term_a = matmul(Cb, matmul(a_inv, matmul(dA, matmul(a_inv, B, nv, nk), nv, nk), nv, nk), nv, nk)
    return [
        [d - c - b + a for d, c, b, a in zip(rd, rc, rb, ra)]
        for rd, rc, rb, ra in zip(dD, term_c, term_b, term_a)
    ]


def base_operator(size: int, kernel_dim: int, cokernel_dim: int, rng: random.Random) -> FiniteOperator:
    """L with an invertible random A-block and zero B, Cb, D.

    K is the last `kernel_dim` columns and C the last `cokernel_dim` rows.

    """
    if kernel_dim > size:
        raise ValueError(f"Kernel dimension {kernel_dim} exceeds size {size}.")
    nv = size - kernel_dim
    nrows = nv + cokernel_dim
    if max(nrows, size) > MAX_MODEL_SIZE:
        raise ValueError(f"Model size is capped at {MAX_MODEL_SIZE}.")

    matrix = zeros(nrows, size)
    for i in range(nv):
        for j in range(nv):
            matrix[i][j] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        # Strictly diagonally dominant, hence invertible.
        matrix[i][i] = Fraction(3 * nv + rng.randint(1, 5))
    kernel_cols = list(range(nv, size))
    cokernel_rows = list(range(nv, nrows))
    return FiniteOperator(matrix, kernel_cols, cokernel_rows, base=matrix, ncols=size)


def random_operator(
    rng: random.Random,
    size: int,
    kernel_dim: int,
    cokernel_dim: int,
    perturbation_rank: int | None = None,
) -> FiniteOperator:
    """A random perturbation T of a random base operator L.

    The perturbation has rank at most `perturbation_rank` (random when
    None). Samples whose A-block turns singular are redrawn, so the
    result always admits a Schur reduction.

    """
    L = base_operator(size, kernel_dim, cokernel_dim, rng)
    nrows = L.nrows
    r = perturbation_rank if perturbation_rank is not None else rng.randint(0, min(nrows, size))

    while True:
        left = [[Fraction(rng.randint(-2, 2), rng.randint(1, 4)) for _ in range(r)] for _ in range(nrows)]
        right = [[Fraction(rng.randint(-2, 2), rng.randint(1, 4)) for _ in range(size)] for _ in range(r)]
        perturbation = matmul(left, right, r, size)
        matrix = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(L.matrix, perturbation)]
        T = FiniteOperator(matrix, L.kernel_cols, L.cokernel_rows, base=L.matrix, ncols=size)
        if bareiss_rank(T.blocks()[0]) == len(T.domain_cols):
            return T
        logger.debug("Redrawing a perturbation with singular A-block")


# --------
# Codimension formulas
# --------


class Component(typing.NamedTuple):
    """k: dimension of the endomorphism algebra, d: kernel, c: cokernel."""
    k: int
    d: int
    c: int = 0


class StratumQuery(typing.NamedTuple):
    components: tuple[Component, ...]
    ambient: int = 0
    s: int = 0

    @classmethod
    def create(
        cls,
        components: typing.Iterable[typing.Sequence[int]],
        ambient: int = 0,
        s: int = 0,
    ) -> "StratumQuery":
        comps = tuple(Component(*comp) for comp in components)
        for comp in comps:
            if min(comp) < 0:
                raise ValidationError(f"Stratum data must be non-negative, got {tuple(comp)}.")
        if ambient < 0 or s < 0:
            raise ValidationError("Ambient dimension and point count must be non-negative.")
        return cls(comps, ambient, s)


def codim_plain(d: int, c: int) -> int:
    if d < 0 or c < 0:
        raise ValueError(f"Kernel and cokernel dimensions must be non-negative, got ({d}, {c}).")
    return d * c


def codim_equivariant(q: StratumQuery) -> int:
    return sum(comp.k * comp.d * comp.c for comp in q.components)


class StratumBound(typing.NamedTuple):
    codim: int
    bound: Fraction
    top_stratum: bool
    index: int


def codim_stratum_bound(q: StratumQuery, per_point_quotient_dims: typing.Sequence[int]) -> StratumBound:
    """Codimension of a stratum of the twisted problem and its lower bound.

    The cokernel of every component is c_i = d_i - index with the
    proof-convention twisted index for rk = n - 2. The bound is
    (n - 2)s/2 + 1 and the top stratum has codimension exactly 2s + 1.

    The index -(n - 2) * sum(q)/2 must be an integer, so an odd n needs
    an even total quotient dimension. Other input is a ValidationError.

    """
    n, s = q.ambient, q.s
    if n < MIN_AMBIENT_DIM:
        raise ValidationError(f"The stratum bound needs n >= {MIN_AMBIENT_DIM}, got {n}.")
    if len(per_point_quotient_dims) != s:
        raise ValidationError(f"Expected {s} quotient dimensions, got {len(per_point_quotient_dims)}.")
    if any(dim < 1 for dim in per_point_quotient_dims):
        raise ValidationError("Every orbifold point needs quotient dimension >= 1.")
    if not any(comp.k >= 1 and comp.d >= 1 for comp in q.components):
        raise ValidationError("At least one component needs k >= 1 and a non-trivial kernel.")
    if (n - 2) * sum(per_point_quotient_dims) % 2:
        raise ValidationError(
            f"Twisted index is not an integer for n = {n} and total quotient dimension "
            f"{sum(per_point_quotient_dims)}: an odd n needs an even total."
        )

    ls = LocalSystem.from_quotient_dims(per_point_quotient_dims)
    index = twisted_index(n - 2, ls, Convention.PROOF)
    codim = sum(comp.k * comp.d * (comp.d - int(index)) for comp in q.components)
    bound = Fraction((n - 2) * s, 2) + 1
    if codim < bound:
        logger.warning("Codimension %s below the bound %s for %s", codim, bound, q)
    return StratumBound(codim, bound, codim == 2 * s + 1, int(index))

import enum
import logging
import typing
from fractions import Fraction

from mtc.errors import ValidationError, WendlBoundError
from mtc.exactalg.laplacian import RightInverse, right_inverse_monomial
from mtc.exactalg.linalg import bareiss_rank, zeros
from mtc.exactalg.poly import Monomial2, Poly2, TensorElem, monomials_of_degree, monomials_up_to
from mtc.petri_wendl import min_jet_degree
from mtc.petri_wendl.petri import PetriKernelElement

if typing.TYPE_CHECKING:
    from mtc.types import Degree, Matrix

logger = logging.getLogger(__name__)


class Pairing(enum.StrEnum):
    """Right inverses used on the (left, right) tensor factors.

    SYMMETRIC uses the symmetric right inverse on both factors. The map is
    then invariant under swapping the factors of B and vanishes on every
    antisymmetric B. SPLIT uses the x1-sided inverse on the left factor
    and the x2-sided one on the right.

    """
    SYMMETRIC = "symmetric"
    SPLIT = "split"

    @property
    def left(self) -> RightInverse:
        return RightInverse.X1 if self is Pairing.SPLIT else RightInverse.SYMMETRIC

    @property
    def right(self) -> RightInverse:
        return RightInverse.X2 if self is Pairing.SPLIT else RightInverse.SYMMETRIC


def _tensor(B: "TensorElem | PetriKernelElement") -> TensorElem:
    return B.tensor if isinstance(B, PetriKernelElement) else B


def wendl_apply(
    B: "TensorElem | PetriKernelElement",
    A: Monomial2 | tuple[int, int],
    pairing: Pairing = Pairing.SYMMETRIC,
) -> Poly2:
    """Evaluate Wendl's map of B on the monomial A.

    Returns sum_i c_i * (R(A*p_i)*q_i + p_i*R(A*q_i)), where R is the
    right inverse chosen by `pairing` for the respective factor.

    """
    tensor = _tensor(B)
    if tensor.degree is None:
        raise ValueError("Wendl's map is only defined for homogeneous B.")
    A = Monomial2(*A)
    pairing = Pairing(pairing)

    terms: list[tuple[Monomial2, Fraction]] = []
    for (a, b), c in tensor.coefficients().items():
        lifted = a * A
        for mon, rc in right_inverse_monomial(lifted.e1, lifted.e2, pairing.left):
            terms.append((mon * b, c * rc))
        lifted = b * A
        for mon, rc in right_inverse_monomial(lifted.e1, lifted.e2, pairing.right):
            terms.append((a * mon, c * rc))
    return Poly2(terms)


class WendlMatrix:
    """Matrix of Wendl's map on all monomials of degree at most l.

    An input of degree s is mapped to degree s + d + 2, so the matrix is
    block diagonal with one block per input degree. Rows are all monomials
    of degree d+2 .. l+d+2, columns all monomials of degree 0 .. l, both in
    the global term order. Entries are stored sparsely.

    """
    __slots__ = ["degree", "l", "pairing", "rows", "cols", "entries"]

    def __init__(
        self,
        degree: "Degree",
        l: "Degree",
        pairing: Pairing,
        rows: dict[Monomial2, int],
        cols: dict[Monomial2, int],
        entries: dict[tuple[int, int], Fraction],
    ):
        self.degree = degree
        self.l = l
        self.pairing = pairing
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def column(self, A: Monomial2 | tuple[int, int]) -> dict[Monomial2, Fraction]:
        j = self.cols[Monomial2(*A)]
        by_index = {i: mon for mon, i in self.rows.items()}
        return {by_index[i]: c for (i, jj), c in self.entries.items() if jj == j}

    def block(self, s: "Degree") -> "Matrix":
        """Dense block from input degree s to output degree s + d + 2."""
        if not 0 <= s <= self.l:
            raise ValueError(f"Input degree {s} outside 0..{self.l}.")
        row_mons = monomials_of_degree(s + self.degree + 2)
        col_mons = monomials_of_degree(s)
        block = zeros(len(row_mons), len(col_mons))
        for bi, rmon in enumerate(row_mons):
            i = self.rows[rmon]
            for bj, cmon in enumerate(col_mons):
                block[bi][bj] = self.entries.get((i, self.cols[cmon]), Fraction(0))
        return block

    def dense(self) -> "Matrix":
        n, m = self.shape
        matrix = zeros(n, m)
        for (i, j), c in self.entries.items():
            matrix[i][j] = c
        return matrix


def wendl_matrix(
    B: "TensorElem | PetriKernelElement",
    l: "Degree",
    pairing: Pairing = Pairing.SYMMETRIC,
) -> WendlMatrix:
    """Assemble the matrix of `wendl_apply(B, .)` on monomials of degree <= l."""
    if l < 0:
        raise ValueError(f"Jet degree must be non-negative, got {l}.")
    tensor = _tensor(B)
    d = tensor.degree
    if d is None:
        raise ValueError("Wendl's map is only defined for homogeneous B.")
    # The zero tensor has degree -1, lay it out as degree 0.
    d = max(d, 0)
    pairing = Pairing(pairing)

    cols = {mon: j for j, mon in enumerate(monomials_up_to(l))}
    row_mons = [mon for s in range(l + 1) for mon in monomials_of_degree(s + d + 2)]
    rows = {mon: i for i, mon in enumerate(row_mons)}

    entries: dict[tuple[int, int], Fraction] = {}
    for A, j in cols.items():
        for mon, c in wendl_apply(tensor, A, pairing):
            assert mon in rows, f"Output monomial {mon} outside the row layout"
            entries[(rows[mon], j)] = c

    logger.debug("Wendl matrix l=%s d=%s: %sx%s, %s non-zeros", l, d, len(rows), len(cols), len(entries))
    return WendlMatrix(d, l, pairing, rows, cols, entries)


def exact_rank(M: "WendlMatrix | Matrix", l: "Degree | None" = None) -> int:
    """Exact rank over the rationals.

    For a `WendlMatrix` this is the sum of the block ranks, restricted to
    input degrees <= l when `l` is given. Dense matrices are reduced as a
    whole.

    """
    if not isinstance(M, WendlMatrix):
        return bareiss_rank(M)

    top = M.l if l is None else l
    if top > M.l:
        raise ValueError(f"Matrix was assembled up to l={M.l}, asked for l={top}.")
    total = 0
    for s in range(top + 1):
        r = bareiss_rank(M.block(s))
        logger.debug("Block s=%s: rank %s", s, r)
        total += r
    return total


def rank_profile(M: WendlMatrix) -> list[int]:
    """rank of the restriction to degrees <= l', for every l' = 0..M.l."""
    profile = []
    total = 0
    for s in range(M.l + 1):
        total += bareiss_rank(M.block(s))
        profile.append(total)
    return profile


def column_count(l: "Degree") -> int:
    return (l + 1) * (l + 2) // 2


class WendlCheck(typing.NamedTuple):
    l: int
    columns: int
    rank: int
    # Smallest integer rank satisfying rank >= l/2.
    bound: int
    passed: bool

    def to_dict(self) -> dict[str, int | bool]:
        return {
            "l": self.l,
            "columns": self.columns,
            "rank": self.rank,
            "bound": self.bound,
            "pass": self.passed,
        }


class WendlReport:
    __slots__ = ["element", "pairing", "checks", "profile", "empirical_threshold"]

    def __init__(
        self,
        element: PetriKernelElement,
        pairing: Pairing,
        checks: list[WendlCheck],
        profile: list[int],
        empirical_threshold: int | None,
    ):
        self.element = element
        self.pairing = pairing
        self.checks = checks
        self.profile = profile
        self.empirical_threshold = empirical_threshold

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "degree": self.element.degree,
            "element": str(self.element),
            "pairing": str(self.pairing),
            "per_l": [check.to_dict() for check in self.checks],
            "empirical_threshold": self.empirical_threshold,
        }


def empirical_threshold(profile: list[int]) -> int | None:
    """Smallest l0 such that rank >= l/2 for every l in l0..len(profile)-1.

    None if the bound fails at the largest tested l.

    """
    threshold = None
    for l in range(len(profile) - 1, -1, -1):
        if 2 * profile[l] < l:
            break
        threshold = l
    return threshold


def verify_wendl_bound(
    B: "PetriKernelElement | TensorElem",
    l_values: typing.Sequence["Degree"],
    pairing: Pairing = Pairing.SYMMETRIC,
) -> WendlReport:
    """Check rank(L^{<=l}) >= l/2 for every l in `l_values`.

    Every l must be at least 10*d + 6. One matrix is assembled for the
    largest l and its rank profile serves all smaller ones.

    `pairing` defaults to SYMMETRIC like `wendl_matrix`. The bound fails
    there on factor-antisymmetric elements, so the verify-wendl command
    passes SPLIT unless told otherwise.

    Raises:
        ValidationError: B is zero, not a kernel element or an l is too small.
        WendlBoundError: Some rank is below l/2; the report is attached.

    """
    element = B if isinstance(B, PetriKernelElement) else PetriKernelElement.from_tensor(B)
    if not l_values:
        raise ValidationError("At least one jet degree l is required.")
    lowest = min_jet_degree(element.degree)
    for l in l_values:
        if l < lowest:
            raise ValidationError(f"Jet degree l={l} is below {lowest} for a degree {element.degree} element.")

    pairing = Pairing(pairing)
    M = wendl_matrix(element, max(l_values), pairing)
    profile = rank_profile(M)

    checks = [
        WendlCheck(
            l=l,
            columns=column_count(l),
            rank=profile[l],
            bound=(l + 1) // 2,
            passed=2 * profile[l] >= l,
        )
        for l in l_values
    ]
    report = WendlReport(element, pairing, checks, profile, empirical_threshold(profile))

    if not report.passed:
        failed = [check.l for check in checks if not check.passed]
        logger.warning("Rank bound fails for %s at l=%s", element, failed)
        raise WendlBoundError(f"Rank below l/2 at l={failed} for {element}.", report=report)

    logger.info(
        "Rank bound holds for %s (%s pairing), empirical threshold %s",
        element, pairing, report.empirical_threshold,
    )
    return report

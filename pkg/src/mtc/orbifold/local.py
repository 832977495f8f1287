import enum
import logging
import typing
from fractions import Fraction

from mtc.errors import ValidationError

if typing.TYPE_CHECKING:
    from mtc.types import Multiplicity

logger = logging.getLogger(__name__)


class MultiplicityFunction:
    """Orders of the orbifold points; every other point has order 1.

    Arguments:
        points: Point id to order, every order at least 2.

    """
    __slots__ = ["points"]

    def __init__(self, points: "typing.Mapping[str, Multiplicity] | None" = None):
        points = dict(points or {})
        for x, order in points.items():
            if order < 2:
                raise ValidationError(f"Orbifold point {x!r} needs order >= 2, got {order}.")
        self.points: dict[str, int] = dict(sorted(points.items()))

    def __call__(self, x: str) -> int:
        return self.points.get(x, 1)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiplicityFunction):
            return NotImplemented
        return self.points == other.points

    def __repr__(self) -> str:
        return f"MultiplicityFunction({self.points})"


class CyclicRep(typing.NamedTuple):
    """z -> diag(z^w_1, ..., z^w_r) for the cyclic group of the given order."""
    order: int
    weights: tuple[int, ...]

    @classmethod
    def create(cls, order: int, weights: typing.Iterable[int]) -> "CyclicRep":
        weights = tuple(weights)
        if order < 1:
            raise ValidationError(f"Cyclic order must be >= 1, got {order}.")
        for w in weights:
            if not 0 <= w < order:
                raise ValidationError(f"Weight {w} outside 0..{order - 1}.")
        return cls(order, weights)

    @property
    def rank(self) -> int:
        return len(self.weights)

    def is_trivial(self) -> bool:
        return invariant_dim(self) == self.rank


def invariant_dim(rep: CyclicRep) -> int:
    """Dimension of the invariant subspace: the number of zero weights."""
    return sum(1 for w in rep.weights if w % rep.order == 0)


def quotient_dim(rep: CyclicRep) -> int:
    return rep.rank - invariant_dim(rep)


class LocalSystem:
    """Euclidean local system of rank r with cyclic monodromy at points.

    Arguments:
        rank: r = dim V.
        monodromy: Point id to the local representation around it.
        multiplicity: If given, its points and orders must match the
            monodromy exactly.

    """
    __slots__ = ["rank", "monodromy"]

    def __init__(
        self,
        rank: int,
        monodromy: typing.Mapping[str, CyclicRep],
        multiplicity: MultiplicityFunction | None = None,
    ):
        if rank < 1:
            raise ValidationError(f"Local system rank must be >= 1, got {rank}.")
        for x, rep in monodromy.items():
            if rep.rank != rank:
                raise ValidationError(f"Monodromy at {x!r} has rank {rep.rank}, expected {rank}.")

        if multiplicity is not None:
            orders = {x: rep.order for x, rep in monodromy.items()}
            if orders != multiplicity.points:
                raise ValidationError(
                    f"Monodromy orders {orders} do not match the multiplicity function {multiplicity.points}."
                )

        self.rank = rank
        self.monodromy: dict[str, CyclicRep] = dict(sorted(monodromy.items()))

    @classmethod
    def from_quotient_dims(cls, dims: typing.Sequence[int], rank: int | None = None) -> "LocalSystem":
        """Order-2 monodromy with the given quotient dimension per point.

        Points are named p0, p1, ... in order.

        """
        rank = rank if rank is not None else max(dims, default=1)
        rank = max(rank, 1)
        monodromy = {}
        for i, q in enumerate(dims):
            if not 0 <= q <= rank:
                raise ValidationError(f"Quotient dimension {q} outside 0..{rank}.")
            monodromy[f"p{i}"] = CyclicRep.create(2, [1] * q + [0] * (rank - q))
        return cls(rank, monodromy)

    @property
    def multiplicity(self) -> MultiplicityFunction:
        return MultiplicityFunction({x: rep.order for x, rep in self.monodromy.items() if rep.order >= 2})

    def quotients(self) -> dict[str, int]:
        return {x: quotient_dim(rep) for x, rep in self.monodromy.items()}

    def total_quotient(self) -> int:
        return sum(self.quotients().values())

    def tensor_trivial(self, rank: int) -> "LocalSystem":
        """N (x) V with N a trivial system of the given rank."""
        if rank < 1:
            raise ValidationError(f"Trivial factor rank must be >= 1, got {rank}.")
        return LocalSystem(
            self.rank * rank,
            {x: CyclicRep(rep.order, rep.weights * rank) for x, rep in self.monodromy.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalSystem):
            return NotImplemented
        return self.rank == other.rank and self.monodromy == other.monodromy

    def __repr__(self) -> str:
        return f"LocalSystem(rank={self.rank}, monodromy={self.monodromy})"


# --------
# Euler characteristics and indices
# --------


def hecke_euler_char(chi_base: int | Fraction, ls: LocalSystem) -> int | Fraction:
    """Euler characteristic after the Hecke modification at every point."""
    return chi_base - ls.total_quotient()


def local_system_degree(ls: LocalSystem) -> Fraction:
    return Fraction(ls.total_quotient(), 2)


class Convention(enum.StrEnum):
    """The two normalizations of the twisted index.

    PROOF gives -1/2 * rk * sum, which is what the codimension estimate
    consumes. STATEMENT gives -rk * sum.

    """
    PROOF = "proof"
    STATEMENT = "statement"


def twisted_index(rk_normal_complex: int, ls: LocalSystem, convention: Convention = Convention.PROOF) -> Fraction:
    """Index of the Jacobi operator twisted by `ls`.

    Arguments:
        rk_normal_complex: Complex rank of the normal bundle, n - 2.

    """
    if rk_normal_complex < 1:
        raise ValueError(f"Normal bundle rank must be >= 1, got {rk_normal_complex}.")
    total = ls.total_quotient()
    if Convention(convention) is Convention.STATEMENT:
        return Fraction(-rk_normal_complex * total)
    return Fraction(-rk_normal_complex * total, 2)


def index_via_riemann_roch(rk_normal_complex: int, ls: LocalSystem) -> Fraction:
    """The proof-convention twisted index through Riemann-Roch.

    chi(N (x) V) is dim V times the untwisted index (zero) plus rk times
    the degree of V, and the Hecke modification of N (x) V then
    subtracts rk times the total quotient dimension.

    """
    if rk_normal_complex < 1:
        raise ValueError(f"Normal bundle rank must be >= 1, got {rk_normal_complex}.")
    untwisted = untwisted_index_check(ls.multiplicity)
    chi = ls.rank * untwisted + rk_normal_complex * local_system_degree(ls)
    return Fraction(hecke_euler_char(chi, ls.tensor_trivial(rk_normal_complex)))


def untwisted_index_check(multiplicity: MultiplicityFunction) -> int:
    """Index of the Jacobi operator pulled back along the orbifold map.

    Pullback twists by the trivial local system, whose quotients all
    vanish, so this is the index of the untwisted operator, zero.

    """
    trivial = LocalSystem(
        1,
        {x: CyclicRep(order, (0,)) for x, order in multiplicity.points.items()},
        multiplicity,
    )
    index = twisted_index(1, trivial)
    assert index.denominator == 1, "Untwisted index is an integer"
    return int(index)


def normalize_multiplicity(
    multiplicity: MultiplicityFunction,
    ls: LocalSystem,
) -> tuple[MultiplicityFunction, LocalSystem]:
    """Drop the orbifold points around which `ls` has trivial monodromy.

    Every point left has quotient dimension at least 1. Idempotent.

    """
    kept = {x: rep for x, rep in ls.monodromy.items() if not rep.is_trivial()}
    dropped = sorted(set(ls.monodromy) - set(kept))
    if dropped:
        logger.debug("Dropping points with trivial monodromy: %s", dropped)
    new_multiplicity = MultiplicityFunction(
        {x: order for x, order in multiplicity.points.items() if x not in dropped}
    )
    return new_multiplicity, LocalSystem(ls.rank, kept)

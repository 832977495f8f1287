import typing
from fractions import Fraction

from sympy.combinatorics import Permutation, PermutationGroup

from mtc.errors import ValidationError


class CoverSpec(typing.NamedTuple):
    """A degree-d cover given by the images of the fundamental group generators.

    Each image lists where 1..d go, e.g. (2, 1) is the swap on two sheets.

    """
    degree: int
    generator_images: tuple[tuple[int, ...], ...]

    @classmethod
    def create(cls, degree: int, generator_images: typing.Iterable[typing.Iterable[int]]) -> "CoverSpec":
        if degree < 1:
            raise ValidationError(f"Cover degree must be >= 1, got {degree}.")
        images = tuple(tuple(image) for image in generator_images)
        for image in images:
            if sorted(image) != list(range(1, degree + 1)):
                raise ValidationError(f"{image} is not a permutation of 1..{degree}.")
        return cls(degree, images)

    def permutations(self) -> list[Permutation]:
        if not self.generator_images:
            return [Permutation(list(range(self.degree)))]
        return [Permutation([x - 1 for x in image]) for image in self.generator_images]


def fixed_points(g: Permutation) -> int:
    return sum(1 for i, x in enumerate(g.array_form) if i == x)


def group_invariant_dim(group: PermutationGroup) -> int:
    """Dimension of the invariants of the permutation representation.

    By Burnside this is the average number of fixed points, which is the
    number of orbits.

    """
    elements = list(group.generate())
    average = Fraction(sum(fixed_points(g) for g in elements), len(elements))
    assert average.denominator == 1, "Burnside average must be an integer"
    return int(average)


class PermutationLocalSystem:
    """The pushforward of the trivial rank-1 system along a cover.

    Its monodromy is the permutation representation of the fundamental
    group, factoring through the group generated by the images.

    """
    __slots__ = ["cover", "group"]

    def __init__(self, cover: CoverSpec, group: PermutationGroup):
        self.cover = cover
        self.group = group

    @property
    def rank(self) -> int:
        return self.cover.degree

    @property
    def generators(self) -> list[Permutation]:
        return self.cover.permutations()

    def elements(self) -> list[Permutation]:
        return list(self.group.generate())

    def order(self) -> int:
        return int(self.group.order())

    def fixed_points(self, g: Permutation) -> int:
        return fixed_points(g)

    def invariant_dim(self) -> int:
        return group_invariant_dim(self.group)

    def orbit_count(self) -> int:
        seen: set[int] = set()
        count = 0
        for i in range(self.rank):
            if i not in seen:
                seen |= set(self.group.orbit(i))
                count += 1
        return count

    def is_regular(self) -> bool:
        """Whether the cover is Galois with deck group of order d."""
        return self.order() == self.rank


def pushforward_local_system(cover: CoverSpec) -> PermutationLocalSystem:
    """Permutation representation of the cover.

    Raises:
        ValidationError: The images do not act transitively, so the cover
            is disconnected.

    """
    group = PermutationGroup(cover.permutations())
    if len(group.orbit(0)) != cover.degree:
        raise ValidationError(f"Generators {cover.generator_images} do not act transitively.")
    return PermutationLocalSystem(cover, group)


def kernel_dim_rule(d: int, ker_nontrivial: bool) -> int:
    """Lower bound for dim ker of the pushed forward operator.

    A non-trivial kernel pulls back to every sheet; for d > 2 this forces
    at least two dimensions, so one-dimensional kernels only come from
    covers of degree at most 2.

    """
    if not ker_nontrivial:
        return 0
    return 1 if d <= 2 else 2

"""Double covers of a torus and the sign data attached to them.

Double covers of a torus T are classified by H^1(T, Z2), written as
the strings "00", "10", "01" and "11" with "00" the trivial class. A torus
carries a sign for every class, the sign of the determinant of its Jacobi
operator twisted by that class.

"""
import itertools
import typing

from mtc.errors import ValidationError
from mtc.orbifold.cover import CoverSpec

if typing.TYPE_CHECKING:
    from mtc.types import Sign

type Z2Class = str

TRIVIAL: Z2Class = "00"
NONTRIVIAL: tuple[Z2Class, ...] = ("10", "01", "11")
Z2CLASSES: tuple[Z2Class, ...] = (TRIVIAL, *NONTRIVIAL)


def check_class(x: str) -> Z2Class:
    if x not in Z2CLASSES:
        raise ValidationError(f"Unknown class {x!r}, expected one of {Z2CLASSES}.")
    return x


def add(a: Z2Class, b: Z2Class) -> Z2Class:
    return f"{int(a[0]) ^ int(b[0])}{int(a[1]) ^ int(b[1])}"


def class_key(x: Z2Class) -> tuple[int, int]:
    return (int(x[0]), int(x[1]))


class DeltaMap:
    """The sign of every class, total on all four of them."""
    __slots__ = ["signs"]

    def __init__(self, signs: "typing.Mapping[str, int]"):
        if set(signs) != set(Z2CLASSES):
            raise ValidationError(f"A sign map needs exactly the classes {Z2CLASSES}, got {sorted(signs)}.")
        for x, sign in signs.items():
            if sign not in (1, -1):
                raise ValidationError(f"Sign of {x} must be +1 or -1, got {sign}.")
        self.signs: dict[Z2Class, int] = {x: int(signs[x]) for x in Z2CLASSES}

    @classmethod
    def constant(cls, sign: "Sign" = 1) -> "DeltaMap":
        return cls({x: sign for x in Z2CLASSES})

    @classmethod
    def from_type(cls, sign: "Sign", negative: typing.Iterable[Z2Class] = ()) -> "DeltaMap":
        """Sign at the trivial class plus the nontrivial classes set to -1."""
        signs = {x: 1 for x in NONTRIVIAL}
        for x in negative:
            if check_class(x) == TRIVIAL:
                raise ValidationError("Use `sign` for the trivial class.")
            signs[x] = -1
        return cls({TRIVIAL: sign, **signs})

    def __getitem__(self, x: Z2Class) -> int:
        return self.signs[x]

    def flip(self, x: Z2Class) -> "DeltaMap":
        return DeltaMap({**self.signs, x: -self.signs[x]})

    def to_json(self) -> dict[str, int]:
        return dict(self.signs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DeltaMap):
            return NotImplemented
        return self.signs == other.signs

    def __hash__(self) -> int:
        return hash(tuple(self.signs.values()))

    def __repr__(self) -> str:
        return f"DeltaMap({self.signs})"


def all_delta_maps() -> list[DeltaMap]:
    """All 16 sign maps."""
    return [
        DeltaMap(dict(zip(Z2CLASSES, signs)))
        for signs in itertools.product((1, -1), repeat=len(Z2CLASSES))
    ]


class TorusType(typing.NamedTuple):
    sign: int
    k: int

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.k}"

    @classmethod
    def parse(cls, text: str) -> "TorusType":
        if len(text) != 2 or text[0] not in "+-" or text[1] not in "0123":
            raise ValidationError(f"Torus type must look like +2 or -0, got {text!r}.")
        return cls(1 if text[0] == "+" else -1, int(text[1]))


def type_of(delta: DeltaMap) -> TorusType:
    return TorusType(delta[TRIVIAL], sum(1 for x in NONTRIVIAL if delta[x] == -1))


class PullbackStructure(typing.NamedTuple):
    """Pullback along the double cover T0 -> T classified by iota0.

    The pullback is 2 to 1 onto a 2-element subgroup of H^1(T0). The
    trivial class is the image of {00, iota0}; the other image class is
    labelled by the smaller representative of its fiber. The two classes
    of T0 outside the image are listed in `outside`.

    """
    iota0: Z2Class
    image: frozenset[Z2Class]
    fibers: dict[Z2Class, tuple[Z2Class, Z2Class]]
    outside: tuple[Z2Class, ...]

    def pullback(self, kappa: Z2Class) -> Z2Class:
        for label, fiber in self.fibers.items():
            if kappa in fiber:
                return label
        raise ValidationError(f"Unknown class {kappa!r}.")


def pullback_structure(iota0: Z2Class) -> PullbackStructure:
    if check_class(iota0) == TRIVIAL:
        raise ValidationError("The classifying class of a connected double cover is nontrivial.")

    kappa = next(x for x in NONTRIVIAL if x != iota0)
    fiber = tuple(sorted((kappa, add(kappa, iota0)), key=class_key))
    label = fiber[0]
    fibers = {TRIVIAL: (TRIVIAL, iota0), label: (fiber[0], fiber[1])}
    outside = tuple(x for x in NONTRIVIAL if x != label)
    return PullbackStructure(iota0, frozenset(fibers), fibers, outside)


def propagate_double(delta: DeltaMap, iota0: Z2Class) -> DeltaMap:
    """Signs of the torus near the double cover classified by iota0.

    The trivial class gets -delta(iota0)*delta(00), the other image class
    the product of delta over its fiber, and both classes outside the
    image get +1.

    """
    structure = pullback_structure(iota0)
    signs = {x: 1 for x in structure.outside}
    signs[TRIVIAL] = -delta[iota0] * delta[TRIVIAL]
    for label, (a, b) in structure.fibers.items():
        if label != TRIVIAL:
            signs[label] = delta[a] * delta[b]
    return DeltaMap(signs)


def double_cover_class(cover: CoverSpec) -> Z2Class:
    """Class of a degree-2 cover of a torus given by its two generator images.

    Each bit is 1 iff that generator swaps the sheets.

    """
    if cover.degree != 2 or len(cover.generator_images) != 2:
        raise ValidationError("A double cover of a torus has degree 2 and two generator images.")
    return "".join("1" if image == (2, 1) else "0" for image in cover.generator_images)


def double_cover(iota0: Z2Class) -> CoverSpec:
    """The degree-2 cover classified by iota0, inverse to `double_cover_class`."""
    return CoverSpec.create(2, [(2, 1) if bit == "1" else (1, 2) for bit in check_class(iota0)])

import typing
from fractions import Fraction


class ValueRange(typing.NamedTuple):
    min: int
    max: int


class Ge(typing.NamedTuple):
    """Ge(x) implies that the value must be at least x."""
    ge: int


type Degree = typing.Annotated[int, Ge(0)]
type Exponent = typing.Annotated[int, Ge(0)]
type Parity = typing.Annotated[int, ValueRange(0, 1)]
type Sign = typing.Literal[1, -1]
type Multiplicity = typing.Annotated[int, Ge(1)]

# Exact coefficient field. Kept as an alias so signatures read as maths.
type Rational = Fraction

# Dense exact matrices are lists of rows.
type Matrix = list[list[Fraction]]

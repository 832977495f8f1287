"""Weights n(sign, k, d) of degree-d covers of a torus of type sign*k.

Three tables ship:

* `canonical`: eps at d=1, -k*sign at d=2, floor(k/2)*sign at d=4 and 0
  beyond. This is what `solve_weight_table` returns for the zero
  normalization and it balances every event.
* `definition`: the printed table, +k*sign at d=2. Every doubling that
  couples a degree-2 base with its degree-1 child is off by 2.
* `derived`: whatever the solver returns for a chosen normalization.

A table may also be read from a JSON file of the form
`{"weights": {"2": {"+0": 0, "+1": -1, ..., "-3": 3}, ...}}`.

"""
import json
import logging
import pathlib
import typing
from fractions import Fraction

from mtc.count import DEGREES, MAX_POWER
from mtc.count.cohomology import TorusType, all_delta_maps, NONTRIVIAL, propagate_double, type_of
from mtc.errors import InconsistentSystemError, ValidationError
from mtc.exactalg.linalg import solve

if typing.TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

logger = logging.getLogger(__name__)

type WeightKey = tuple[int, int, int]
type Relation = tuple["Mapping[WeightKey, int]", int]

SIGNS = (1, -1)
TORUS_TYPES = tuple(TorusType(sign, k) for sign in SIGNS for k in range(len(NONTRIVIAL) + 1))
TABLE_SOURCES = ("canonical", "definition", "derived")


class WeightTable:
    """Integer weight of every (sign, k, d); missing entries weigh 0."""
    __slots__ = ["name", "weights"]

    def __init__(self, weights: "Mapping[WeightKey, int]", name: str = "custom"):
        for (sign, k, d), value in weights.items():
            if sign not in SIGNS or not 0 <= k <= 3 or d < 1:
                raise ValidationError(f"Bad weight key {(sign, k, d)}.")
            if int(value) != value:
                raise ValidationError(f"Weight of {(sign, k, d)} is not an integer: {value}.")
        self.name = name
        self.weights: dict[WeightKey, int] = {key: int(v) for key, v in sorted(weights.items()) if v != 0}

    @classmethod
    def canonical(cls) -> "WeightTable":
        weights = {}
        for sign, k in TORUS_TYPES:
            weights[(sign, k, 1)] = sign
            weights[(sign, k, 2)] = -k * sign
            weights[(sign, k, 4)] = (k // 2) * sign
        return cls(weights, name="canonical")

    @classmethod
    def definition(cls) -> "WeightTable":
        weights = {}
        for sign, k in TORUS_TYPES:
            weights[(sign, k, 1)] = sign
            weights[(sign, k, 2)] = k * sign
            weights[(sign, k, 4)] = (k // 2) * sign
        return cls(weights, name="definition")

    def weight(self, t: TorusType, d: int) -> int:
        return self.weights.get((t.sign, t.k, d), 0)

    def __call__(self, t: TorusType, d: int) -> int:
        return self.weight(t, d)

    def with_value(self, t: TorusType, d: int, value: int) -> "WeightTable":
        """Copy of the table with a single entry replaced."""
        weights = dict(self.weights)
        weights[(t.sign, t.k, d)] = value
        return WeightTable(weights, name=f"{self.name}*")

    def column(self, sign: int, d: int) -> tuple[int, ...]:
        """Weights of k = 0..3 at one sign and degree."""
        return tuple(self.weight(TorusType(sign, k), d) for k in range(4))

    def is_antisymmetric(self) -> bool:
        return all(
            self.weight(TorusType(1, k), d) == -self.weight(TorusType(-1, k), d)
            for k in range(4)
            for d in DEGREES
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "weights": {
                str(d): {str(t): self.weight(t, d) for t in TORUS_TYPES}
                for d in DEGREES
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WeightTable":
        try:
            columns = obj["weights"]
            weights = {}
            for d, column in columns.items():
                for text, value in column.items():
                    t = TorusType.parse(text)
                    weights[(t.sign, t.k, int(d))] = value
        except (KeyError, TypeError, AttributeError, ValueError) as e:
            raise ValidationError(f"Malformed weight table: {e}") from e
        return cls(weights, name=obj.get("name", "custom"))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightTable):
            return NotImplemented
        return self.weights == other.weights

    def __hash__(self) -> int:
        return hash(tuple(self.weights.items()))

    def __repr__(self) -> str:
        return f"WeightTable(name={self.name!r})"


def weight(t: TorusType, d: int, table: WeightTable | None = None) -> int:
    """Weight of a degree-d cover of a torus of type t.

    Looks up the printed table unless another one is given.

    """
    if table is None:
        table = WeightTable.definition()
    return table.weight(t, d)


# -------------------------------------------------------------------
# Solver
# -------------------------------------------------------------------


def doubling_relations(max_power: int = MAX_POWER) -> "Iterable[tuple[dict[WeightKey, int], int]]":
    """Ledger of every doubling with the base at degree D and its child at D/2.

    On the side where the child lives the base has signs delta; across the
    wall the base has delta with iota0 flipped. The count balances iff

        n(base on child side, D) + n(child, D/2) - n(base on other side, D) = 0.

    Running delta over all 16 sign maps covers both sides of every
    diagram, so the twelve diagram families at every degree are included.

    """
    for j in range(1, max_power + 1):
        D = 2**j
        for delta in all_delta_maps():
            for iota0 in NONTRIVIAL:
                near = type_of(delta)
                far = type_of(delta.flip(iota0))
                child = type_of(propagate_double(delta, iota0))

                coeffs: dict[WeightKey, int] = {}
                rhs = 0
                for t, degree, c in ((near, D, 1), (child, D // 2, 1), (far, D, -1)):
                    if degree == 1:
                        # eps is fixed, move it to the right hand side.
                        rhs -= c * t.sign
                        continue
                    key = (t.sign, t.k, degree)
                    coeffs[key] = coeffs.get(key, 0) + c
                yield coeffs, rhs


def antisymmetry_relations(max_power: int = MAX_POWER) -> "Iterable[tuple[dict[WeightKey, int], int]]":
    for j in range(1, max_power + 1):
        for k in range(4):
            yield {(1, k, 2**j): 1, (-1, k, 2**j): 1}, 0


def solve_weight_table(
    max_power: int = MAX_POWER,
    normalization: "Mapping[int, int] | None" = None,
    extra_relations: "Iterable[Relation]" = (),
) -> WeightTable:
    """Solve the ledger relations for the weights.

    Arguments:
        max_power: Degrees 2, 4, ..., 2^max_power are unknowns. Degree 1
            is fixed to eps.
        normalization: Value of n(+, 0, D) per degree D; missing degrees
            are normalized to 0.
        extra_relations: Additional `(coefficients, rhs)` rows, e.g. to
            check that a contradictory system is reported.

    Raises InconsistentSystemError if the relations have no unique
    solution.

    """
    if max_power < 1:
        raise ValidationError(f"max_power must be at least 1, got {max_power}.")
    normalization = dict(normalization or {})
    degrees = [2**j for j in range(1, max_power + 1)]
    for D in normalization:
        if D not in degrees:
            raise ValidationError(f"Cannot normalize degree {D}, expected one of {degrees}.")

    unknowns = [(t.sign, t.k, D) for D in degrees for t in TORUS_TYPES]
    column = {key: i for i, key in enumerate(unknowns)}

    relations: list[tuple[typing.Mapping[WeightKey, int], int]] = [
        *antisymmetry_relations(max_power),
        *doubling_relations(max_power),
        *(({(1, 0, D): 1}, normalization.get(D, 0)) for D in degrees),
        *extra_relations,
    ]

    rows, rhs = [], []
    for coeffs, value in relations:
        row = [Fraction(0)] * len(unknowns)
        for key, c in coeffs.items():
            if key not in column:
                raise ValidationError(f"Relation mentions an unknown weight {key}.")
            row[column[key]] += c
        rows.append(row)
        rhs.append(Fraction(value))
    logger.debug("Weight system: %s relations in %s unknowns", len(rows), len(unknowns))

    try:
        solution = solve(rows, rhs, ncols=len(unknowns))
    except InconsistentSystemError as e:
        raise InconsistentSystemError(f"Weight relations up to degree {degrees[-1]}: {e}") from e

    weights: dict[WeightKey, int] = {(t.sign, t.k, 1): t.sign for t in TORUS_TYPES}
    for key, value in zip(unknowns, solution):
        assert value.denominator == 1, f"Non-integral weight {key} = {value}"
        weights[key] = int(value)
    logger.info("Solved weight table up to degree %s", degrees[-1])
    return WeightTable(weights, name="derived")


def load_table(source: str, normalization: "Mapping[int, int] | None" = None) -> WeightTable:
    """Table by name (canonical, definition, derived) or from a JSON file."""
    match source:
        case "canonical":
            return WeightTable.canonical()
        case "definition":
            return WeightTable.definition()
        case "derived":
            return solve_weight_table(normalization=normalization)

    path = pathlib.Path(source)
    if not path.is_file():
        raise ValidationError(f"Unknown weight table {source!r}: expected one of {TABLE_SOURCES} or a file.")
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: {e}") from e
    return WeightTable.from_json(obj)

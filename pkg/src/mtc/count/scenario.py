"""One-parameter families of embedded tori crossing walls.

A scenario lives on the parameter interval [0, 1]. Strands are tori that
exist on a sub-interval and carry a sign map; events happen at distinct
interior times and are the only places where strands appear, disappear
or change signs:

* birth-death: two strands with equal nontrivial signs and opposite
  trivial signs are born together (side "right") or die together (side
  "left").
* doubling: the base strand flips its sign at iota0 and a child strand,
  the torus near the double cover, exists on one side only. The cover
  must be a connected degree-2 cover of class iota0: a higher degree
  would force a kernel of dimension at least 2.

The selection gives the multiplicity of every (strand, degree) pair in
the counted set. It must be closed under the events: a birth-death pair
is selected identically and a doubling child is selected at degree d iff
its base is selected at degree 2d.

"""
import enum
import functools
import importlib.resources
import json
import typing
from fractions import Fraction

from mtc.count import DEGREES
from mtc.count.cohomology import (
    NONTRIVIAL,
    TRIVIAL,
    DeltaMap,
    check_class,
    double_cover,
    double_cover_class,
    propagate_double,
)
from mtc.errors import ScenarioError, ValidationError
from mtc.orbifold.cover import CoverSpec, kernel_dim_rule, pushforward_local_system

if typing.TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

    from mtc.count.cohomology import Z2Class

FIXTURE_KINDS = ("diagrams", "ledger")


class Side(enum.StrEnum):
    LEFT = "left"
    RIGHT = "right"


class Strand(typing.NamedTuple):
    id: str
    birth: Fraction
    death: Fraction
    delta0: DeltaMap

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "birth": str(self.birth),
            "death": str(self.death),
            "delta0": self.delta0.to_json(),
        }


class BirthDeath(typing.NamedTuple):
    t: Fraction
    plus: str
    minus: str
    side: Side

    @property
    def strands(self) -> tuple[str, str]:
        return (self.plus, self.minus)

    def to_json(self) -> dict:
        return {"kind": "birth_death", "t": str(self.t), "plus": self.plus, "minus": self.minus, "side": str(self.side)}


class Doubling(typing.NamedTuple):
    t: Fraction
    base: str
    iota0: "Z2Class"
    child: str
    side: Side
    # None stands for double_cover(iota0).
    cover: CoverSpec | None = None

    @property
    def strands(self) -> tuple[str, str]:
        return (self.base, self.child)

    def to_json(self) -> dict:
        obj = {
            "kind": "doubling",
            "t": str(self.t),
            "base": self.base,
            "iota0": self.iota0,
            "child": self.child,
            "side": str(self.side),
        }
        if self.cover is not None:
            obj["cover"] = {
                "degree": self.cover.degree,
                "generators": [list(image) for image in self.cover.generator_images],
            }
        return obj


type Event = BirthDeath | Doubling


def parse_time(value: object) -> Fraction:
    """Exact time from an integer or a "p/q" string."""
    if isinstance(value, bool) or not isinstance(value, (int, str, Fraction)):
        raise ValidationError(f"Times are integers or 'p/q' strings, got {value!r}.")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"Bad time {value!r}: {e}") from e


@functools.cache
def doubling_cover_class(cover: CoverSpec) -> "Z2Class":
    """Class of the cover a doubling runs along.

    Raises ScenarioError unless the cover is a connected double cover.

    """
    # The doubled torus keeps a one-dimensional kernel.
    forced = kernel_dim_rule(cover.degree, ker_nontrivial=True)
    if forced > 1:
        raise ScenarioError(
            f"a degree-{cover.degree} cover forces a kernel of dimension {forced}, doublings need degree 2."
        )
    if cover.degree != 2:
        raise ScenarioError(f"a degree-{cover.degree} cover is not a double cover.")
    try:
        pushforward_local_system(cover)
        return double_cover_class(cover)
    except ValidationError as e:
        raise ScenarioError(str(e)) from e


class Scenario:
    """An immutable, validated scenario.

    Arguments:
        strands: Every torus of the family.
        events: Birth-death and doubling events, in any order.
        selection: Multiplicity per (strand id, degree). Zero entries are
            dropped.
        degrees: Degrees a selection may use.

    Raises ScenarioError on any violation of the event rules or of the
    selection closure.

    """
    __slots__ = ["strands", "events", "selection", "degrees", "name"]

    def __init__(
        self,
        strands: "Iterable[Strand]",
        events: "Iterable[Event]",
        selection: "Mapping[tuple[str, int], int]",
        degrees: tuple[int, ...] = DEGREES,
        name: str = "",
    ):
        self.strands: dict[str, Strand] = {}
        for strand in strands:
            if strand.id in self.strands:
                raise ScenarioError(f"Duplicate strand {strand.id!r}.")
            self.strands[strand.id] = strand
        self.events: tuple[Event, ...] = tuple(sorted(events, key=lambda e: e.t))
        self.selection: dict[tuple[str, int], int] = {
            key: m for key, m in sorted(selection.items()) if m != 0
        }
        self.degrees = degrees
        self.name = name
        self._validate()

    # ---------------------------------------------------------------
    # Timeline
    # ---------------------------------------------------------------

    def event_times(self) -> list[Fraction]:
        return [e.t for e in self.events]

    def is_alive(self, strand_id: str, t: Fraction) -> bool:
        """Whether the strand exists at a time that is not an event time."""
        strand = self.strands[strand_id]
        return strand.birth <= t <= strand.death

    def delta_before(self, strand_id: str, t: Fraction) -> DeltaMap:
        """Signs of a strand just before t."""
        return self._delta(strand_id, t, inclusive=False)

    def delta_after(self, strand_id: str, t: Fraction) -> DeltaMap:
        """Signs of a strand just after t."""
        return self._delta(strand_id, t, inclusive=True)

    def delta_at(self, strand_id: str, t: Fraction) -> DeltaMap:
        if t in self.event_times():
            raise ValidationError(f"Signs are not defined at the event time {t}.")
        return self._delta(strand_id, t, inclusive=True)

    def _delta(self, strand_id: str, t: Fraction, inclusive: bool) -> DeltaMap:
        delta = self.strands[strand_id].delta0
        for e in self.events:
            if e.t > t or (e.t == t and not inclusive):
                break
            if isinstance(e, Doubling) and e.base == strand_id:
                delta = delta.flip(e.iota0)
        return delta

    def multiplicity(self, strand_id: str, degree: int) -> int:
        return self.selection.get((strand_id, degree), 0)

    # ---------------------------------------------------------------
    # Validation
    # ---------------------------------------------------------------

    def _validate(self) -> None:
        for strand in self.strands.values():
            if not 0 <= strand.birth < strand.death <= 1:
                raise ScenarioError(
                    f"Strand {strand.id!r} needs 0 <= birth < death <= 1, got [{strand.birth}, {strand.death}]."
                )

        times = self.event_times()
        if len(set(times)) != len(times):
            raise ScenarioError("Event times must be distinct.")
        if any(not 0 < t < 1 for t in times):
            raise ScenarioError("Event times must lie strictly between 0 and 1.")

        # Strand id -> the event that creates or ends it.
        created: dict[str, Event] = {}
        ended: dict[str, Event] = {}
        for e in self.events:
            for sid in e.strands:
                if sid not in self.strands:
                    raise ScenarioError(f"Event at t={e.t} refers to the unknown strand {sid!r}.")
            if e.strands[0] == e.strands[1]:
                raise ScenarioError(f"Event at t={e.t} uses the strand {e.strands[0]!r} twice.")

            if isinstance(e, BirthDeath):
                self._check_birth_death(e, created, ended)
            else:
                self._check_doubling(e, created, ended)

        for strand in self.strands.values():
            if strand.birth != 0 and strand.id not in created:
                raise ScenarioError(f"Strand {strand.id!r} is born at {strand.birth} without an event.")
            if strand.death != 1 and strand.id not in ended:
                raise ScenarioError(f"Strand {strand.id!r} dies at {strand.death} without an event.")

        self._check_selection()

    def _claim(self, table: dict[str, "Event"], sid: str, e: "Event", what: str) -> None:
        if sid in table:
            raise ScenarioError(f"Strand {sid!r} {what} by two events (t={table[sid].t} and t={e.t}).")
        table[sid] = e

    def _check_birth_death(self, e: BirthDeath, created: dict, ended: dict) -> None:
        plus, minus = self.strands[e.plus], self.strands[e.minus]
        if e.side == Side.RIGHT:
            if plus.birth != e.t or minus.birth != e.t:
                raise ScenarioError(f"Birth at t={e.t}: both strands must be born at {e.t}.")
            for sid in e.strands:
                self._claim(created, sid, e, "is created")
            delta_plus, delta_minus = self.delta_after(e.plus, e.t), self.delta_after(e.minus, e.t)
        else:
            if plus.death != e.t or minus.death != e.t:
                raise ScenarioError(f"Death at t={e.t}: both strands must die at {e.t}.")
            for sid in e.strands:
                self._claim(ended, sid, e, "is ended")
            delta_plus, delta_minus = self.delta_before(e.plus, e.t), self.delta_before(e.minus, e.t)

        if any(delta_plus[x] != delta_minus[x] for x in NONTRIVIAL):
            raise ScenarioError(f"Birth-death pair at t={e.t} must share the signs of the nontrivial classes.")
        if (delta_plus[TRIVIAL], delta_minus[TRIVIAL]) != (1, -1):
            raise ScenarioError(f"Birth-death pair at t={e.t} must have trivial signs +1 ({e.plus}) and -1 ({e.minus}).")

    def _check_doubling(self, e: Doubling, created: dict, ended: dict) -> None:
        cover = e.cover if e.cover is not None else double_cover(e.iota0)
        try:
            iota0 = doubling_cover_class(cover)
        except ScenarioError as exc:
            raise ScenarioError(f"Doubling at t={e.t}: {exc}") from exc
        if iota0 != e.iota0:
            raise ScenarioError(f"Doubling at t={e.t}: the cover has class {iota0}, expected iota0 {e.iota0}.")

        base, child = self.strands[e.base], self.strands[e.child]
        if not base.birth < e.t < base.death:
            raise ScenarioError(f"Doubling at t={e.t}: base {e.base!r} must exist on both sides.")

        if e.side == Side.LEFT:
            if child.death != e.t:
                raise ScenarioError(f"Doubling at t={e.t}: left child {e.child!r} must die at {e.t}.")
            self._claim(ended, e.child, e, "is ended")
            base_delta, child_delta = self.delta_before(e.base, e.t), self.delta_before(e.child, e.t)
        else:
            if child.birth != e.t:
                raise ScenarioError(f"Doubling at t={e.t}: right child {e.child!r} must be born at {e.t}.")
            self._claim(created, e.child, e, "is created")
            base_delta, child_delta = self.delta_after(e.base, e.t), self.delta_after(e.child, e.t)

        expected = propagate_double(base_delta, e.iota0)
        if child_delta != expected:
            raise ScenarioError(
                f"Doubling at t={e.t}: child {e.child!r} has signs {child_delta.to_json()}, "
                f"expected {expected.to_json()}."
            )

    def _check_selection(self) -> None:
        for (sid, d), m in self.selection.items():
            if sid not in self.strands:
                raise ScenarioError(f"Selection refers to the unknown strand {sid!r}.")
            if d not in self.degrees:
                raise ScenarioError(f"Selection degree {d} is not one of {self.degrees}.")
            if m < 0:
                raise ScenarioError(f"Multiplicity of ({sid!r}, {d}) is negative.")

        for e in self.events:
            if isinstance(e, BirthDeath):
                for d in self.degrees:
                    if self.multiplicity(e.plus, d) != self.multiplicity(e.minus, d):
                        raise ScenarioError(
                            f"Birth-death pair at t={e.t} is not selected identically at degree {d}."
                        )
                continue

            for d in self.degrees:
                doubled = self.multiplicity(e.base, 2 * d) if 2 * d in self.degrees else 0
                if self.multiplicity(e.child, d) != doubled:
                    raise ScenarioError(
                        f"Doubling at t={e.t}: child {e.child!r} at degree {d} has multiplicity "
                        f"{self.multiplicity(e.child, d)} but base {e.base!r} at degree {2 * d} has {doubled}."
                    )

    # ---------------------------------------------------------------
    # JSON
    # ---------------------------------------------------------------

    @classmethod
    def from_json(cls, obj: dict, name: str = "") -> "Scenario":
        try:
            strands = [
                Strand(
                    str(s["id"]),
                    parse_time(s.get("birth", 0)),
                    parse_time(s.get("death", 1)),
                    DeltaMap(s["delta0"]),
                )
                for s in obj["strands"]
            ]
            events: list[Event] = []
            for e in obj.get("events", []):
                kind = e["kind"]
                t = parse_time(e["t"])
                if kind == "birth_death":
                    events.append(BirthDeath(t, str(e["plus"]), str(e["minus"]), Side(e["side"])))
                elif kind == "doubling":
                    iota0 = check_class(e["iota0"])
                    if iota0 == TRIVIAL:
                        raise ValidationError(f"Doubling at t={t} needs a nontrivial iota0.")
                    cover = None
                    if "cover" in e:
                        cover = CoverSpec.create(int(e["cover"]["degree"]), e["cover"]["generators"])
                    events.append(Doubling(t, str(e["base"]), iota0, str(e["child"]), Side(e["side"]), cover))
                else:
                    raise ValidationError(f"Unknown event kind {kind!r}.")

            selection: dict[tuple[str, int], int] = {}
            for entry in obj.get("selection", []):
                key = (str(entry["strand"]), int(entry["degree"]))
                if key in selection:
                    raise ValidationError(f"Selection lists {key} twice.")
                selection[key] = int(entry.get("multiplicity", 1))
        except (KeyError, TypeError) as e:
            raise ValidationError(f"Malformed scenario: missing or bad field {e}") from e
        except ValueError as e:
            if isinstance(e, ValidationError):
                raise
            raise ValidationError(f"Malformed scenario: {e}") from e

        return cls(strands, events, selection, name=name or obj.get("name", ""))

    def to_json(self) -> dict:
        obj = {
            "strands": [s.to_json() for s in self.strands.values()],
            "events": [e.to_json() for e in self.events],
            "selection": [
                {"strand": sid, "degree": d, "multiplicity": m}
                for (sid, d), m in self.selection.items()
            ],
        }
        if self.name:
            obj["name"] = self.name
        return obj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return (self.strands, self.events, self.selection) == (other.strands, other.events, other.selection)

    def __repr__(self) -> str:
        return f"Scenario(name={self.name!r}, strands={len(self.strands)}, events={len(self.events)})"


def load_scenario(path: str) -> Scenario:
    with open(path) as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f"{path}: {e}") from e
    return Scenario.from_json(obj)


def fixture_names(kind: str) -> list[str]:
    if kind not in FIXTURE_KINDS:
        raise ValidationError(f"Unknown fixture kind {kind!r}, expected one of {FIXTURE_KINDS}.")
    folder = importlib.resources.files("mtc").joinpath("data", "scenarios", kind)
    return sorted(p.name.removesuffix(".json") for p in folder.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> Scenario:
    """Load a shipped scenario, e.g. "diagrams/a" or "ledger/plus_chain"."""
    kind, _, stem = name.partition("/")
    if stem not in fixture_names(kind):
        raise ValidationError(f"No shipped scenario {name!r}.")
    resource = importlib.resources.files("mtc").joinpath("data", "scenarios", kind, f"{stem}.json")
    return Scenario.from_json(json.loads(resource.read_text()), name=name)

import logging
import random
import typing
from fractions import Fraction

from mtc.count import DEGREES, MAX_EVENTS, MAX_STRANDS, TIME_GRID
from mtc.count.cohomology import NONTRIVIAL, TRIVIAL, DeltaMap, propagate_double, type_of
from mtc.count.scenario import BirthDeath, Doubling, Scenario, Side, Strand
from mtc.count.weights import WeightTable
from mtc.errors import ValidationError

if typing.TYPE_CHECKING:
    from mtc.count.scenario import Event

logger = logging.getLogger(__name__)


def evaluate_count(s: Scenario, t: Fraction, table: WeightTable) -> int:
    """Weighted count of the selected covers alive at time t.

    Every event balances under `WeightTable.canonical()`. The printed
    table, which `weight()` uses by default, does not balance doublings
    that couple degree 2 with degree 1.

    Raises ValidationError if t is an event time or outside [0, 1].

    """
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValidationError(f"Time {t} is outside [0, 1].")
    if t in s.event_times():
        raise ValidationError(f"The count is not defined at the event time {t}.")

    total = 0
    for (sid, d), m in s.selection.items():
        if s.is_alive(sid, t):
            total += m * table.weight(type_of(s.delta_at(sid, t)), d)
    return total


class LedgerEntry(typing.NamedTuple):
    strand: str
    degree: int
    before: int
    after: int

    def to_dict(self) -> dict:
        return {"strand": self.strand, "degree": self.degree, "before": self.before, "after": self.after}


def ledger(s: Scenario, event: "int | Event", table: WeightTable) -> list[LedgerEntry]:
    """Contributions of the event's strands on either side of it.

    A strand that does not exist on one side contributes 0 there.

    """
    if isinstance(event, int):
        event = s.events[event]

    entries = []
    for sid in event.strands:
        strand = s.strands[sid]
        for d in s.degrees:
            m = s.multiplicity(sid, d)
            if m == 0:
                continue
            before = after = 0
            if strand.birth < event.t:
                before = m * table.weight(type_of(s.delta_before(sid, event.t)), d)
            if strand.death > event.t:
                after = m * table.weight(type_of(s.delta_after(sid, event.t)), d)
            entries.append(LedgerEntry(sid, d, before, after))
    return entries


class Interval(typing.NamedTuple):
    t_lo: Fraction
    t_hi: Fraction
    count: int

    def to_dict(self) -> dict:
        return {"t_lo": str(self.t_lo), "t_hi": str(self.t_hi), "count": self.count}


class Violation(typing.NamedTuple):
    index: int
    event: "Event"
    before: int
    after: int
    ledger: list[LedgerEntry]

    @property
    def imbalance(self) -> int:
        return self.after - self.before

    def to_dict(self) -> dict:
        return {
            "event": self.event.to_json(),
            "index": self.index,
            "before": self.before,
            "after": self.after,
            "imbalance": self.imbalance,
            "ledger": [entry.to_dict() for entry in self.ledger],
        }


class InvarianceReport(typing.NamedTuple):
    table: str
    intervals: list[Interval]
    first_violation: Violation | None

    @property
    def passed(self) -> bool:
        return self.first_violation is None

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "intervals": [i.to_dict() for i in self.intervals],
            "pass": self.passed,
            "first_violation": self.first_violation.to_dict() if self.first_violation else None,
        }


def check_invariance(s: Scenario, table: WeightTable) -> InvarianceReport:
    """Evaluate the count on every interval between consecutive events."""
    bounds = [Fraction(0), *s.event_times(), Fraction(1)]
    intervals = [
        Interval(lo, hi, evaluate_count(s, (lo + hi) / 2, table))
        for lo, hi in zip(bounds, bounds[1:])
    ]

    violation = None
    for i, (left, right) in enumerate(zip(intervals, intervals[1:])):
        if left.count != right.count:
            violation = Violation(i, s.events[i], left.count, right.count, ledger(s, i, table))
            logger.info(
                "Count of %s jumps by %s at t=%s (%s table)",
                s.name or "scenario", violation.imbalance, violation.event.t, table.name,
            )
            break
    return InvarianceReport(table.name, intervals, violation)


# -------------------------------------------------------------------
# Random scenarios
# -------------------------------------------------------------------


def _random_delta(rng: random.Random, trivial: int | None = None) -> DeltaMap:
    signs = {x: rng.choice((1, -1)) for x in NONTRIVIAL}
    signs[TRIVIAL] = rng.choice((1, -1)) if trivial is None else trivial
    return DeltaMap(signs)


class _Builder:
    """Mutable state of `random_scenario`."""

    def __init__(self, rng: random.Random, max_strands: int):
        self.rng = rng
        self.max_strands = max_strands
        self.strands: dict[str, dict] = {}
        # Current signs of strands that are still alive.
        self.alive: dict[str, DeltaMap] = {}
        self.events: list[Event] = []

    def add_strand(self, delta0: DeltaMap, birth: Fraction, death: Fraction = Fraction(1)) -> str:
        sid = f"s{len(self.strands)}"
        self.strands[sid] = {"birth": birth, "death": death, "delta0": delta0}
        return sid

    def slots(self) -> int:
        return self.max_strands - len(self.strands)

    def pair_signs(self) -> tuple[DeltaMap, DeltaMap]:
        plus = _random_delta(self.rng, trivial=1)
        return plus, DeltaMap({**plus.signs, TRIVIAL: -1})

    def birth(self, t: Fraction) -> None:
        plus, minus = self.pair_signs()
        p, m = self.add_strand(plus, t), self.add_strand(minus, t)
        self.alive[p], self.alive[m] = plus, minus
        self.events.append(BirthDeath(t, p, m, Side.RIGHT))

    def death(self, t: Fraction) -> None:
        pairs = [
            (p, m)
            for p, dp in self.alive.items()
            for m, dm in self.alive.items()
            if dp[TRIVIAL] == 1 and dm[TRIVIAL] == -1 and all(dp[x] == dm[x] for x in NONTRIVIAL)
        ]
        if pairs:
            p, m = self.rng.choice(pairs)
        else:
            # A fresh pair that lived since the start.
            plus, minus = self.pair_signs()
            p, m = self.add_strand(plus, Fraction(0), t), self.add_strand(minus, Fraction(0), t)
            self.alive[p], self.alive[m] = plus, minus
        self.strands[p]["death"] = self.strands[m]["death"] = t
        del self.alive[p], self.alive[m]
        self.events.append(BirthDeath(t, p, m, Side.LEFT))

    def double(self, t: Fraction, side: Side) -> None:
        base = self.rng.choice(sorted(self.alive))
        iota0 = self.rng.choice(NONTRIVIAL)
        before = self.alive[base]
        after = before.flip(iota0)
        self.alive[base] = after

        if side == Side.RIGHT:
            child_delta = propagate_double(after, iota0)
            child = self.add_strand(child_delta, t)
            self.alive[child] = child_delta
        else:
            child = self.add_strand(propagate_double(before, iota0), Fraction(0), t)
        self.events.append(Doubling(t, base, iota0, child, side))

    def selection(self, degrees: tuple[int, ...]) -> dict[tuple[str, int], int]:
        """Random multiplicities that are constant on every closure class."""
        parent: dict[tuple[str, int], tuple[str, int]] = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            parent[find(a)] = find(b)

        forced_zero = set()
        for e in self.events:
            if isinstance(e, BirthDeath):
                for d in degrees:
                    union((e.plus, d), (e.minus, d))
            else:
                for d in degrees:
                    if 2 * d in degrees:
                        union((e.child, d), (e.base, 2 * d))
                    else:
                        forced_zero.add((e.child, d))

        nodes = [(sid, d) for sid in self.strands for d in degrees]
        zero_roots = {find(x) for x in forced_zero}
        multiplicity = {}
        for root in sorted({find(x) for x in nodes}):
            multiplicity[root] = 0 if root in zero_roots else self.rng.choice((0, 0, 1, 2, 3))
        return {x: multiplicity[find(x)] for x in nodes if multiplicity[find(x)]}


def random_scenario(
    rng: random.Random,
    max_events: int = MAX_EVENTS,
    max_strands: int = MAX_STRANDS,
    degrees: tuple[int, ...] = DEGREES,
) -> Scenario:
    """A legal scenario with a closed random selection.

    Uses every event kind on both sides: births, deaths, and doublings
    whose child appears after the wall or disappears at it.

    """
    if max_events < 1 or max_strands < 3:
        raise ValidationError("A random scenario needs at least one event and three strands.")

    builder = _Builder(rng, max_strands)
    for _ in range(rng.randint(1, min(3, max_strands - 2))):
        sid = builder.add_strand(_random_delta(rng), Fraction(0))
        builder.alive[sid] = builder.strands[sid]["delta0"]

    n_events = rng.randint(1, max_events)
    times = sorted(Fraction(i, TIME_GRID) for i in rng.sample(range(1, TIME_GRID), n_events))
    for t in times:
        kinds = []
        if builder.slots() >= 2:
            kinds += ["birth", "death"]
        if builder.slots() >= 1 and builder.alive:
            kinds += ["double_right", "double_left"]
        if not kinds:
            break
        match rng.choice(kinds):
            case "birth":
                builder.birth(t)
            case "death":
                builder.death(t)
            case "double_right":
                builder.double(t, Side.RIGHT)
            case "double_left":
                builder.double(t, Side.LEFT)

    strands = [Strand(sid, s["birth"], s["death"], s["delta0"]) for sid, s in builder.strands.items()]
    scenario = Scenario(strands, builder.events, builder.selection(degrees), degrees=degrees)
    logger.debug("Random scenario with %s strands and %s events", len(strands), len(builder.events))
    return scenario

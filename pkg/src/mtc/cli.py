"""Command line entry point.

Every command prints one JSON report on stdout:

    {"command": ..., "inputs_digest": ..., "outcome": "pass" | "fail", "payload": {...}}

Exit status is 0 on pass, 1 on fail and 2 on bad input.

"""
import argparse
import hashlib
import json
import logging
import pathlib
import random
import re
import sys
import typing

from mtc import resolve_seed
from mtc.count.cohomology import TorusType
from mtc.count.scenario import Scenario, load_fixture
from mtc.count.simulate import check_invariance, random_scenario
from mtc.count.weights import TABLE_SOURCES, WeightTable, load_table, solve_weight_table
from mtc.errors import MtcError, ValidationError, WendlBoundError
from mtc.exactalg import harmonic_basis
from mtc.fredholm import StratumQuery, codim_stratum_bound
from mtc.orbifold import (
    Convention,
    CyclicRep,
    LocalSystem,
    MultiplicityFunction,
    index_via_riemann_roch,
    local_system_degree,
    twisted_index,
)
from mtc.petri_wendl import SAMPLES_PER_DEGREE, min_jet_degree
from mtc.petri_wendl.petri import petri_kernel_basis, sample_kernel_elements
from mtc.petri_wendl.series import q_independence_check, series_report
from mtc.petri_wendl.wendl import Pairing, verify_wendl_bound

if typing.TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

# "+1:2=0" sets the weight of type +1 at degree 2 to 0.
WEIGHT_ENTRY = re.compile(r"^([+-][0-3]):(\d+)=(-?\d+)$")


class RunReport(typing.NamedTuple):
    command: str
    inputs_digest: str
    outcome: str
    payload: dict

    @classmethod
    def create(cls, command: str, inputs: dict, passed: bool, payload: dict) -> "RunReport":
        return cls(command, digest(inputs), "pass" if passed else "fail", payload)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "outcome": self.outcome,
            "payload": self.payload,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def digest(inputs: dict) -> str:
    canonical = json.dumps(inputs, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def read_json(path: str) -> typing.Any:
    try:
        return json.loads(pathlib.Path(path).read_text())
    except OSError as e:
        raise ValidationError(f"Cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: {e}") from e


# -------------------------------------------------------------------
# Argument types
# -------------------------------------------------------------------


def non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}") from None


def weight_entry(text: str) -> tuple[TorusType, int, int]:
    match = WEIGHT_ENTRY.match(text)
    if match is None:
        raise argparse.ArgumentTypeError(f"expected TYPE:DEGREE=VALUE such as +1:2=0, got {text!r}")
    t, d, value = match.groups()
    return TorusType.parse(t), int(d), int(value)


# -------------------------------------------------------------------
# Commands
# -------------------------------------------------------------------


def cmd_harmonic(args: argparse.Namespace) -> RunReport:
    basis = harmonic_basis(args.degree)
    payload = {"degree": args.degree, "basis": [str(p) for p in basis]}
    return RunReport.create("harmonic", {"degree": args.degree}, True, payload)


def cmd_verify_wendl(args: argparse.Namespace) -> RunReport:
    d = args.degree
    lowest = min_jet_degree(d)
    l_values = args.l or [lowest, lowest + 2, lowest + 4]
    seed = resolve_seed(args.seed)

    basis = petri_kernel_basis(d)
    if not basis:
        raise ValidationError(f"The Petri kernel in degree {d} is trivial.")
    samples = sample_kernel_elements(d, args.samples, random.Random(seed)) if args.samples else []

    elements = []
    for source, B in [*(("basis", B) for B in basis), *(("sample", B) for B in samples)]:
        try:
            report = verify_wendl_bound(B, l_values, args.pairing)
        except WendlBoundError as e:
            report = e.report
        elements.append({"source": source, "pass": report.passed, "basis_size": len(basis), **report.to_dict()})
        logger.info("%s %s: %s", source, B, "pass" if report.passed else "fail")

    inputs = {"degree": d, "l": l_values, "pairing": str(args.pairing), "samples": args.samples, "seed": seed}
    payload = {
        "degree": d,
        "basis_size": len(basis),
        "pairing": str(args.pairing),
        "l": l_values,
        "elements": elements,
    }
    return RunReport.create("verify-wendl", inputs, all(e["pass"] for e in elements), payload)


def cmd_series(args: argparse.Namespace) -> RunReport:
    d = args.degree
    basis = petri_kernel_basis(d)
    reports = [series_report(B) for B in basis]
    independent = q_independence_check(d, merge_mirror=True)
    payload = {
        "degree": d,
        "elements": reports,
        "q_independent_merged": independent,
        "q_independent_raw": q_independence_check(d),
    }
    passed = independent and all(report["passed"] for report in reports)
    return RunReport.create("series", {"degree": d}, passed, payload)


def parse_index_spec(spec: dict) -> tuple[int, LocalSystem, Convention]:
    """The `index` input: {rank_normal, convention, points: [{id, order, weights}]}.

    A point may also give `multiplicity`, which must equal its order.

    """
    try:
        rank_normal = int(spec["rank_normal"])
        convention = Convention(spec.get("convention", Convention.PROOF))
        monodromy = {}
        multiplicity = {}
        for point in spec.get("points", []):
            pid = str(point["id"])
            if pid in monodromy:
                raise ValidationError(f"Point {pid!r} is listed twice.")
            monodromy[pid] = CyclicRep.create(int(point["order"]), [int(w) for w in point["weights"]])
            if "multiplicity" in point:
                multiplicity[pid] = int(point["multiplicity"])
    except (KeyError, TypeError) as e:
        raise ValidationError(f"Malformed index spec: missing or bad field {e}") from e
    except ValueError as e:
        if isinstance(e, ValidationError):
            raise
        raise ValidationError(f"Malformed index spec: {e}") from e

    ranks = {rep.rank for rep in monodromy.values()}
    if len(ranks) > 1:
        raise ValidationError(f"Every point needs the same number of weights, got {sorted(ranks)}.")
    rank = ranks.pop() if ranks else 1
    if multiplicity:
        orders = {pid: multiplicity.get(pid, rep.order) for pid, rep in monodromy.items()}
        return rank_normal, LocalSystem(rank, monodromy, MultiplicityFunction(orders)), convention
    return rank_normal, LocalSystem(rank, monodromy), convention


def cmd_index(args: argparse.Namespace) -> RunReport:
    spec = read_json(args.json)
    if args.convention is not None:
        spec["convention"] = str(args.convention)
    rank_normal, ls, convention = parse_index_spec(spec)
    index = twisted_index(rank_normal, ls, convention)
    via_riemann_roch = index_via_riemann_roch(rank_normal, ls)
    consistent = via_riemann_roch == twisted_index(rank_normal, ls, Convention.PROOF)

    payload = {
        "index": str(index),
        "convention": str(convention),
        "degree": str(local_system_degree(ls)),
        "per_point_quotients": ls.quotients(),
        "riemann_roch_index": str(via_riemann_roch),
    }
    return RunReport.create("index", {"spec": spec}, consistent, payload)


def cmd_codim(args: argparse.Namespace) -> RunReport:
    """Input: {ambient, components: [[k, d] or [k, d, c]], quotient_dims: [...]}."""
    spec = read_json(args.json)
    try:
        quotient_dims = [int(q) for q in spec.get("quotient_dims", [])]
        query = StratumQuery.create(spec["components"], ambient=int(spec["ambient"]), s=len(quotient_dims))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ValidationError):
            raise
        raise ValidationError(f"Malformed codim spec: {e}") from e

    result = codim_stratum_bound(query, quotient_dims)
    payload = {
        "codim": result.codim,
        "bound": str(result.bound),
        "top_stratum": result.top_stratum,
        "index": result.index,
        "s": query.s,
    }
    return RunReport.create("codim", {"spec": spec}, result.codim >= result.bound, payload)


def _table(args: argparse.Namespace) -> WeightTable:
    table = load_table(args.table)
    for t, d, value in args.override or []:
        table = table.with_value(t, d, value)
    return table


def cmd_simulate(args: argparse.Namespace) -> RunReport:
    table = _table(args)
    inputs = {"table": table.to_json()}

    if args.random is not None:
        seed = resolve_seed(args.seed)
        rng = random.Random(seed)
        failures = []
        for i in range(args.random):
            s = random_scenario(rng)
            report = check_invariance(s, table)
            if not report.passed:
                failures.append({"index": i, "scenario": s.to_json(), "report": report.to_dict()})
        inputs |= {"random": args.random, "seed": seed}
        payload = {"scenarios": args.random, "failures": failures, "pass": not failures}
        logger.info("%s of %s random scenarios fail", len(failures), args.random)
        return RunReport.create("simulate", inputs, not failures, payload)

    if args.fixture:
        s = load_fixture(args.fixture)
    elif args.json:
        s = Scenario.from_json(read_json(args.json))
    else:
        raise ValidationError("simulate needs --json, --fixture or --random.")

    report = check_invariance(s, table)
    inputs |= {"scenario": s.to_json()}
    payload = {"scenario": s.name, **report.to_dict()}
    return RunReport.create("simulate", inputs, report.passed, payload)


def cmd_solve_weights(args: argparse.Namespace) -> RunReport:
    normalization = {2**j: value for j, value in enumerate([args.n2, args.n4, args.n8, args.n16], 1)}
    normalization = {d: v for d, v in normalization.items() if d <= 2**args.max_power}
    extra = [({(t.sign, t.k, d): 1}, value) for t, d, value in args.extra_relation or []]

    table = solve_weight_table(args.max_power, normalization, extra)
    definition = WeightTable.definition()
    d2 = {str(t): table(t, 2) for t in (TorusType(1, k) for k in range(4))}
    negated = all(table(TorusType(1, k), 2) == -definition(TorusType(1, k), 2) for k in range(4))

    inputs = {
        "max_power": args.max_power,
        "normalization": {str(d): v for d, v in normalization.items()},
        "extra_relations": [[str(t), d, v] for t, d, v in args.extra_relation or []],
    }
    payload = {
        **table.to_json(),
        "antisymmetric": table.is_antisymmetric(),
        "degree_two": d2,
        "degree_two_is_printed_negated": negated,
    }
    return RunReport.create("solve-weights", inputs, table.is_antisymmetric(), payload)


# -------------------------------------------------------------------
# Parser
# -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs")
    common.add_argument("--seed", type=non_negative_int, help="randomizer seed (overrides MTC_SEED)")

    parser = argparse.ArgumentParser(prog="mtc", description="Exact checks of the minimal torus counting calculus.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("harmonic", parents=[common], help="basis of harmonic polynomials of one degree")
    p.add_argument("--degree", type=non_negative_int, required=True)
    p.set_defaults(func=cmd_harmonic)

    p = sub.add_parser("verify-wendl", parents=[common], help="rank bound on the Petri kernel")
    p.add_argument("--degree", type=non_negative_int, required=True)
    p.add_argument("--l", type=int_list, help="comma separated jet degrees, each at least 10d+6")
    p.add_argument("--pairing", type=Pairing, choices=list(Pairing), default=Pairing.SPLIT)
    p.add_argument("--samples", type=non_negative_int, default=SAMPLES_PER_DEGREE)
    p.set_defaults(func=cmd_verify_wendl)

    p = sub.add_parser("series", parents=[common], help="coefficient series of the Petri kernel")
    p.add_argument("--degree", type=non_negative_int, required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("index", parents=[common], help="twisted index of a local system")
    p.add_argument("--json", required=True, help="index spec file")
    p.add_argument("--convention", type=Convention, choices=list(Convention))
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("codim", parents=[common], help="codimension of a stratum and its bound")
    p.add_argument("--json", required=True, help="stratum spec file")
    p.set_defaults(func=cmd_codim)

    p = sub.add_parser("simulate", parents=[common], help="check count invariance of scenarios")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--json", help="scenario file")
    source.add_argument("--fixture", help="shipped scenario, e.g. diagrams/a")
    source.add_argument("--random", type=non_negative_int, metavar="N", help="N seeded random scenarios")
    p.add_argument("--table", default="canonical", help=f"one of {', '.join(TABLE_SOURCES)} or a JSON file")
    p.add_argument("--override", type=weight_entry, action="append", metavar="TYPE:D=VALUE")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("solve-weights", parents=[common], help="solve the weight relations")
    p.add_argument("--max-power", type=non_negative_int, default=4)
    for d in (2, 4, 8, 16):
        p.add_argument(f"--n{d}", type=int, default=0, help=f"normalization of n(+0, {d})")
    p.add_argument("--extra-relation", type=weight_entry, action="append", metavar="TYPE:D=VALUE")
    p.set_defaults(func=cmd_solve_weights)

    return parser


def setup_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: "Sequence[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    try:
        report = args.func(args)
    except MtcError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    print(report.to_json())
    return EXIT_PASS if report.outcome == "pass" else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())

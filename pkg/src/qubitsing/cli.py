"""Command-line entry point: ``qubitsing <command> ...``.

Exit codes: 0 success, 1 usage or input error, 2 unresolved verdicts present,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .catalog import catalog_instantiate, families, table_rows
from .deformation import verify_lemma31, verify_prop32
from .invariants import (CalibrationReport, RouteDisagreement, blmd, calibrate,
                         default_calibration, gabcd_state, levay_and_delta4, load_calibration,
                         quartic_coefficients, quartic_discriminant, save_calibration)
from .scalar import ONE, Scalar, ScalarParseError
from .singularity import DEFAULT_CUTOFF, classify_section
from .states import (Chart, FourQubitState, GroupElement, ZeroStateError, apply_group,
                     random_rational, read_state, sample_tangent_hyperplane)
from .tables import run_table, summarize

EXIT_OK, EXIT_USAGE, EXIT_UNRESOLVED, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class CommandResult:
    command: list[str]
    seed: int
    fingerprint: str
    payload: dict = field(default_factory=dict)
    text: str = ""
    exit_code: int = EXIT_OK

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps({"command": self.command, "seed": self.seed,
                               "calibration": self.fingerprint, "exit_code": self.exit_code,
                               "result": self.payload}, indent=2, sort_keys=True)
        return self.text


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw")
    common.add_argument("--calibration", type=Path, help="calibration JSON (computed if absent)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="qubitsing", description="Singular hyperplane sections of four qubits.",
                parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("invariants", parents=[common], help="SLOCC invariants of a state")
    s.add_argument("statefile", type=Path)

    s = sub.add_parser("classify", parents=[common], help="classify a hyperplane section")
    s.add_argument("statefile", type=Path)
    s.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    s.add_argument("--chart", type=int, help="restrict to one chart (0-15)")

    s = sub.add_parser("tables", parents=[common], help="reproduce a classification table")
    s.add_argument("table", type=int, choices=(2, 3, 4, 5))
    s.add_argument("--draws", type=int, default=3)
    s.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    s.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=("lemma31", "prop32", "identity", "gabcd-quartic", "invariance"))
    s.add_argument("--samples", type=int)

    s = sub.add_parser("explore", parents=[common], help="verdict histogram on tangent hyperplanes")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    s.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("calibrate", parents=[common], help="run the convention calibration")
    s.add_argument("--output", type=Path, help="write the calibration report here")
    return p


def _calibration(args) -> CalibrationReport:
    path = args.calibration
    if path is not None and path.exists() and args.command != "calibrate":
        return load_calibration(path)
    return default_calibration()


def _state(path: Path) -> FourQubitState:
    try:
        return read_state(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such state file: {path}") from exc
    except (ValueError, ScalarParseError, ZeroStateError) as exc:
        raise UsageError(f"malformed state file {path}: {exc}") from exc


# -- commands ---------------------------------------------------------------------

def cmd_invariants(args, cal, res: CommandResult) -> None:
    inv = levay_and_delta4(_state(args.statefile), cal)
    res.payload = inv.to_json()
    res.text = "\n".join(f"{k:>6} = {v}" for k, v in res.payload.items())


def cmd_classify(args, cal, res: CommandResult) -> None:
    charts = None
    if args.chart is not None:
        try:
            charts = [Chart.from_index(args.chart)]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    report = classify_section(_state(args.statefile), args.cutoff, charts)
    res.payload = report.to_json()
    lines = [f"verdict: {report.verdict}"]
    for pt in report.points:
        r = pt.report
        mu = r.milnor if r.milnor is not None else f">= {len(r.milnor_dims)}"
        lines.append(f"  {pt.label}: {r.verdict} (mu={mu}, corank={r.corank}) in chart {pt.chart.describe()}")
    for c, d in report.nonisolated_charts:
        lines.append(f"  chart {c.describe()}: singular locus of dimension {d}")
    lines.extend(f"  {u}" for u in report.unresolved)
    res.text = "\n".join(lines)
    if report.verdict == "Unresolved" or report.unresolved:
        res.exit_code = EXIT_UNRESOLVED


def cmd_tables(args, cal, res: CommandResult) -> None:
    results = run_table(args.table, args.draws, args.seed, args.cutoff, args.workers)
    res.payload = {"table": args.table, "rows": [r.to_json() for r in results],
                   "matched": sum(r.ok for r in results), "total": len(results)}
    res.text = summarize(args.table, results)
    if any(i.verdict == "Unresolved" for r in results for i in r.instances):
        res.exit_code = EXIT_UNRESOLVED
    if not all(r.ok for r in results):
        res.exit_code = EXIT_FAILED


def _random_state(rng: random.Random) -> FourQubitState:
    while True:
        amps = [random_rational(rng, 9, 3) for _ in range(16)]
        if any(amps):
            return FourQubitState(amps)


def verify_identity(samples: int, seed: int, cal: CalibrationReport) -> dict:
    """Hyperdeterminant via S,T against the quartic discriminant, on random and catalog states."""
    rng = random.Random(f"identity:{seed}")
    states = [(f"random {k}", _random_state(rng)) for k in range(samples)]
    for fam in families():
        values = {p: Scalar(Fraction(3 + 2 * k, 1 + k)) for k, p in enumerate(fam.parameters)}
        states.append((fam.name, catalog_instantiate(fam, values)))
    for table in (4, 5):
        for row in table_rows(table, draws=1, seed=seed):
            states.append((f"table {table} {row.locus.describe()}",
                           catalog_instantiate(row.family, row.draws[0])))
    failures = []
    literal = 0
    for label, st in states:
        try:
            inv = levay_and_delta4(st, cal)
        except RouteDisagreement as exc:
            failures.append(f"{label}: {exc}")
            continue
        quartic = quartic_discriminant(quartic_coefficients(inv.B, inv.L, inv.M, inv.D))
        literal += (inv.S ** 3 - 27 * inv.T * inv.T) / 256 == quartic / 256
    return {"ok": not failures, "states": len(states), "failures": failures,
            "relation": "S^3 - 27 T^2 = disc(quartic) / 256",
            "literal_form_holds_on": literal}


def verify_gabcd_quartic(samples: int, seed: int, cal: CalibrationReport) -> dict:
    rng = random.Random(f"gabcd:{seed}")
    failures = []
    draws = [[Scalar(1), Scalar(2), Scalar(3), Scalar(4)]]
    while len(draws) < samples + 1:
        v = [random_rational(rng, 30, 5) for _ in range(4)]
        if all(v):
            draws.append(v)
    for v in draws:
        B, L, M, D = blmd(gabcd_state(*v), cal)
        got = quartic_coefficients(B, L, M, D)
        want = [ONE]
        for m in v:
            r = -(m * m)
            want = [a + b for a, b in zip([Scalar(0)] + want, [x * r for x in want] + [Scalar(0)])]
        if got != want:
            failures.append("(" + ", ".join(map(str, v)) + ")")
    return {"ok": not failures, "samples": len(draws), "failures": failures}


def verify_invariance(samples: int, seed: int, cal: CalibrationReport) -> dict:
    rng = random.Random(f"invariance:{seed}")
    failures = []
    checked = 0
    states = [_random_state(rng) for _ in range(samples)]
    group = [GroupElement.random(rng) for _ in range(samples)]
    for k, st in enumerate(states):
        base = levay_and_delta4(st, cal)
        ref = (base.B, base.L, base.M, base.D, base.delta4)
        for g in group:
            inv = levay_and_delta4(apply_group(g, st), cal)
            checked += 1
            if (inv.B, inv.L, inv.M, inv.D, inv.delta4) != ref:
                failures.append(f"state {k}: not invariant")
        for _ in range(3):
            lam = random_rational(rng, 7, 3) or ONE
            inv = levay_and_delta4(st.scale(lam), cal)
            got = (inv.B, inv.L, inv.M, inv.D, inv.delta4)
            want = tuple(r * lam ** d for r, d in zip(ref, (2, 4, 4, 6, 24)))
            if got != want:
                failures.append(f"state {k}: wrong homogeneity under scaling by {lam}")
    return {"ok": not failures, "pairs_checked": checked, "failures": failures}


def cmd_verify(args, cal, res: CommandResult) -> None:
    suite = args.suite
    if suite == "lemma31":
        n4 = verify_lemma31(4, args.samples or 50, args.seed, eliminant_points=100)
        n5 = verify_lemma31(5, args.samples or 20, args.seed, eliminant_points=20)
        payload = {"ok": n4.ok and n5.ok, "n4": n4.to_json(), "n5": n5.to_json()}
    elif suite == "prop32":
        payload = verify_prop32(args.samples or 20, args.seed, cal).to_json()
    elif suite == "identity":
        payload = verify_identity(args.samples or 20, args.seed, cal)
    elif suite == "gabcd-quartic":
        payload = verify_gabcd_quartic(args.samples or 5, args.seed, cal)
    else:
        payload = verify_invariance(args.samples or 10, args.seed, cal)
    res.payload = payload
    status = "pass" if payload["ok"] else "FAIL"
    detail = {k: v for k, v in payload.items() if k not in ("ok", "n4", "n5")}
    if suite == "lemma31":
        detail = {n: {k: payload[n][k] for k in ("forward", "backward", "branches", "ok")}
                  for n in ("n4", "n5")}
    res.text = f"verify {suite}: {status}\n" + json.dumps(detail, indent=2, sort_keys=True)
    if not payload["ok"]:
        res.exit_code = EXIT_FAILED


def _explore_job(job):
    seed, cutoff = job
    report = classify_section(sample_tangent_hyperplane(seed), cutoff)
    return report.verdict, [pt.report.verdict for pt in report.points]


def cmd_explore(args, cal, res: CommandResult) -> None:
    jobs = [(args.seed * 1_000_003 + k, args.cutoff) for k in range(args.samples)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            outcomes = list(pool.map(_explore_job, jobs))
    else:
        outcomes = [_explore_job(j) for j in jobs]
    sections = Counter(v for v, _ in outcomes)
    points = Counter(t for _, pts in outcomes for t in pts)
    res.payload = {"samples": args.samples, "sections": dict(sorted(sections.items())),
                   "points": dict(sorted(points.items()))}
    lines = [f"{args.samples} tangent hyperplanes", "section verdicts:"]
    lines += [f"  {k:<12} {v}" for k, v in sorted(sections.items())]
    lines += ["singular point types:"] + [f"  {k:<12} {v}" for k, v in sorted(points.items())]
    res.text = "\n".join(lines)
    if sections.get("Unresolved"):
        res.exit_code = EXIT_UNRESOLVED


def cmd_calibrate(args, cal, res: CommandResult) -> None:
    report = calibrate(args.seed)
    if args.output:
        save_calibration(report, args.output)
    res.fingerprint = report.fingerprint()
    res.payload = report.to_json()
    readable = report.to_json()["readable"]
    res.text = "\n".join([f"fingerprint {report.fingerprint()}"]
                         + [f"  {k} = {v}" for k, v in sorted(readable.items())]
                         + [f"  surviving conventions: {len(report.survivors)}"])


COMMANDS = {
    "invariants": cmd_invariants, "classify": cmd_classify, "tables": cmd_tables,
    "verify": cmd_verify, "explore": cmd_explore, "calibrate": cmd_calibrate,
}


def run_command(argv: list[str]) -> CommandResult:
    args = build_parser().parse_args(argv)
    cal = _calibration(args)
    res = CommandResult(list(argv), args.seed, cal.fingerprint())
    COMMANDS[args.command](args, cal, res)
    return res


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        res = run_command(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    print(res.render("--json" in argv))
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())

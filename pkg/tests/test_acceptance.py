"""One test per acceptance criterion; each records a pass/fail line for the terminal summary."""

import time
from collections import Counter
from functools import lru_cache

import pytest

from conftest import ACCEPTANCE_LINES
from test_invariants import oracle_values

from qubitsing.cli import verify_gabcd_quartic, verify_identity, verify_invariance
from qubitsing.deformation import verify_lemma31, verify_prop32
from qubitsing.invariants import default_calibration, gabcd_state, is_nullcone, phi
from qubitsing.poly import parse_poly
from qubitsing.scalar import ONE, Scalar, ZERO
from qubitsing.singularity import SectionGerm, classify_germ, classify_section
from qubitsing.states import FourQubitState
from qubitsing.tables import run_table


def record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


@lru_cache(maxsize=None)
def timed_table(table):
    start = time.perf_counter()
    results = run_table(table, draws=3, seed=0)
    return results, time.perf_counter() - start


def failing_rows(results):
    return [f"{r.row.label} ({'; '.join(sorted({i.observed for i in r.instances if not i.ok}))})"
            for r in results if not r.ok]


def test_criterion_1_worked_examples():
    checks = []
    start = time.perf_counter()
    r = classify_section(FourQubitState.basis("0011", "1100"))
    t1 = time.perf_counter() - start
    top = [p for p in r.points if p.label == "|1111>"]
    checks.append(len(top) == 1 and top[0].report.verdict == "A1" and top[0].report.milnor == 1
                  and top[0].report.corank == 0 and top[0].report.hessian_det == ONE)
    start = time.perf_counter()
    r = classify_section(FourQubitState.basis("0000", "1011", "1101", "1110"))
    t2 = time.perf_counter() - start
    checks.append(r.unique and r.points[0].label == "|0111>" and r.verdict == "D4"
                  and r.points[0].report.milnor == 4 and r.points[0].report.corank == 2)
    ok = all(checks) and t1 < 5 and t2 < 5
    record(1, ok, f"A1 at |1111> mu=1 corank 0 det 1; D4 at |0111> mu=4 corank 2 "
                  f"({t1:.2f}s, {t2:.2f}s)")
    assert ok


def test_criterion_2_table2():
    results, elapsed = timed_table(2)
    passed = sum(r.ok for r in results)
    ok = passed == len(results) == 3 and elapsed < 30
    record(2, ok, f"Table 2 {passed}/{len(results)} rows ({elapsed:.1f}s)")
    assert ok, failing_rows(results)


def test_criterion_3_table3():
    results, elapsed = timed_table(3)
    passed = sum(r.ok for r in results)
    bad = failing_rows(results)
    ok = not bad and elapsed < 600
    record(3, ok, f"Table 3 {passed}/{len(results)} rows ({elapsed:.1f}s)"
                  + (f"; mismatches: {', '.join(bad)}" if bad else ""))
    assert ok, bad


def test_criterion_4_tables_4_and_5():
    r4, e4 = timed_table(4)
    r5, e5 = timed_table(5)
    p4, p5 = sum(r.ok for r in r4), sum(r.ok for r in r5)
    ok = (p4, len(r4), p5, len(r5)) == (14, 14, 36, 36) and e4 + e5 < 1800
    record(4, ok, f"Table 4 {p4}/{len(r4)}, Table 5 {p5}/{len(r5)} ({e4 + e5:.1f}s)")
    assert ok, failing_rows(r4) + failing_rows(r5)


def test_criterion_5_route_agreement_as_stated():
    """The relation exactly as stated: (S^3 - 27 T^2)/256 = disc(quartic)/256.

    With the classical S, T the identity that holds is S^3 - 27 T^2 = disc/256 (the
    library enforces it on every evaluation); the stated form then only holds where
    the discriminant vanishes.
    """
    report = verify_identity(20, 0, default_calibration())
    literal = report["literal_form_holds_on"]
    corrected = report["ok"]
    ok = literal == report["states"]
    record(5, ok, f"stated form holds on {literal}/{report['states']} states; "
                  f"S^3-27T^2 = disc/256 holds on all: {corrected}")
    assert corrected, report["failures"]
    assert ok, f"stated normalization fails on {report['states'] - literal} states"


def test_criterion_6_gabcd_quartic():
    report = verify_gabcd_quartic(5, 0, default_calibration())
    oracle = oracle_values(1, 2, 3, 4)
    from qubitsing.invariants import blmd
    got = blmd(gabcd_state(1, 2, 3, 4))
    want = (15, -24, -24, 385)
    ok = report["ok"] and got == tuple(Scalar(v) for v in want) and \
        (oracle[0], -oracle[1][0], oracle[1][2], oracle[2]) == want
    record(6, ok, f"quartic identity on {report['samples']} draws; (B,L,M,D)(1,2,3,4) = "
                  f"({', '.join(map(str, got))}) matches symbolic oracle")
    assert ok, report["failures"]


def test_criterion_7_lemma():
    start = time.perf_counter()
    n4 = verify_lemma31(4, 50, 0, eliminant_points=100)
    n5 = verify_lemma31(5, 20, 0, eliminant_points=20)
    elapsed = time.perf_counter() - start
    ok = n4.ok and n5.ok and n4.branches.get("ln=0", 0) > 0 and elapsed < 300
    record(7, ok, f"n=4 {n4.forward}+{n4.backward} samples, eliminant on {n4.eliminant_checked} "
                  f"per side; n=5 {n5.forward}+{n5.backward} ({elapsed:.1f}s)")
    assert ok, n4.failures + n5.failures


def test_criterion_8_tangent_hyperplanes():
    start = time.perf_counter()
    report = verify_prop32(20, 0)
    nullcone = FourQubitState.basis("0000", "1011", "1101", "1110")
    elapsed = time.perf_counter() - start
    ok = report.ok and report.samples == 22 and is_nullcone(nullcone) \
        and phi(nullcone) == (ZERO,) * 4 and elapsed < 120
    record(8, ok, f"{report.samples} hyperplanes on the D4 discriminant, "
                  f"{report.nullcone_hits} nullcone states at the origin ({elapsed:.1f}s)")
    assert ok, report.failures


def test_criterion_9_invariance():
    report = verify_invariance(10, 0, default_calibration())
    ok = report["ok"] and report["pairs_checked"] == 100
    record(9, ok, f"{report['pairs_checked']} state/group pairs, 30 scalings")
    assert ok, report["failures"]


NORMAL_FORMS = [
    ("x^2 + y^2 + z^2 + w^2", "A1", 1),
    ("x^3 + y^2 + z^2 + w^2", "A2", 2),
    ("x^4 + y^2 + z^2 + w^2", "A3", 3),
    ("x^5 + y^2 + z^2 + w^2", "A4", 4),
    ("x^3 + x*y^2 + z^2 + w^2", "D4", 4),
    ("x^3 + y^4 + z^2 + w^2", "E6", 6),
]


def test_criterion_10_normal_forms():
    V = ("w", "x", "y", "z")
    good = 0
    for text, label, mu in NORMAL_FORMS:
        plain = classify_germ(SectionGerm(parse_poly(text, V)))
        # same core, different nondegenerate quadratic part in the unused variables
        other = text.replace("z^2 + w^2", "3*z*w")
        if text.startswith("x^2 +"):
            other = "x*y + 3*z*w"
        twisted = classify_germ(SectionGerm(parse_poly(other, V)))
        good += (plain.verdict, plain.milnor) == (label, mu) == (twisted.verdict, twisted.milnor)
    ok = good == len(NORMAL_FORMS)
    record(10, ok, f"{good}/{len(NORMAL_FORMS)} normal forms with stable equivalence")
    assert ok


def test_criterion_11_catalog_histogram():
    seen = Counter()
    for table in (2, 3, 4, 5):
        results, _ = timed_table(table)
        for r in results:
            for inst in r.instances:
                if inst.verdict in ("Smooth", "NonIsolated"):
                    seen[inst.verdict] += 1
                else:
                    for kind in inst.verdict.removeprefix("Mixed(").rstrip(")").split(","):
                        seen[kind] += 1
    want = {"Smooth", "A1", "A2", "A3", "D4", "NonIsolated"}
    ok = set(seen) == want
    record(11, ok, "catalog histogram " + ", ".join(f"{k}:{v}" for k, v in sorted(seen.items())))
    assert ok, dict(seen)


@pytest.mark.slow
def test_explore_probe_recorded():
    """Tangent-hyperplane probe for further types; recorded only."""
    from qubitsing.cli import run_command
    res = run_command(["explore", "--samples", "200"])
    ACCEPTANCE_LINES.append(f"criterion 11 (probe, not asserted): {res.payload['sections']} "
                            f"points {res.payload['points']}")

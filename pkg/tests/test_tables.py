import pytest

from qubitsing.catalog import Verdict, catalog_instantiate
from qubitsing.invariants import levay_and_delta4
from qubitsing.singularity import classify_section
from qubitsing.states import FourQubitState
from qubitsing.tables import matches, observed, run_table, summarize

D4_SECTION = classify_section(FourQubitState.basis("0000", "1011", "1101", "1110"))
PAIR_SECTION = classify_section(FourQubitState.basis("0011", "1100"))


@pytest.mark.parametrize("expect, report, ok", [
    (Verdict("", "unique", "D4"), D4_SECTION, True),
    (Verdict("", "type", "D4"), D4_SECTION, True),
    (Verdict("", "unique", "A1"), PAIR_SECTION, False),
    (Verdict("", "type", "A1"), PAIR_SECTION, True),
    (Verdict("", "smooth", None), PAIR_SECTION, False),
    (Verdict("", "nonisolated", None), D4_SECTION, False),
])
def test_matches(expect, report, ok):
    assert matches(expect, report) is ok


def test_observed_strings():
    assert observed(D4_SECTION) == "D4 x1 at |0111>"
    assert observed(classify_section(FourQubitState.basis("0000"))) == "NonIsolated"


def test_table2_rows_and_summary():
    results = run_table(2)
    assert [r.ok for r in results] == [True, True, True]
    text = summarize(2, results)
    assert text.splitlines()[-1].strip() == "3/3 rows match"
    assert results[0].to_json()["instances"][0]["verdict"] == "D4"


def test_runs_are_deterministic():
    a = [r.to_json() for r in run_table(3, draws=1, seed=4)]
    b = [r.to_json() for r in run_table(3, draws=1, seed=4)]
    assert a == b


def test_a2b2_family_sits_on_the_dual_variety():
    """The printed L_a2b2 form has vanishing hyperdeterminant for every a, b, so its
    sections are singular; the table's 'smooth section' entry cannot hold for it."""
    for a, b in ((2, 3), (5, -7), (1, 0)):
        st = catalog_instantiate("L_a2b2", {"a": a, "b": b})
        assert levay_and_delta4(st).delta4 == 0
        assert classify_section(st).verdict == "A1"

"""Reproduce the classification tables from the catalog and diff against expectations."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .catalog import TableRow, Verdict, catalog_instantiate, family, table_rows
from .singularity import DEFAULT_CUTOFF, SingularityReport, classify_section

__all__ = ["InstanceResult", "RowResult", "matches", "run_table", "summarize"]


def matches(expect: Verdict, report: SingularityReport) -> bool:
    if expect.kind == "smooth":
        return report.verdict == "Smooth"
    if expect.kind == "nonisolated":
        return report.verdict == "NonIsolated"
    if report.verdict != expect.type:
        return False
    return len(report.points) == 1 if expect.kind == "unique" else len(report.points) >= 1


def observed(report: SingularityReport) -> str:
    if report.verdict in ("Smooth", "NonIsolated", "Unresolved"):
        return report.verdict
    where = ", ".join(p.label for p in report.points)
    return f"{report.verdict} x{len(report.points)} at {where}"


@dataclass
class InstanceResult:
    parameters: dict[str, str]
    verdict: str
    observed: str
    ok: bool


@dataclass
class RowResult:
    row: TableRow
    instances: list[InstanceResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(i.ok for i in self.instances)

    def to_json(self) -> dict:
        return {
            "family": self.row.family,
            "locus": self.row.locus.describe(),
            "expected": self.row.expect.describe(),
            "ok": self.ok,
            "instances": [vars(i) for i in self.instances],
        }


def _classify_job(job):
    name, values, cutoff = job
    report = classify_section(catalog_instantiate(name, values), cutoff)
    return report.verdict, observed(report), report


def run_table(table: int, draws: int = 3, seed: int = 0, cutoff: int = DEFAULT_CUTOFF,
              workers: int | None = 1) -> list[RowResult]:
    """Classify every instance of every row; ``workers`` > 1 uses a process pool.

    Results come back in row order then draw order whatever the pool does.
    """
    rows = table_rows(table, draws, seed)
    jobs = [(row.family, d, cutoff) for row in rows for d in row.draws]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            outcomes = list(pool.map(_classify_job, jobs, chunksize=1))
    else:
        outcomes = [_classify_job(j) for j in jobs]
    results = []
    it = iter(outcomes)
    for row in rows:
        res = RowResult(row)
        for d in row.draws:
            verdict, obs, report = next(it)
            res.instances.append(InstanceResult({k: str(v) for k, v in d.items()}, verdict, obs,
                                                matches(row.expect, report)))
        results.append(res)
    return results


def summarize(table: int, results: list[RowResult]) -> str:
    lines = [f"Table {table}"]
    width = max(len(r.row.label) for r in results)
    for r in results:
        mark = "ok  " if r.ok else "FAIL"
        seen = sorted({i.observed if not r.ok else i.verdict for i in r.instances})
        lines.append(f"  {mark} {r.row.label:<{width}}  expected {r.row.expect.describe():<18} "
                     f"observed {'; '.join(seen)}")
    passed = sum(r.ok for r in results)
    lines.append(f"  {passed}/{len(results)} rows match")
    return "\n".join(lines)

"""
cylnogo/reporting.py

Report document for verification runs. Results are sorted by check name and
exact values are written as text, so two runs differ only in elapsed_ms.
"""

from enum import Enum
from typing import Iterable, List

from pydantic import BaseModel, Field


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONSISTENT_AS_EXPECTED = "inconsistent-as-expected"


class CheckResult(BaseModel):
    name: str
    status: Status
    witness: str
    anchor: str = Field(..., alias="paper_anchor")
    elapsed_ms: float = 0.0

    class Config:
        use_enum_values = True
        allow_population_by_field_name = True


class Report(BaseModel):
    version: str
    checks: List[CheckResult]


def build_report(version: str, results: Iterable[CheckResult]) -> Report:
    return Report(version=version, checks=sorted(results, key=lambda result: result.name))


def render_json(report: Report) -> str:
    return report.json(indent=2, by_alias=True)


def render_text(report: Report) -> str:
    """Pass/fail table, one row per check."""
    width = max([len(result.name) for result in report.checks] + [5])
    lines = [f"{'check':<{width}}  {'status':<24}  {'ms':>9}  witness"]
    lines.append("-" * len(lines[0]))
    for result in report.checks:
        witness = result.witness if len(result.witness) <= 100 else result.witness[:97] + "..."
        lines.append(f"{result.name:<{width}}  {result.status:<24}  {result.elapsed_ms:>9.1f}  {witness}")
    return "\n".join(lines)


def render(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"unknown report format '{fmt}'")

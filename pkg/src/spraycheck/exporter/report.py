"""Write check reports as JSON or as an aligned text table."""
import json
import math
import typing as t

from tabulate import tabulate

from spraycheck.report.checks import CheckResult, Report

FORMATS = ("json", "text")


def _number(value: t.Optional[float]) -> t.Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return value


def result_record(result: CheckResult) -> t.Dict[str, t.Any]:
    return {
        "name": result.name,
        "stage": result.stage,
        "verdict": result.verdict.value,
        "residual_max": _number(result.residual_max),
        "residual_mean": _number(result.residual_mean),
        "points_evaluated": result.points_evaluated,
        "points_skipped": result.points_skipped,
        "tolerance": result.tolerance,
        "note": result.note,
    }


def report_record(report: Report, timing: bool = False) -> t.Dict[str, t.Any]:
    record: t.Dict[str, t.Any] = {
        "engine": {"name": "spraycheck", "version": report.version},
        "scenario": {"name": report.scenario, "digest": report.digest},
        "sampling": {"points": report.points, "seed": report.seed},
        "projective_dimension": report.projective_dimension,
        "passed": report.passed,
        "summary": report.counts(),
        "checks": [result_record(r) for r in report.results],
    }
    if timing:
        record["wall_time"] = report.wall_time
    return record


def to_json(report: Report, timing: bool = False) -> str:
    """The report as JSON with sorted keys.

    Without `timing` the output only depends on the scenario and the
    sampling, so repeated runs give identical bytes.
    """
    return json.dumps(report_record(report, timing), sort_keys=True, indent=2)


def to_text(report: Report) -> str:
    rows = [
        (
            r.stage,
            r.name,
            r.verdict.value.upper(),
            _number(r.residual_max),
            _number(r.residual_mean),
            r.points_evaluated,
            r.points_skipped,
            r.tolerance,
            r.note,
        )
        for r in report.results
    ]
    table = tabulate(
        rows,
        headers=[
            "Stage",
            "Check",
            "Verdict",
            "Max residual",
            "Mean residual",
            "Points",
            "Skipped",
            "Tolerance",
            "Note",
        ],
        floatfmt=".3g",
        missingval="-",
        stralign="left",
        numalign="right",
    )
    summary = ", ".join(f"{n} {v}" for v, n in report.counts().items() if n)
    return "\n".join(
        [
            f"Scenario {report.scenario} (sha256 {report.digest[:12]}), spraycheck {report.version}",
            f"{report.points} points, seed {report.seed}, projective dimension from {report.projective_dimension}",
            "",
            table,
            "",
            f"{'PASSED' if report.passed else 'FAILED'}: {summary}",
            f"Wall time: {report.wall_time:.2f} s",
        ]
    )


def write(report: Report, format: str = "text", timing: bool = False) -> str:
    if format == "json":
        return to_json(report, timing)
    if format == "text":
        return to_text(report)
    raise ValueError(f"Unknown report format {format!r}; use one of {', '.join(FORMATS)}")

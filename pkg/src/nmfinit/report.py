"""Side-by-side initializer comparison at a shared factorization rank."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .dense import DenseMatrix
from .decomposition import svd
from .rank import choose_rank
from .solvers import ConvergenceTrace, RankPolicy, RunConfig, run

__all__ = ["ReportRow", "ComparisonReport", "compare", "write_report_csv", "format_table"]

_DETERMINISTIC_METHODS = ("svdnmf", "nndsvd", "nndsvd-abs")


@dataclass(frozen=True)
class ReportRow:
    method: str
    p: int
    error: float
    elapsed_ms: float


@dataclass(frozen=True)
class ComparisonReport:
    input_label: str
    algorithm: str
    iterations: int
    rows: tuple[ReportRow, ...]


def compare(
    z: DenseMatrix,
    algorithm: str = "mm",
    iterations: int = 100,
    seeds: tuple[int, ...] = (0,),
    rank_policy: RankPolicy | None = None,
    epsilon: float = 1e-9,
    mean_random: bool = False,
    input_label: str = "",
) -> tuple[ComparisonReport, dict[str, ConvergenceTrace]]:
    """Run every initializer on ``z`` at one shared rank.

    The three deterministic initializers reuse a single SVD; the random
    initializer contributes one row per seed, or one mean row when
    ``mean_random`` is set. Returns the report plus the full traces
    keyed by row label (for convergence figures).
    """
    policy = rank_policy or RankPolicy.auto()
    factors = svd(z)
    if policy.kind == "auto":
        p = choose_rank(factors.sigma, policy.threshold).p
    else:
        p = policy.p

    rows: list[ReportRow] = []
    traces: dict[str, ConvergenceTrace] = {}
    for method in _DETERMINISTIC_METHODS:
        config = RunConfig(
            algorithm=algorithm,
            initializer=method,
            rank_policy=RankPolicy.fixed(p),
            iterations=iterations,
            epsilon=epsilon,
        )
        trace = run(z, config, factors=factors)
        last = trace.records[-1]
        rows.append(ReportRow(method, p, last.error, last.elapsed_ms))
        traces[method] = trace

    random_rows: list[ReportRow] = []
    for seed in seeds:
        config = RunConfig(
            algorithm=algorithm,
            initializer="random",
            rank_policy=RankPolicy.fixed(p),
            iterations=iterations,
            seed=seed,
            epsilon=epsilon,
        )
        label = f"random(seed={seed})"
        trace = run(z, config, factors=factors)
        last = trace.records[-1]
        random_rows.append(ReportRow(label, p, last.error, last.elapsed_ms))
        traces[label] = trace

    if mean_random and random_rows:
        mean_err = sum(r.error for r in random_rows) / len(random_rows)
        mean_ms = sum(r.elapsed_ms for r in random_rows) / len(random_rows)
        rows.append(ReportRow(f"random(mean of {len(random_rows)})", p, mean_err, mean_ms))
    else:
        rows.extend(random_rows)

    report = ComparisonReport(
        input_label=input_label,
        algorithm=algorithm,
        iterations=iterations,
        rows=tuple(rows),
    )
    return report, traces


def write_report_csv(report: ComparisonReport, path, include_timing: bool = True) -> None:
    """Write ``method,p,error,elapsed_ms`` rows."""
    lines = ["method,p,error,elapsed_ms"]
    for row in report.rows:
        elapsed = int(round(row.elapsed_ms)) if include_timing else 0
        lines.append(f"{row.method},{row.p},{row.error:.6f},{elapsed}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def format_table(report: ComparisonReport) -> str:
    """Aligned text table with errors to four decimal places."""
    header = (
        f"input: {report.input_label}   algorithm: {report.algorithm}   "
        f"iterations: {report.iterations}"
    )
    name_width = max(len("method"), *(len(r.method) for r in report.rows))
    lines = [
        header,
        f"{'method':<{name_width}}  {'p':>4}  {'error':>8}  {'ms':>8}",
    ]
    for row in report.rows:
        lines.append(
            f"{row.method:<{name_width}}  {row.p:>4}  {row.error:>8.4f}  "
            f"{int(round(row.elapsed_ms)):>8}"
        )
    return "\n".join(lines)

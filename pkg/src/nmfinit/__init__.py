"""SVD-based rank selection and initialization for nonnegative matrix
factorization, with the MM and LNMF multiplicative solvers and a CLI
harness for grayscale-image benchmarks.

Submodules are imported lazily so that the ``NMFINIT_THREADS`` cap in
:mod:`nmfinit.cli` can take effect before numpy loads its BLAS.
"""

from importlib import import_module

__version__ = "0.1.0"

_EXPORTS = {
    "DenseMatrix": "dense",
    "matmul": "dense",
    "elementwise": "dense",
    "transpose": "dense",
    "frobenius_norm": "dense",
    "SvdFactors": "decomposition",
    "TruncatedFactors": "decomposition",
    "svd": "decomposition",
    "truncate": "decomposition",
    "RankChoice": "rank",
    "choose_rank": "rank",
    "basic_rule_check": "rank",
    "NmfFactors": "initializers",
    "svd_nmf_init": "initializers",
    "nndsvd_init": "initializers",
    "nndsvd_abs_init": "initializers",
    "random_init": "initializers",
    "RankPolicy": "solvers",
    "RunConfig": "solvers",
    "TraceRecord": "solvers",
    "ConvergenceTrace": "solvers",
    "mm_step": "solvers",
    "lnmf_step": "solvers",
    "rel_error": "solvers",
    "kl_divergence": "solvers",
    "run": "solvers",
    "ImageMatrix": "fileio",
    "read_pgm": "fileio",
    "write_pgm": "fileio",
    "read_csv_matrix": "fileio",
    "write_trace_csv": "fileio",
    "load_matrix": "fileio",
    "ReportRow": "report",
    "ComparisonReport": "report",
    "compare": "report",
    "write_report_csv": "report",
    "format_table": "report",
    "save_trace_figure": "figures",
    "save_comparison_figure": "figures",
    "ShapeError": "errors",
    "DegenerateInputError": "errors",
    "SvdConvergenceError": "errors",
    "PgmError": "errors",
}

__all__ = sorted(_EXPORTS) + ["__version__"]


def __getattr__(name):
    try:
        module_name = _EXPORTS[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}") from None
    value = getattr(import_module(f".{module_name}", __name__), name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(_EXPORTS))

"""Command-line surface: ``nmfinit rank|run|compare|svd``.

Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors.
``NMFINIT_THREADS`` caps BLAS-level parallelism; it must be applied
before numpy is first imported, so the heavy modules are imported
lazily inside the command handlers.
"""

from __future__ import annotations

import argparse
import os
import sys

__all__ = ["main"]

_BLAS_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _apply_thread_cap() -> None:
    cap = os.environ.get("NMFINIT_THREADS")
    if cap:
        for var in _BLAS_THREAD_VARS:
            os.environ.setdefault(var, cap)


def _rank_policy_arg(text: str):
    if text == "auto":
        return "auto"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--rank expects 'auto' or a positive integer, got {text!r}"
        ) from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"--rank must be >= 1, got {value}")
    return value


def _seed_list_arg(text: str) -> tuple[int, ...]:
    try:
        seeds = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--seeds expects comma-separated integers, got {text!r}"
        ) from None
    if not seeds:
        raise argparse.ArgumentTypeError("--seeds must name at least one seed")
    return seeds


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmfinit",
        description=(
            "SVD-based rank selection and initialization for nonnegative "
            "matrix factorization, with MM/LNMF multiplicative solvers."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="choose the factorization rank from the spectrum")
    p_rank.add_argument("input", help="PGM or CSV matrix")
    p_rank.add_argument("--threshold", type=float, default=0.90,
                        help="cumulative singular-value share to reach (default 0.90)")
    p_rank.set_defaults(func=_cmd_rank)

    p_svd = sub.add_parser("svd", help="print the singular spectrum")
    p_svd.add_argument("input", help="PGM or CSV matrix")
    p_svd.add_argument("--top", type=_positive_int, default=10,
                       help="number of leading singular values to print (default 10)")
    p_svd.add_argument("--out", metavar="CSV", help="write the full spectrum as k,sigma rows")
    p_svd.set_defaults(func=_cmd_svd)

    p_run = sub.add_parser("run", help="run one solver from one initialization")
    p_run.add_argument("input", help="PGM or CSV matrix")
    p_run.add_argument("--algo", choices=("mm", "lnmf"), default="mm")
    p_run.add_argument("--init", choices=("svdnmf", "nndsvd", "nndsvd-abs", "random"),
                       default="svdnmf")
    p_run.add_argument("--rank", type=_rank_policy_arg, default="auto",
                       help="'auto' (choosing rule) or a fixed positive rank")
    p_run.add_argument("--threshold", type=float, default=0.90,
                       help="energy threshold for --rank auto (default 0.90)")
    p_run.add_argument("--iters", type=_positive_int, default=100)
    p_run.add_argument("--seed", type=int, default=0, help="seed for --init random")
    p_run.add_argument("--eps", type=float, default=1e-9, help="denominator guard")
    p_run.add_argument("--perturb", type=float, default=0.0,
                       help="replace exact zeros in W0/H0 by this value (default off)")
    p_run.add_argument("--stop-tol", type=float, default=None, metavar="TOL",
                       help="stop early once the per-iteration error decrease "
                            "drops below TOL (default: run the exact budget)")
    p_run.add_argument("--trace", metavar="CSV", help="write iter,error,elapsed_ms rows")
    p_run.add_argument("--trace-every", type=_positive_int, default=1,
                       help="record the error every N iterations (default 1)")
    p_run.add_argument("--recon", metavar="PGM", help="write the reconstruction W*H")
    p_run.add_argument("--plot", metavar="PNG", help="render the convergence curve")
    p_run.add_argument("--no-timing", action="store_true",
                       help="zero the elapsed_ms column for byte-exact outputs")
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", help="compare all initializers at one rank")
    p_cmp.add_argument("input", help="PGM or CSV matrix")
    p_cmp.add_argument("--algo", choices=("mm", "lnmf"), default="mm")
    p_cmp.add_argument("--iters", type=_positive_int, default=100)
    p_cmp.add_argument("--seeds", type=_seed_list_arg, default=(0,),
                       help="comma-separated seeds for the random rows (default 0)")
    p_cmp.add_argument("--mean", action="store_true",
                       help="aggregate the random rows into their mean")
    p_cmp.add_argument("--rank", type=_rank_policy_arg, default="auto")
    p_cmp.add_argument("--threshold", type=float, default=0.90)
    p_cmp.add_argument("--eps", type=float, default=1e-9)
    p_cmp.add_argument("--out", metavar="CSV", help="write method,p,error,elapsed_ms rows")
    p_cmp.add_argument("--plot", metavar="PNG", help="render overlaid convergence curves")
    p_cmp.add_argument("--no-timing", action="store_true",
                       help="zero the elapsed_ms column for byte-exact outputs")
    p_cmp.set_defaults(func=_cmd_compare)

    return parser


def _policy_from_args(args):
    from .solvers import RankPolicy

    if args.rank == "auto":
        return RankPolicy.auto(args.threshold)
    return RankPolicy.fixed(args.rank)


def _cmd_rank(args) -> int:
    from .decomposition import svd
    from .fileio import load_matrix
    from .rank import choose_rank

    z = load_matrix(args.input)
    factors = svd(z)
    choice = choose_rank(factors.sigma, args.threshold, shape=(z.rows, z.cols))
    print(f"p = {choice.p}")
    print(f"energy ratio = {choice.energy_ratio:.4f}")
    status = "satisfied" if choice.satisfies_basic_rule else "violated"
    print(f"basic rule (m+n)p < mn: {status}")
    if not choice.satisfies_basic_rule:
        print(
            f"warning: p = {choice.p} does not compress {z.rows}x{z.cols} "
            "(factor storage exceeds the input)",
            file=sys.stderr,
        )
    return 0


def _cmd_svd(args) -> int:
    from .decomposition import svd
    from .fileio import load_matrix

    z = load_matrix(args.input)
    factors = svd(z)
    shown = min(args.top, len(factors.sigma))
    for k in range(shown):
        print(f"sigma[{k + 1}] = {factors.sigma[k]:.10g}")
    if args.out:
        lines = ["k,sigma"]
        lines.extend(
            f"{k + 1},{value:.10g}" for k, value in enumerate(factors.sigma)
        )
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


def _cmd_run(args) -> int:
    from .dense import DenseMatrix
    from .fileio import load_matrix, write_pgm, write_trace_csv
    from .solvers import RunConfig, run

    z = load_matrix(args.input)
    config = RunConfig(
        algorithm=args.algo,
        initializer=args.init,
        rank_policy=_policy_from_args(args),
        iterations=args.iters,
        seed=args.seed,
        epsilon=args.eps,
        trace_every=args.trace_every,
        perturb=args.perturb,
        stop_tolerance=args.stop_tol,
    )
    trace = run(z, config)
    if args.trace:
        write_trace_csv(trace, args.trace, include_timing=not args.no_timing)
    if args.recon:
        final = trace.final_factors
        write_pgm(DenseMatrix(final.w.array @ final.h.array), args.recon)
    if args.plot:
        from .figures import save_trace_figure

        save_trace_figure(trace, args.plot, title=f"{args.algo} / {args.init}")
    print(f"p = {trace.final_factors.p}")
    print(f"final error {trace.records[-1].error:.6f}")
    return 0


def _cmd_compare(args) -> int:
    from .fileio import load_matrix
    from .report import compare, format_table, write_report_csv

    z = load_matrix(args.input)
    report, traces = compare(
        z,
        algorithm=args.algo,
        iterations=args.iters,
        seeds=args.seeds,
        rank_policy=_policy_from_args(args),
        epsilon=args.eps,
        mean_random=args.mean,
        input_label=os.path.basename(args.input),
    )
    print(format_table(report))
    if args.out:
        write_report_csv(report, args.out, include_timing=not args.no_timing)
    if args.plot:
        from .figures import save_comparison_figure

        save_comparison_figure(traces, args.plot, title=report.input_label)
    return 0


def main(argv=None) -> int:
    _apply_thread_cap()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"nmfinit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``rbfourier {proctor,wallman,leakage,custom,selftest}``.

Exit status is 0 on success, 1 on invalid input and 2 on a numerical
failure (degenerate eigenvalue, singular gauge, diverged fit).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import NumericalError, ValidationError
from .scenarios import (PROCTOR_LENGTHS, run_custom, run_leakage, run_proctor, run_wallman,
                        write_bundle)
from .selftest import run_selftest

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input, keep status 2 for numerical failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _lengths(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("lengths must be positive integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0, or the config's)")
    common.add_argument("--out-dir", type=Path, default=None,
                        help="directory for report.json and decay.csv (default ./rbfourier-out/<scenario>)")
    common.add_argument("--samples", type=int, default=None, help="sequences per length, or ensemble size for wallman")
    common.add_argument("--lengths", type=_lengths, default=None, help="comma-separated sequence lengths")

    p = _Parser(prog="rbfourier", description="Fourier analysis of randomized benchmarking over finite groups.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("proctor", parents=[common], help="x/y pulses with a small trailing z-rotation")
    sp.add_argument("--theta", type=float, default=0.1)
    sp.add_argument("--decomposition", choices=("published", "bfs"), default="published")
    sp.add_argument("--no-monte-carlo", action="store_true", help="skip sampling (exact curve only in report)")

    sw = sub.add_parser("wallman", parents=[common], help="depolarizing Cliffords, half with an extra z-error")
    sw.add_argument("--nu", type=float, default=0.99)
    sw.add_argument("--theta", type=float, default=0.09)

    sub.add_parser("leakage", parents=[common], help="ideal Cliffords embedded in a qutrit")

    sc = sub.add_parser("custom", parents=[common], help="gate-set from a YAML config")
    sc.add_argument("config", type=Path)
    sc.add_argument("--no-monte-carlo", action="store_true")

    sub.add_parser("selftest", help="quick property checks")
    return p


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, complex):
        return f"{v.real:.6g}{v.imag:+.2g}j"
    return str(v)


def _table(rows: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"  {k:<{width}}  {_fmt(v)}" for k, v in rows)


def summary_rows(report: dict) -> list[tuple[str, object]]:
    rows: list[tuple[str, object]] = [("scenario", report["scenario"])]
    s = report.get("summary")
    if s:
        rows += [("delta", s["delta"]), ("t_bar", s["t_bar"]), ("p_bar", s["p_bar"]),
                 ("1 - p_bar", 1 - s["p_bar"]) if isinstance(s["p_bar"], float) else ("1 - p_bar", "complex"),
                 ("q", s["q"]), ("next eigenvalue", s["next_eigenvalue"])]
        rows.append(("bounds hold", all(b["ok"] for b in report["bounds"])))
    for k, v in report.get("errors", {}).items():
        rows.append((f"error ({k})", v))
    for k, fit in report.get("decay", {}).get("fits", {}).items():
        rows.append((f"fit p ({k})", fit.get("p_bar", fit.get("failed"))))
    ens = report.get("ensemble")
    if ens:
        rows.append(("samples ok", ens["n_ok"]))
        for k, st in ens["errors"].items():
            rows.append((f"error ({k}) mean", st["mean"]))
            rows.append((f"error ({k}) std", st["std"]))
        rows.append(("optimal <= computational", ens["optimal_le_computational"]))
        rows.append(("optimal <= depolarizing", ens["optimal_le_depolarizing"]))
    if "unit_eigenvalues" in report:
        rows += [("unit eigenvalues", report["unit_eigenvalues"]),
                 ("multiplicities", {k: v for k, v in report["unit_multiplicities"].items() if v}),
                 ("max other |eigenvalue|", report["max_other_eigenvalue"]),
                 ("qubit unit eigenvalues", report["qubit_unit_eigenvalues"])]
    return rows


def _run(args) -> tuple[dict, object]:
    seed = 0 if args.seed is None else args.seed
    if args.command == "proctor":
        return run_proctor(args.theta, seed=seed, samples=args.samples or 1000,
                           lengths=args.lengths or PROCTOR_LENGTHS, decomposition=args.decomposition,
                           monte_carlo=not args.no_monte_carlo)
    if args.command == "wallman":
        return run_wallman(args.nu, args.theta, n_samples=args.samples or 500, seed=seed), None
    if args.command == "leakage":
        return run_leakage(), None  # deterministic, sampling flags do not apply
    if args.command == "custom":
        return run_custom(args.config, monte_carlo=not args.no_monte_carlo, seed=args.seed,
                          samples=args.samples, lengths=args.lengths)
    raise ValidationError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return EXIT_OK if run_selftest() else EXIT_NUMERICAL
    try:
        report, data = _run(args)
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    out_dir = args.out_dir or Path("rbfourier-out") / args.command
    written = write_bundle(report, data, out_dir)
    print(_table(summary_rows(report)))
    print("wrote " + ", ".join(str(p) for p in written))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

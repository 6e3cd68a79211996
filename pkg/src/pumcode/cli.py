"""Command-line entry point.

Exit codes: 0 success, 1 a check ran and failed (verify-distances,
bmd-check), 2 usage or input format error, 3 internal error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import oracle
from .decoder import ERASURE_MODES, decode
from .errors import SamplingError, ScaleGuardError, UsageError
from .formats import format_sequence, load_code, read_sequence, write_sequence
from .pum import PumCode
from .sim import ChannelSpec, run_trials

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # raise so main() owns the exit code
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _fmt(x) -> str:
    return str(Fraction(x))


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _profile_text(code: PumCode, jmax: int) -> str:
    prof = code.profile
    lines = [
        f"q={code.field.q}",
        f"modulus={code.field.modulus}",
        f"n={code.n}",
        f"k={code.k}",
        f"k1={code.k1}",
        f"phi={code.phi}",
        f"ell={prof.ell}",
        f"d_alpha={prof.d_alpha}",
        f"d0={prof.d0}",
        f"d1={prof.d1}",
        f"d01={prof.d01}",
        f"alpha={_fmt(prof.alpha)}",
        f"dfree_designed={prof.dfree_designed}",
        "j\tdrdes\tdcdes\tdrcdes",
    ]
    for j in range(1, jmax + 1):
        lines.append(f"{j}\t{_fmt(prof.drdes(j))}\t{_fmt(prof.dcdes(j))}\t{_fmt(prof.drcdes(j))}")
    return "\n".join(lines) + "\n"


def cmd_construct(args) -> int:
    code = load_code(args.code)
    sys.stdout.write(_profile_text(code, args.jmax))
    return EXIT_OK


def cmd_encode(args) -> int:
    code = load_code(args.code)
    info = read_sequence(args.input, code.k, code.field.q)
    _emit(args, format_sequence(code.encode(info).tolist()))
    return EXIT_OK


def cmd_decode(args) -> int:
    code = load_code(args.code)
    received = read_sequence(args.input, code.n, code.field.q)
    result = decode(code, received, args.erasure_mode)
    if args.out:
        write_sequence(args.out, result.information)
    else:
        sys.stdout.write(format_sequence(result.information))
    sys.stderr.write(f"metric={_fmt(result.metric)}\n")
    sys.stderr.write("provenance=" + ",".join(result.provenance) + "\n")
    sys.stderr.write(f"used_erasure={int(result.used_erasure)}\n")
    sys.stderr.write(f"block_decoder_invocations={result.invocations}\n")
    return EXIT_OK


def cmd_oracle_decode(args) -> int:
    code = load_code(args.code)
    received = read_sequence(args.input, code.n, code.field.q)
    info, metric = oracle.ml_decode(code, received)
    if args.out:
        write_sequence(args.out, info)
    else:
        sys.stdout.write(format_sequence(info))
    sys.stderr.write(f"metric={metric}\n")
    return EXIT_OK


def verify_distances(code: PumCode, jmax: int) -> tuple[bool, str]:
    """Measured extended distances against designed ones; (all ok, report)."""
    measured = oracle.extended_distances(code, jmax)
    prof = code.profile
    ok = True
    lines = ["j\tdr\tdrdes\tdc\tdcdes\tdrc\tdrcdes\tstatus"]
    for j in range(1, jmax + 1):
        dr, dc, drc = measured.row[j - 1], measured.column[j - 1], measured.reverse_column[j - 1]
        fails = [
            name
            for name, m, d in (("dr", dr, prof.drdes(j)), ("dc", dc, prof.dcdes(j)), ("drc", drc, prof.drcdes(j)))
            if m < d
        ]
        ok = ok and not fails
        status = "ok" if not fails else "FAIL:" + ",".join(fails)
        lines.append(
            f"{j}\t{dr}\t{_fmt(prof.drdes(j))}\t{dc}\t{_fmt(prof.dcdes(j))}\t{drc}\t{_fmt(prof.drcdes(j))}\t{status}"
        )
    # free distance can never exceed n-k+k1+1; meeting the designed value forces equality
    upper = code.n - code.k + code.k1 + 1
    dfree_ok = prof.dfree_designed <= measured.dfree <= upper
    ok = ok and dfree_ok
    lines.append(f"dfree={measured.dfree}")
    lines.append(f"dfree_designed={prof.dfree_designed}")
    lines.append(f"dfree_upper_bound={upper}")
    lines.append(f"dfree_status={'ok' if dfree_ok else 'FAIL'}")
    lines.append(f"result={'pass' if ok else 'fail'}")
    return ok, "\n".join(lines) + "\n"


def cmd_verify_distances(args) -> int:
    code = load_code(args.code)
    ok, text = verify_distances(code, args.jmax)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_bmd_check(args) -> int:
    code = load_code(args.code)
    errors = read_sequence(args.input, code.n, code.field.q)
    whole = oracle.bmd_condition(code, errors)
    lines = [f"sequence_condition={'true' if whole else 'false'}"]
    for j in range(len(errors)):
        lines.append(f"block_{j}={'true' if oracle.bmd_block_condition(code, errors, j) else 'false'}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if whole else EXIT_CHECK_FAILED


def _channel(args) -> ChannelSpec:
    chosen = [x for x in (args.epsilon is not None, args.weights is not None, args.guaranteed) if x]
    if len(chosen) != 1:
        raise UsageError("choose exactly one channel: --epsilon, --weights or --guaranteed")
    if args.epsilon is not None:
        try:
            eps = Fraction(args.epsilon)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--epsilon must be a rational number, got {args.epsilon!r}") from None
        return ChannelSpec("iid", epsilon=eps)
    if args.weights is not None:
        try:
            ws = tuple(int(x) for x in args.weights.split(","))
        except ValueError:
            raise UsageError("--weights must be a comma-separated list of integers") from None
        if any(w < 0 for w in ws):
            raise UsageError("weights must be nonnegative")
        return ChannelSpec("weights", weights=ws)
    return ChannelSpec("guaranteed", max_block_weight=args.max_weight, density=args.density)


def cmd_simulate(args) -> int:
    code = load_code(args.code)
    spec = _channel(args)
    report = run_trials(
        code, args.length, spec, args.trials, args.oracle, args.seed, args.parallel, args.erasure_mode
    )
    sys.stdout.write(report.to_text())
    if args.log:
        Path(args.log).write_text(report.log_tsv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pumcode", description="Arbitrary-rate PUM codes: construct, encode, decode, verify.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func, help_: str, io: bool = False):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--code", required=True, help="code-spec file (key=value lines)")
        if io:
            p.add_argument("--in", dest="input", required=True, help="input sequence file")
            p.add_argument("--out", help="output sequence file (default stdout)")
        p.set_defaults(func=func)
        return p

    add("construct", cmd_construct, "print the designed distance profile").add_argument(
        "--jmax", type=int, default=6
    )
    add("encode", cmd_encode, "encode an information file", io=True)
    p = add("decode", cmd_decode, "decode a received file", io=True)
    p.add_argument("--erasure-mode", choices=ERASURE_MODES, default="corrected")
    add("oracle-decode", cmd_oracle_decode, "exhaustive ML decoding (small codes)", io=True)
    add("verify-distances", cmd_verify_distances, "measure extended distances exhaustively").add_argument(
        "--jmax", type=int, default=6
    )
    p = add("bmd-check", cmd_bmd_check, "evaluate the BMD conditions for an error file")
    p.add_argument("--in", dest="input", required=True, help="error sequence file")
    p = add("simulate", cmd_simulate, "run seeded decoding trials")
    p.add_argument("--length", type=int, default=8, help="information blocks per frame")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", help="i.i.d. symbol error probability (rational)")
    p.add_argument("--weights", help="fixed per-block error weights, comma separated")
    p.add_argument("--guaranteed", action="store_true", help="patterns satisfying the sequence BMD condition")
    p.add_argument("--max-weight", type=int, default=None, help="per-block weight cap for --guaranteed")
    p.add_argument("--density", type=float, default=0.5, help="fraction of nonzero blocks for --guaranteed")
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--oracle", action="store_true", help="compare every trial with exhaustive ML decoding")
    p.add_argument("--erasure-mode", choices=ERASURE_MODES, default="corrected")
    p.add_argument("--log", help="write a tab-separated per-trial log here")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jmax", 1) < 1:
            raise UsageError("--jmax must be >= 1")
        for attr in ("trials", "length", "parallel"):
            if getattr(args, attr, 1) < (0 if attr == "trials" else 1):
                raise UsageError(f"--{attr} out of range")
        for attr in ("code", "input"):
            path = getattr(args, attr, None)
            if path is not None and not Path(path).is_file():
                raise UsageError(f"no such file: {path}")
        return args.func(args)
    except (ValueError, OSError, ScaleGuardError, SamplingError) as exc:
        # bad input, unreadable file, or a request beyond the oracle's limits
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - stable exit code for anything unexpected
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

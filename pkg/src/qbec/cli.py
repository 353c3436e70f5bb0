"""Command-line interface.

Exit codes: 0 success, 1 domain or validation failure, 2 I/O or parse failure.
The default tolerance can be set with ``QBEC_TOLERANCE``; ``--tolerance``
takes precedence.
"""

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import io as qio
from .acceptance import run_all
from .beconstruct import construct
from .channels import KrausChannel, choi, verify
from .errors import OutOfRange, QbecError, StateValidationError
from .examples import channel_a_closed_form, channel_alpha, rho_a, sigma_alpha
from .linalg import max_abs
from .states import BipartiteState, analyze, swap

DEFAULT_TOLERANCE = 1e-10
DEFAULT_CUTOFF = 1e-10
DEFAULT_SEED = 42
ENV_TOLERANCE = "QBEC_TOLERANCE"

EXAMPLES = {
    "sigma-alpha": sigma_alpha,
    "channel-alpha": channel_alpha,
    "rho-a": rho_a,
    "channel-a": channel_a_closed_form,
}


class CliExit(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _env_tolerance():
    raw = os.environ.get(ENV_TOLERANCE)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise CliExit(2, f"{ENV_TOLERANCE}={raw!r} is not a number") from None


def resolve_tolerance(args, fallback=DEFAULT_TOLERANCE):
    if args.tolerance is not None:
        return args.tolerance
    env = _env_tolerance()
    return fallback if env is None else env


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _load(path, kind):
    try:
        obj = qio.read(path)
    except QbecError as exc:
        raise CliExit(2, f"{path}: {exc}") from None
    if kind == "state" and not isinstance(obj, BipartiteState):
        raise CliExit(2, f"{path}: field 'kind': expected 'state'")
    if kind == "channel" and not isinstance(obj, KrausChannel):
        raise CliExit(2, f"{path}: field 'kind': expected 'channel'")
    return obj


def _emit(obj, out):
    if out:
        qio.write(out, obj)
    else:
        sys.stdout.write(qio.dumps(obj))


def _print_record(record: dict, as_json: bool):
    if as_json:
        print(json.dumps(record))
        return
    width = max(len(k) for k in record)
    for k, v in record.items():
        print(f"{k:<{width}}  {v}")


def report_to_dict(report) -> dict:
    return {
        "trace": report.trace,
        "min_eigenvalue": report.min_eigenvalue,
        "reduction_a": qio.matrix_to_lists(report.reduction_a),
        "reduction_b": qio.matrix_to_lists(report.reduction_b),
        "pt_min_eigenvalue": report.pt_min_eigenvalue,
        "negativity": report.negativity,
        "realignment_value": report.realignment_value,
        "verdict": report.verdict.value,
    }


def cmd_analyze(args):
    tol = resolve_tolerance(args)
    state = _load(args.path, "state")
    try:
        state.validate(tol)
    except StateValidationError as exc:
        raise CliExit(1, f"invalid state: {exc}") from None
    report = analyze(state, tol)
    record = report_to_dict(report)
    if not args.json:
        for key in ("reduction_a", "reduction_b"):
            text = np.array2string(getattr(report, key), precision=6, suppress_small=True)
            record[key] = " ".join(text.split())
    _print_record(record, args.json)
    return 0


def cmd_state_to_channel(args):
    tol = resolve_tolerance(args)
    state = _load(args.path, "state")
    try:
        state.validate(tol)
    except StateValidationError as exc:
        raise CliExit(1, f"invalid state: {exc}") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        c = construct(state, args.side, args.cutoff)
    for w in caught:
        _warn(w.message)
    ch = c.channel
    check = verify(ch, tol)
    sigma = c.filtered.sigma
    target = sigma.rho if c.side == "A" else swap(sigma).rho
    record = {
        "side": c.side,
        "rank": c.filtered.r,
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus_count": len(ch),
        "cp": check.cp,
        "tp": check.tp,
        "tp_defect": check.tp_defect,
        "choi_min_eig": check.choi_min_eig,
        "choi_error": max_abs(choi(ch).rho - target),
    }
    _emit(ch, args.out)
    _print_record(record, args.json)
    if not (check.cp and check.tp):
        raise CliExit(1, "channel verification failed")
    return 0


def cmd_channel_to_state(args):
    tol = resolve_tolerance(args)
    ch = _load(args.path, "channel")
    c = choi(ch)
    if ch.tp_defect > tol:
        _warn(f"channel is not trace preserving; Choi trace = {c.trace:.17g}")
    _emit(BipartiteState(c.rho, c.dim_a, c.dim_b), args.out)
    return 0


def cmd_example(args):
    try:
        obj = EXAMPLES[args.name](args.param)
    except OutOfRange as exc:
        raise CliExit(1, str(exc)) from None
    _emit(obj, args.out)
    return 0


def cmd_verify_paper(args):
    tol = resolve_tolerance(args, fallback=None)
    rows = run_all(tol, args.seed)
    if args.json:
        print(json.dumps([r.__dict__ for r in rows]))
    else:
        width = max(len(r.title) for r in rows)
        for r in rows:
            mark = "PASS" if r.passed else "FAIL"
            print(f"[{mark}] {r.key}. {r.title:<{width}}  {r.detail}")
    failing = [r.key for r in rows if not r.passed]
    if failing:
        raise CliExit(1, f"failing checks: {', '.join(failing)}")
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None,
                        help=f"numerical tolerance (default {DEFAULT_TOLERANCE:g}, env {ENV_TOLERANCE})")
    common.add_argument("--cutoff", type=float, default=DEFAULT_CUTOFF,
                        help="support cutoff relative to the largest eigenvalue")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON")

    parser = argparse.ArgumentParser(prog="qbec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="witness report for a state file")
    p.add_argument("path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("state-to-channel", parents=[common],
                       help="build the trace-preserving channel of a state")
    p.add_argument("path")
    p.add_argument("--side", choices=["A", "B", "a", "b"], default="A")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_state_to_channel)

    p = sub.add_parser("channel-to-state", parents=[common], help="Choi state of a channel file")
    p.add_argument("path")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_channel_to_state)

    p = sub.add_parser("example", parents=[common], help="write a closed-form example object")
    p.add_argument("name", choices=sorted(EXAMPLES))
    p.add_argument("param", type=float)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("verify-paper", parents=[common], help="run the reproduction checks")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

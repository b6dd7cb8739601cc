"""``fpda`` command-line front end.

::

    fpda configure --function FIR --coeffs taps.txt --format Q1.15/sat
    fpda run --in x.raw --out y.raw
    fpda report
    fpda verify --seed 42 --threads 4

``configure`` validates the request against a fresh fabric and writes a
``key=value`` state file (``fpda.state`` by default); ``run`` rebuilds the
fabric from it.  Errors print one line, ``fpda: error: <kind>: <message>``,
and exit nonzero.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import FpdaError
from .filters import load_coefficients
from .fixed import Q15, CFx, FxFormat
from .modules import TABLE_ORDER
from .reconfig import CONTROL_ORDER, Fabric, Function, function_inventory, pool_requirement
from .signals import Channel, SignalFrame, read_signal, write_signal
from .verify import format_results, run_suite

DEFAULT_STATE = "fpda.state"
DEFAULT_SEED = 42
USAGE_EXIT = 2
ERROR_EXIT = 1

_STATE_KEYS = ("function", "format", "taps", "points", "levels", "coeffs", "feedback_coeffs", "highpass_coeffs")


class UsageError(Exception):
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _function(text: str) -> Function:
    try:
        return Function(text.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown function {text!r}") from None


def _format(text: str) -> FxFormat:
    try:
        return FxFormat.parse(text)
    except FpdaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _env_seed() -> int:
    raw = os.environ.get("FPDA_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"FPDA_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fpda", description="Reconfigurable distributed-arithmetic DSP fabric simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("configure", help="validate a function configuration and write a state file")
    c.add_argument("--function", type=_function, required=True, help="FIR, IIR, DWT, FFT or DCT")
    c.add_argument("--taps", type=int, help="tap count for a default lowpass (FIR/IIR)")
    c.add_argument("--points", type=int, help="FFT size: 2, 4, 8 or 16")
    c.add_argument("--coeffs", type=Path, help="coefficient file: FIR taps, IIR forward taps, DWT lowpass")
    c.add_argument("--feedback-coeffs", type=Path, help="IIR feedback taps b[1..]")
    c.add_argument("--highpass-coeffs", type=Path, help="DWT highpass taps")
    c.add_argument("--levels", type=int, help="DWT pyramid depth")
    c.add_argument("--format", type=_format, default=Q15, help="sample format, e.g. Q1.15/sat")
    c.add_argument("--state", type=Path, default=Path(DEFAULT_STATE))

    r = sub.add_parser("run", help="stream a signal file through the configured fabric")
    r.add_argument("--in", dest="inp", type=Path, required=True)
    r.add_argument("--out", type=Path, required=True)
    r.add_argument("--state", type=Path, default=Path(DEFAULT_STATE))

    rep = sub.add_parser("report", help="print module counts per function and the shared pool")
    rep.add_argument("--function", type=_function, action="append",
                     help="function to include (repeatable); default all five")

    v = sub.add_parser("verify", help="run the seeded oracle-comparison suite")
    v.add_argument("--seed", type=int, default=None, help="default: $FPDA_SEED or 42")
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--out", type=Path, help="also write the report here")
    return p


# ------------------------------------------------------------------ state


def write_state(path: Path, fields: dict):
    lines = ["# fpda fabric state"]
    lines += [f"{k}={fields[k]}" for k in _STATE_KEYS if k in fields]
    path.write_text("\n".join(lines) + "\n")


def read_state(path: Path) -> dict:
    if not path.exists():
        raise UsageError(f"no state file {path}; run 'fpda configure' first")
    fields = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or key not in _STATE_KEYS:
            raise UsageError(f"{path}: bad state line {line!r}")
        fields[key] = value
    if "function" not in fields:
        raise UsageError(f"{path}: no function")
    return fields


def configuration_params(fields: dict) -> tuple[Function, dict]:
    """Fabric ``configure`` keyword arguments from state-file fields."""
    f = Function(fields["function"])
    fmt = FxFormat.parse(fields.get("format", str(Q15)))
    params: dict = {"format": fmt}
    coeffs = fields.get("coeffs")
    if f is Function.FIR:
        params["taps"] = load_coefficients(coeffs, fmt) if coeffs else int(fields.get("taps", 16))
    elif f is Function.IIR:
        params["a"] = load_coefficients(coeffs, fmt) if coeffs else int(fields.get("taps", 16))
        if fields.get("feedback_coeffs"):
            params["b"] = load_coefficients(fields["feedback_coeffs"], fmt)
    elif f is Function.DWT:
        if coeffs:
            params["h0"] = load_coefficients(coeffs, fmt)
        if fields.get("highpass_coeffs"):
            params["h1"] = load_coefficients(fields["highpass_coeffs"], fmt)
        params["levels"] = int(fields.get("levels", 1))
    elif f is Function.FFT:
        params["points"] = int(fields.get("points", 16))
    return f, params


def _configured_fabric(fields: dict) -> Fabric:
    try:
        f, params = configuration_params(fields)
    except ValueError as exc:
        raise UsageError(f"bad state value: {exc}") from None
    fabric = Fabric()
    fabric.configure(f, **params)
    return fabric


# --------------------------------------------------------------- commands


def cmd_configure(args) -> int:
    fields = {
        "function": args.function.value,
        "format": str(args.format),
        "taps": args.taps,
        "points": args.points,
        "levels": args.levels,
        "coeffs": args.coeffs and args.coeffs.resolve(),
        "feedback_coeffs": args.feedback_coeffs and args.feedback_coeffs.resolve(),
        "highpass_coeffs": args.highpass_coeffs and args.highpass_coeffs.resolve(),
    }
    fields = {k: str(v) for k, v in fields.items() if v is not None}
    fabric = _configured_fabric(fields)
    write_state(args.state, fields)
    cfg = fabric.active
    print(f"function     {cfg.function}")
    print(f"control      {cfg.control}")
    print(f"state        {args.state}")
    print(f"inventory    {_inventory_line(cfg.inventory)}")
    return 0


def _level_path(out: Path, level: int) -> Path:
    return out if level == 1 else out.with_name(f"{out.name}.L{level}")


def cmd_run(args) -> int:
    fabric = _configured_fabric(read_state(args.state))
    frame = read_signal(args.inp)
    outputs, report = fabric.run(frame)
    cfg = fabric.active
    dp = cfg.datapath
    if cfg.function is Function.DWT:
        for j, pairs in enumerate(outputs, 1):
            fmt = cfg.state["stages"][j - 1].out_fmt
            samples = [CFx(lo, hi) for lo, hi in pairs]
            write_signal(_level_path(args.out, j), SignalFrame(samples, fmt, Channel.PAIR))
    elif cfg.function is Function.FFT:
        write_signal(args.out, SignalFrame(outputs, dp.work_fmt, Channel.COMPLEX))
    else:
        write_signal(args.out, SignalFrame(outputs, dp.out_fmt, Channel.REAL))
    text = report.to_text()
    args.out.with_name(args.out.name + ".report").write_text(text)
    sys.stdout.write(text)
    return 0


def _inventory_line(inv) -> str:
    return " ".join(f"{k.value}={inv[k]}" for k in TABLE_ORDER if inv[k])


def report_table(functions) -> str:
    funcs = [f for f in CONTROL_ORDER if f in set(functions)]
    cols = list(TABLE_ORDER)
    width = max(len(k.value) for k in cols) + 2
    lines = [f"{'Function':<10}" + "".join(f"{k.value:>{width}}" for k in cols)]
    rows = [(f.value, function_inventory(f)) for f in funcs]
    rows.append(("Combined", pool_requirement(funcs)))
    for name, inv in rows:
        lines.append(f"{name:<10}" + "".join(f"{(inv[k] or '-'):>{width}}" for k in cols))
    return "\n".join(lines) + "\n"


def cmd_report(args) -> int:
    sys.stdout.write(report_table(args.function or list(Function)))
    return 0


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    results = run_suite(seed, args.threads)
    text = format_results(seed, results)
    if args.out:
        args.out.write_text(text)
    sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else ERROR_EXIT


COMMANDS = {"configure": cmd_configure, "run": cmd_run, "report": cmd_report, "verify": cmd_verify}


def _one_line(text) -> str:
    return " ".join(str(text).split())


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fpda: error: usage: {_one_line(exc)}", file=sys.stderr)
        return USAGE_EXIT
    except FpdaError as exc:
        print(f"fpda: error: {exc.kind}: {_one_line(exc)}", file=sys.stderr)
        return ERROR_EXIT
    except OSError as exc:
        print(f"fpda: error: io: {_one_line(exc)}", file=sys.stderr)
        return ERROR_EXIT
    except Exception as exc:  # keep the one-line contract even for bugs
        print(f"fpda: error: internal: {type(exc).__name__}: {_one_line(exc)}", file=sys.stderr)
        return ERROR_EXIT


if __name__ == "__main__":
    sys.exit(main())

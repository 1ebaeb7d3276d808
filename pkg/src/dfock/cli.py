"""Command-line front end.

    dfock figure <1..8> [--mode exact|diagonal] [--cutoff N] [--out FILE]
                        [--format csv|json] [--range LO:HI:STEPS]
    dfock sweep --kind cs|ss --label RE[,IM] --axis l1|l2 --range LO:HI:STEPS
                --fixed V[,V...] --observable dx2|dp2|Q|q [--mode ...]
    dfock validate --suite algebra|basis|states|stats [--grid L1LO:L1HI:N,L2LO:L2HI:N]

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical-domain
error.  An optional key=value config file (--config) mirrors the long flags;
explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext

import numpy as np

from .errors import DfockError, UsageError
from .fock import DEFAULT_CUTOFF, DeformationParams
from .states import StateKind
from .statistics import EvalMode
from .sweeps import (
    Observable,
    SweepAxis,
    SweepSpec,
    ValidationSuite,
    iter_rows,
    run_figure,
    run_validate,
    write_csv,
    write_json,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_MODES = {"exact": EvalMode.EXACT, "diagonal": EvalMode.BASIS_DIAGONAL}
_KINDS = {"cs": StateKind.COHERENT, "ss": StateKind.SQUEEZED}
_OBSERVABLES = {o.value: o for o in Observable}


def _parse_range(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, steps = text.split(":")
        return float(lo), float(hi), int(steps)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}, expected LO:HI:STEPS") from exc


def _parse_label(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad state label {text!r}, expected RE[,IM]") from exc
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise UsageError(f"bad state label {text!r}, expected RE[,IM]")


def _parse_grid(text: str) -> list[DeformationParams]:
    try:
        part1, part2 = text.split(",")
        lo1, hi1, n1 = part1.split(":")
        lo2, hi2, n2 = part2.split(":")
        l1s = np.linspace(float(lo1), float(hi1), int(n1))
        l2s = np.linspace(float(lo2), float(hi2), int(n2))
    except ValueError as exc:
        raise UsageError(
            f"bad grid {text!r}, expected L1LO:L1HI:N,L2LO:L2HI:N"
        ) from exc
    return [DeformationParams(float(a), float(b)) for a in l1s for b in l2s]


def _load_config(path: str) -> dict[str, str]:
    """key=value lines; '#' starts a comment; keys use the long-flag names."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "range":  # argparse stores --range under sweep_range
                key = "sweep_range"
            values[key] = value.strip("\"'")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dfock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mode", choices=sorted(_MODES))
        p.add_argument("--cutoff", type=int)
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--config")

    p_fig = sub.add_parser("figure", help="run a preset figure sweep")
    p_fig.add_argument("figure_id", type=int, choices=range(1, 9), metavar="1..8")
    p_fig.add_argument("--range", dest="sweep_range")
    common(p_fig)

    p_sweep = sub.add_parser("sweep", help="run a custom single-axis sweep")
    p_sweep.add_argument("--kind", choices=sorted(_KINDS))
    p_sweep.add_argument("--label")
    p_sweep.add_argument("--axis", choices=["l1", "l2"])
    p_sweep.add_argument("--range", dest="sweep_range")
    p_sweep.add_argument("--fixed")
    p_sweep.add_argument("--observable", choices=sorted(_OBSERVABLES))
    common(p_sweep)

    p_val = sub.add_parser("validate", help="run an invariant suite")
    p_val.add_argument("--suite", choices=[s.value for s in ValidationSuite])
    p_val.add_argument("--grid")
    p_val.add_argument("--cutoff", type=int)
    p_val.add_argument("--out")
    p_val.add_argument("--config")
    return parser


def _resolve(args: argparse.Namespace, key: str, default=None):
    """Flag if given, else config value, else default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    config = getattr(args, "_config_values", {})
    if key in config:
        return config[key]
    return default


def _emit(spec: SweepSpec, rows, out: str | None, fmt: str) -> None:
    ctx = open(out, "w", encoding="utf-8") if out else nullcontext(sys.stdout)
    with ctx as stream:
        if fmt == "json":
            write_json(spec, rows, stream)
        else:
            write_csv(spec, rows, stream)


def _cmd_figure(args) -> int:
    mode = _MODES[_resolve(args, "mode", "diagonal")]
    cutoff = _resolve(args, "cutoff")  # None keeps the preset's own cutoff
    fmt = _resolve(args, "format", "csv")
    rng = _resolve(args, "sweep_range")
    spec, rows = run_figure(
        args.figure_id,
        mode=mode,
        cutoff=int(cutoff) if cutoff is not None else None,
        sweep_range=_parse_range(rng) if rng else None,
    )
    _emit(spec, rows, _resolve(args, "out"), fmt)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    kind = _resolve(args, "kind")
    label = _resolve(args, "label")
    axis = _resolve(args, "axis")
    rng = _resolve(args, "sweep_range")
    fixed = _resolve(args, "fixed")
    observable = _resolve(args, "observable")
    missing = [
        name
        for name, value in (
            ("--kind", kind), ("--label", label), ("--axis", axis),
            ("--range", rng), ("--fixed", fixed), ("--observable", observable),
        )
        if value is None
    ]
    if missing:
        raise UsageError(f"missing required options: {', '.join(missing)}")
    try:
        fixed_values = tuple(float(v) for v in str(fixed).split(","))
    except ValueError as exc:
        raise UsageError(f"bad fixed values {fixed!r}") from exc
    spec = SweepSpec(
        state_kind=_KINDS[kind],
        state_label=_parse_label(str(label)),
        sweep_axis=SweepAxis(axis),
        sweep_range=_parse_range(str(rng)),
        fixed_values=fixed_values,
        observable=_OBSERVABLES[observable],
        mode=_MODES[_resolve(args, "mode", "diagonal")],
        cutoff=int(_resolve(args, "cutoff", DEFAULT_CUTOFF)),
    )
    _emit(spec, iter_rows(spec), _resolve(args, "out"), _resolve(args, "format", "csv"))
    return EXIT_OK


def _cmd_validate(args) -> int:
    suite_name = _resolve(args, "suite")
    if suite_name is None:
        raise UsageError("missing required option: --suite")
    grid_text = _resolve(args, "grid")
    report = run_validate(
        ValidationSuite(suite_name),
        grid=_parse_grid(grid_text) if grid_text else None,
        cutoff=int(_resolve(args, "cutoff", DEFAULT_CUTOFF)),
    )
    payload = {
        "suite": report.suite.value,
        "passed": report.passed,
        "entries": [
            {
                "name": e.name,
                "lambda1": e.lambda1,
                "lambda2": e.lambda2,
                "residual": e.residual,
                "tol": e.tol,
                "passed": e.passed,
            }
            for e in report.entries
        ],
    }
    out = _resolve(args, "out")
    ctx = open(out, "w", encoding="utf-8") if out else nullcontext(sys.stdout)
    with ctx as stream:
        json.dump(payload, stream, indent=2)
        stream.write("\n")
    return EXIT_OK if report.passed else EXIT_VALIDATION


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config_path = getattr(args, "config", None)
        args._config_values = _load_config(config_path) if config_path else {}
        if args.command == "figure":
            return _cmd_figure(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_validate(args)
    except UsageError as exc:
        print(f"dfock: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DfockError as exc:
        print(f"dfock: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"dfock: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

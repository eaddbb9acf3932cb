"""Command-line front end: ``xy-entropy {entropy,converge,detcheck,sweep,spectrum}``.

Exit status is 0 on success, 2 when the parameters hit a phase boundary or
an excluded spectral point, and 1 for every other failure.  Diagnostics go
to stderr; results go to stdout or to ``--out``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import load_settings
from .errors import XYEntropyError
from .harness import (
    ASYMPTOTIC_METHODS,
    DETCHECK_FIELDS,
    DEFAULT_L_EXACT,
    ENTROPY_METHODS,
    OutputFormat,
    SweepSpec,
    convergence_study,
    determinant_check,
    compute_row,
    render,
    rows_to_csv,
    write_atomic,
    write_sweep,
)
from .model import ModelParams
from .results import Method
from .spectrum import binary_entropy, build_B, spectrum_nu

METHOD_NAMES = {
    "exact": Method.EXACT_FINITE_L,
    "series": Method.SERIES,
    "integral": Method.INTEGRAL,
    "closed": Method.CLOSED_FORM,
}


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for phase-boundary rejections
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _grid(tokens: list[str]) -> tuple[float, ...]:
    """Expand grid tokens: plain numbers, or ``lin:start:stop:num``."""
    out: list[float] = []
    for tok in tokens:
        for part in tok.split(","):
            if part.startswith("lin:"):
                a, b, n = part[4:].split(":")
                out.extend(np.linspace(float(a), float(b), int(n)).tolist())
            elif part:
                out.append(float(part))
    return tuple(out)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value settings file (default: $XY_ENTROPY_CONFIG)")
    p.add_argument("--eps-phase", type=float, help="exclusion half-width around the phase boundaries")
    p.add_argument("--tau0-min", type=float, help="smallest tau0 handled by the theta series")
    p.add_argument("--quad-tol", type=float, help="period quadrature tolerance")
    p.add_argument("--format", choices=[f.value for f in OutputFormat], default="csv")
    p.add_argument("--out", type=Path, help="write to this file instead of stdout")


def _add_point(p: argparse.ArgumentParser, multi: bool = False):
    if multi:
        p.add_argument("--gamma", nargs="+", required=True, help="values or lin:start:stop:num")
        p.add_argument("--h", nargs="+", required=True, help="values or lin:start:stop:num")
    else:
        p.add_argument("--gamma", type=float, required=True)
        p.add_argument("--h", type=float, required=True)


def _add_methods(p: argparse.ArgumentParser):
    p.add_argument("--method", action="append", choices=sorted(METHOD_NAMES), default=[])
    p.add_argument("--all", action="store_true", help="run all four entropy routes")
    for name in METHOD_NAMES:
        p.add_argument(f"--{name}", dest="method", action="append_const", const=name)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xy-entropy", description="Block entanglement entropy of the XY chain.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", help="entropy at one (gamma, h) point")
    _add_point(p)
    _add_methods(p)
    p.add_argument("--L", type=int, help=f"block length for the exact route (default {DEFAULT_L_EXACT})")
    _add_common(p)

    p = sub.add_parser("converge", help="exact entropy versus L against the L -> inf limit")
    _add_point(p)
    p.add_argument("--L", type=int, default=64, help="largest block length")
    _add_common(p)

    p = sub.add_parser("detcheck", help="ln|D_L(lambda)| exact, asymptotic and Fredholm")
    _add_point(p)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--lambda-re", type=float, required=True)
    p.add_argument("--lambda-im", type=float, default=0.0)
    p.add_argument("--N", type=int, default=512, help="Nystrom nodes")
    _add_common(p)

    p = sub.add_parser("sweep", help="rectangular (gamma, h) grid to CSV or JSON")
    _add_point(p, multi=True)
    _add_methods(p)
    p.add_argument("--L", type=int, help="block length for the exact route")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_common(p)

    p = sub.add_parser("spectrum", help="dump the nu_m of B_L")
    _add_point(p)
    p.add_argument("--L", type=int, required=True)
    _add_common(p)
    return parser


def _settings(args):
    return load_settings(args.config, eps_phase=args.eps_phase, tau0_min=args.tau0_min, quad_tol=args.quad_tol)


def _methods(args) -> tuple[Method, ...]:
    if args.all:
        return ENTROPY_METHODS
    if not args.method:
        return ASYMPTOTIC_METHODS
    chosen = {METHOD_NAMES[m] for m in args.method}
    return tuple(m for m in ENTROPY_METHODS if m in chosen)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def _table(rows: list[dict], fields, fmt: OutputFormat, meta: dict | None = None) -> str:
    if fmt is OutputFormat.JSON:
        payload = {"version": __version__, **(meta or {}), "rows": rows} if meta is not None else rows
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"
    text = rows_to_csv(rows, fields)
    if meta:
        head, rest = text.split("\n", 1)
        extra = "".join(f"# {k}={v!r}\n" if isinstance(v, float) else f"# {k}={v}\n" for k, v in meta.items())
        text = head + "\n" + extra + rest
    return text


def cmd_entropy(args) -> int:
    row = compute_row(args.gamma, args.h, _methods(args), args.L, _settings(args))
    _emit(render([row], OutputFormat(args.format)), args.out)
    return 0


def cmd_converge(args) -> int:
    study = convergence_study(args.gamma, args.h, args.L, _settings(args))
    meta = {
        "S_inf": study.S_inf,
        "fitted_slope": study.slope,
        "reference_slope": study.reference_slope,
        "fit_points": study.fit_points,
    }
    fields = ("L", "S_L", "S_inf", "delta", "above_floor")
    _emit(_table(study.rows(), fields, OutputFormat(args.format), meta), args.out)
    return 0


def cmd_detcheck(args) -> int:
    check = determinant_check(
        args.gamma, args.h, complex(args.lambda_re, args.lambda_im), args.L, args.N, _settings(args)
    )
    if check.note:
        print(f"note: {check.note}", file=sys.stderr)
    _emit(_table([check.as_dict()], DETCHECK_FIELDS, OutputFormat(args.format)), args.out)
    return 0


def cmd_sweep(args) -> int:
    settings = _settings(args)
    out = args.out or Path(f"sweep.{args.format}")
    spec = SweepSpec(
        _grid(args.gamma), _grid(args.h), _methods(args), args.L, out, OutputFormat(args.format), settings
    )
    rows = write_sweep(spec, args.jobs)
    skipped = sum(r.status.startswith("skipped") for r in rows)
    bad = sum(r.status not in ("ok",) and not r.status.startswith("skipped") for r in rows)
    print(f"wrote {len(rows)} rows to {out} ({skipped} skipped, {bad} not ok)", file=sys.stderr)
    return 0


def cmd_spectrum(args) -> int:
    settings = _settings(args)
    nu = spectrum_nu(build_B(args.L, ModelParams(args.gamma, args.h), settings.L_max)).nu
    rows = [{"m": m, "nu": float(v), "H": float(binary_entropy(v))} for m, v in enumerate(nu)]
    _emit(_table(rows, ("m", "nu", "H"), OutputFormat(args.format)), args.out)
    return 0


COMMANDS = {
    "entropy": cmd_entropy,
    "converge": cmd_converge,
    "detcheck": cmd_detcheck,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except XYEntropyError as exc:
        print(f"xy-entropy {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"xy-entropy {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

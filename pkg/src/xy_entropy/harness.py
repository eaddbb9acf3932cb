"""Point evaluation, convergence and determinant studies, and sweep files.

Everything here is plumbing around the numerical modules: it decides which
routes to run, collects their values into flat rows and serialises them.
"""

from __future__ import annotations

import contextlib
import csv
import enum
import io
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .asymptotics import compute_moduli, det_asymptotic, entropy_closed, entropy_integral, entropy_series
from .config import Settings
from .errors import OutputError, PhaseBoundaryError, XYEntropyError
from .fredholm import KernelSpec, fredholm_det
from .model import ModelParams, classify
from .results import Method
from .spectrum import build_B, entropy_exact, log_det_exact, spectrum_nu

HEADER_COMMENT = f"# xy-entropy v{__version__}"
FIELDS = (
    "gamma",
    "h",
    "case_label",
    "sigma",
    "tau0",
    "k",
    "S_exact_L",
    "S_series",
    "S_integral",
    "S_closed",
    "max_pairwise_delta",
    "status",
)
DEFAULT_L_EXACT = 64
FREDHOLM_L_MAX = 8
# deltas below this are roundoff in entropy_exact and carry no rate information
NOISE_FLOOR = 1e-11

ENTROPY_METHODS = (Method.EXACT_FINITE_L, Method.SERIES, Method.INTEGRAL, Method.CLOSED_FORM)
ASYMPTOTIC_METHODS = (Method.SERIES, Method.INTEGRAL, Method.CLOSED_FORM)

_number = {"type": ["number", "null"]}
ROW_SCHEMA = {
    "type": "object",
    "properties": {
        "gamma": {"type": "number"},
        "h": {"type": "number"},
        "case_label": {"type": ["string", "null"], "enum": ["1a", "1b", "2", None]},
        "sigma": {"type": ["integer", "null"], "enum": [0, 1, None]},
        "tau0": _number,
        "k": _number,
        "S_exact_L": _number,
        "S_series": _number,
        "S_integral": _number,
        "S_closed": _number,
        "max_pairwise_delta": _number,
        "status": {"type": "string", "pattern": r"^(ok|mismatch|skipped:phase-boundary|error:\w+)$"},
    },
    "required": list(FIELDS),
    "additionalProperties": False,
}
SWEEP_SCHEMA = {"type": "array", "items": ROW_SCHEMA}


class OutputFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class ResultRow:
    gamma: float
    h: float
    case_label: str | None = None
    sigma: int | None = None
    tau0: float | None = None
    k: float | None = None
    S_exact_L: float | None = None
    S_series: float | None = None
    S_integral: float | None = None
    S_closed: float | None = None
    max_pairwise_delta: float | None = None
    status: str = "ok"

    def as_dict(self) -> dict:
        return {name: _clean(getattr(self, name)) for name in FIELDS}


def _clean(value):
    if isinstance(value, np.integer):
        value = int(value)
    elif isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@dataclass(frozen=True)
class SweepSpec:
    """A rectangular (gamma, h) sweep.

    Attributes
    ----------
    gamma_grid, h_grid : tuple of float
        Non-empty grids; rows come out gamma-major.
    methods : tuple of Method
        Entropy routes to run at each point.
    L_exact : int or None
        Block length for the finite-L route (default ``DEFAULT_L_EXACT``).
    output : Path
        Destination file.
    fmt : OutputFormat
    """

    gamma_grid: tuple
    h_grid: tuple
    methods: tuple = ASYMPTOTIC_METHODS
    L_exact: int | None = None
    output: Path = Path("sweep.csv")
    fmt: OutputFormat = OutputFormat.CSV
    settings: Settings = field(default_factory=Settings)

    def __post_init__(self):
        if not self.gamma_grid or not self.h_grid:
            raise XYEntropyError("sweep grids must be non-empty")
        if not self.methods:
            raise XYEntropyError("at least one method is required")

    def points(self) -> list[tuple[float, float]]:
        return [(float(g), float(h)) for g in self.gamma_grid for h in self.h_grid]


def max_pairwise_delta(values: Iterable[float | None]) -> float | None:
    vals = [v for v in values if v is not None]
    if len(vals) < 2:
        return None
    return max(vals) - min(vals)


def compute_row(
    gamma: float,
    h: float,
    methods: Sequence[Method] = ASYMPTOTIC_METHODS,
    L_exact: int | None = None,
    settings: Settings = Settings(),
) -> ResultRow:
    """Run the requested entropy routes at one point; library errors propagate."""
    params = ModelParams(gamma, h)
    regime = classify(params, settings.eps_phase)
    moduli = compute_moduli(regime, params, settings.quad_tol)
    row = {
        "gamma": float(gamma),
        "h": float(h),
        "case_label": regime.case.value,
        "sigma": regime.sigma,
        "tau0": moduli.tau0,
        "k": moduli.k,
    }
    if Method.EXACT_FINITE_L in methods:
        L = DEFAULT_L_EXACT if L_exact is None else L_exact
        row["S_exact_L"] = entropy_exact(L, params, settings.L_max).value
    if Method.SERIES in methods:
        row["S_series"] = entropy_series(moduli, regime.sigma, settings.tau0_min).value
    if Method.INTEGRAL in methods:
        row["S_integral"] = entropy_integral(moduli, regime.sigma, settings.tau0_min).value
    if Method.CLOSED_FORM in methods:
        row["S_closed"] = entropy_closed(params, regime).value

    delta = max_pairwise_delta(row.get(k) for k in ("S_exact_L", "S_series", "S_integral", "S_closed"))
    status = "ok" if delta is None or delta < settings.agree_tol else "mismatch"
    return ResultRow(**row, max_pairwise_delta=delta, status=status)


def evaluate_point(
    gamma: float,
    h: float,
    methods: Sequence[Method] = ASYMPTOTIC_METHODS,
    L_exact: int | None = None,
    settings: Settings = Settings(),
) -> ResultRow:
    """:func:`compute_row` with failures folded into ``status``.

    A sweep therefore never aborts on a single bad point.
    """
    try:
        return compute_row(gamma, h, methods, L_exact, settings)
    except PhaseBoundaryError:
        return ResultRow(float(gamma), float(h), status="skipped:phase-boundary")
    except XYEntropyError as exc:
        return ResultRow(float(gamma), float(h), status=f"error:{type(exc).__name__}")


def _evaluate_star(args):
    return evaluate_point(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[ResultRow]:
    """Evaluate every grid point; order is gamma-major whatever ``jobs`` is."""
    tasks = [(g, h, spec.methods, spec.L_exact, spec.settings) for g, h in spec.points()]
    if jobs <= 1:
        return [_evaluate_star(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_star, tasks))


# serialisation


def _format_cell(value) -> str:
    value = _clean(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: Iterable[ResultRow], fields: Sequence[str] = FIELDS) -> str:
    buf = io.StringIO()
    buf.write(HEADER_COMMENT + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        d = row.as_dict() if isinstance(row, ResultRow) else row
        writer.writerow([_format_cell(d.get(name)) for name in fields])
    return buf.getvalue()


def rows_to_json(rows: Iterable[ResultRow]) -> str:
    data = [row.as_dict() if isinstance(row, ResultRow) else row for row in rows]
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def render(rows: Sequence[ResultRow], fmt: OutputFormat) -> str:
    return rows_to_csv(rows) if fmt is OutputFormat.CSV else rows_to_json(rows)


def write_atomic(path: str | os.PathLike, text: str) -> Path:
    """Write ``text`` via a temporary file in the same directory and rename it.

    The destination either keeps its old content or gets the full new
    content; the temporary file is removed on any failure.
    """
    path = Path(path)
    tmp = None
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
        tmp = None
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    finally:
        if tmp is not None:
            with contextlib.suppress(OSError):
                os.unlink(tmp)
    return path


def write_sweep(spec: SweepSpec, jobs: int = 1) -> list[ResultRow]:
    rows = run_sweep(spec, jobs)
    write_atomic(spec.output, render(rows, spec.fmt))
    return rows


# convergence study


@dataclass(frozen=True)
class ConvergenceStudy:
    L: np.ndarray
    S_L: np.ndarray
    S_inf: float
    delta: np.ndarray
    slope: float
    reference_slope: float
    fit_points: int

    @property
    def relative_rate_error(self) -> float:
        return abs(self.slope - self.reference_slope) / abs(self.reference_slope)

    def rows(self) -> list[dict]:
        return [
            {"L": int(L), "S_L": float(s), "S_inf": self.S_inf, "delta": float(d), "above_floor": bool(d > NOISE_FLOOR)}
            for L, s, d in zip(self.L, self.S_L, self.delta)
        ]


def fit_decay_slope(L, delta, L_min: int = 8, floor: float = NOISE_FLOOR) -> tuple[float, int]:
    """Least-squares slope of ``ln delta`` against ``L`` over ``L >= L_min``, ``delta > floor``."""
    L = np.asarray(L, dtype=float)
    delta = np.asarray(delta, dtype=float)
    keep = (L >= L_min) & (delta > floor)
    if keep.sum() < 2:
        return math.nan, int(keep.sum())
    slope = np.polyfit(L[keep], np.log(delta[keep]), 1)[0]
    return float(slope), int(keep.sum())


def convergence_study(gamma: float, h: float, L_max: int = 64, settings: Settings = Settings()) -> ConvergenceStudy:
    """Exact entropies for ``L = 1..L_max`` against the series limit.

    The reference slope is ``-ln|lambda_C|``.
    """
    params = ModelParams(gamma, h)
    regime = classify(params, settings.eps_phase)
    moduli = compute_moduli(regime, params, settings.quad_tol)
    S_inf = entropy_series(moduli, regime.sigma, settings.tau0_min).value
    Ls = np.arange(1, L_max + 1)
    S_L = np.array([entropy_exact(int(L), params, settings.L_max).value for L in Ls])
    delta = np.abs(S_L - S_inf)
    slope, n = fit_decay_slope(Ls, delta)
    return ConvergenceStudy(Ls, S_L, S_inf, delta, slope, -math.log(abs(regime.lambdaC)), n)


# determinant check


@dataclass(frozen=True)
class DetCheck:
    gamma: float
    h: float
    lam: complex
    L: int
    N: int
    logabs_exact: float
    logabs_asymptotic: float
    logabs_fredholm: float | None
    note: str = ""

    def deltas(self) -> dict:
        out = {"exact_asymptotic": abs(self.logabs_exact - self.logabs_asymptotic)}
        if self.logabs_fredholm is not None:
            out["exact_fredholm"] = abs(self.logabs_exact - self.logabs_fredholm)
            out["asymptotic_fredholm"] = abs(self.logabs_asymptotic - self.logabs_fredholm)
        return out

    def as_dict(self) -> dict:
        d = self.deltas()
        return {
            "gamma": self.gamma,
            "h": self.h,
            "lambda_re": self.lam.real,
            "lambda_im": self.lam.imag,
            "L": self.L,
            "N": self.N,
            "logabs_exact": self.logabs_exact,
            "logabs_asymptotic": self.logabs_asymptotic,
            "logabs_fredholm": self.logabs_fredholm,
            "delta_exact_asymptotic": d["exact_asymptotic"],
            "delta_exact_fredholm": d.get("exact_fredholm"),
            "delta_asymptotic_fredholm": d.get("asymptotic_fredholm"),
            "note": self.note,
        }


DETCHECK_FIELDS = tuple(DetCheck(0.0, 0.0, 0j, 0, 0, 0.0, 0.0, None).as_dict())


def determinant_check(
    gamma: float, h: float, lam: complex, L: int, N: int = 512, settings: Settings = Settings()
) -> DetCheck:
    """``ln|D_L(lam)|`` from the spectrum, the asymptotic formula and, for ``L <= 8``, Nystrom."""
    params = ModelParams(gamma, h)
    regime = classify(params, settings.eps_phase)
    moduli = compute_moduli(regime, params, settings.quad_tol)
    lam = complex(lam)
    asym = det_asymptotic(lam, L, moduli, regime.sigma, tau0_min=settings.tau0_min)
    exact = log_det_exact(lam, spectrum_nu(build_B(L, params, settings.L_max)))
    fred, note = None, ""
    if L > FREDHOLM_L_MAX:
        note = f"fredholm column omitted for L > {FREDHOLM_L_MAX}"
    else:
        fred = math.log(abs(fredholm_det(KernelSpec(L, lam, params, N))))
    return DetCheck(float(gamma), float(h), lam, L, N, exact.logabs, asym.logabs, fred, note)

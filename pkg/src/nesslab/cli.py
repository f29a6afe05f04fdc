"""Command-line surface: figure data files and verification runs.

Every command resolves to one deterministic computation and one output
document, CSV (default) or JSON, on stdout or at ``--output``.  CSV cells
carry 17 significant digits so float64 values round-trip; JSON output is an
envelope ``{"command", "config", "result"}`` conforming to
``schemas/cli_output.schema.json``.  Identical invocations produce
byte-identical documents.

Exit codes: 0 success, 2 invalid configuration (including argument errors),
3 numerical failure (non-convergence, internal cross-checks, resource
caps), 4 oracle verification ran and failed.  Failures print a one-line
JSON error record to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, ThermalConfig, bound_state
from .ness import correlation_block, ti_commutator_element, ti_commutator_direct
from .numerics import QuadratureSpec
from .oracle import build_truncation, ness_estimate, oracle_flux
from .scattering import magnetic_correction
from .transport import (
    divergence_fit,
    flux_report,
    heat_flux,
)

_CORRECTION_POINTS = 801  # odd and divisible by 4 plus 1: hits 0 and +-pi/2


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation after parsing and per-command defaulting."""

    command: str
    beta_l: float
    beta_r: float
    lam: tuple[float, ...]
    nu: int
    tol: float
    oracle_m: int
    t_star: float
    window: int
    fmt: str
    output: str | None

    def thermal(self) -> ThermalConfig:
        return ThermalConfig(self.beta_l, self.beta_r)

    def single_lam(self) -> float:
        if len(self.lam) != 1:
            raise ValueError(f"{self.command} takes a single field strength, not a sweep")
        return self.lam[0]

    def echo(self) -> dict:
        return {
            "beta_l": self.beta_l,
            "beta_r": self.beta_r,
            "lambda": list(self.lam),
            "nu": self.nu,
            "tol": self.tol,
            "oracle_m": self.oracle_m,
            "t_star": self.t_star,
            "window": self.window,
        }


def _sweep(text: str) -> tuple[float, ...]:
    """Parse ``--lambda``: a float, or an inclusive ``min:max:step`` sweep."""
    parts = text.split(":")
    if len(parts) == 1:
        return (float(text),)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected FLOAT or MIN:MAX:STEP, got {text!r}")
    lo, hi, step = (float(p) for p in parts)
    if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(step)):
        raise argparse.ArgumentTypeError("sweep bounds and step must be finite")
    if step <= 0.0 or hi < lo:
        raise argparse.ArgumentTypeError("sweep needs step > 0 and max >= min")
    count = int(math.floor((hi - lo) / step + 0.5)) + 1
    # snap to the printed grid so e.g. -2:2:0.01 lands on 0 exactly
    return tuple(round(lo + i * step, 12) for i in range(count))


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nesslab",
        description="steady-state transport laboratory for the driven chain "
        "with a one-site field",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "correction": "transmission suppression profile over the band",
        "flux": "flux observables at one operating point",
        "flux-scan": "flux and entropy production over a field sweep",
        "dflux": "first and second flux derivatives over a field sweep",
        "ness-matrix": "steady-state correlation window",
        "spectrum": "bound-state data and truncated-eigensolve residuals",
        "ti-check": "translation-invariance defect, closed form vs matrix elements",
        "oracle-verify": "finite-lattice verification suite (exit 4 on failure)",
        "transition-fit": "log-divergence regression near zero field",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--beta-l", type=float, default=1.0)
        p.add_argument("--beta-r", type=float, default=2.0)
        p.add_argument("--lambda", dest="lam", type=_sweep, default=None,
                       help="field strength, or MIN:MAX:STEP sweep")
        p.add_argument("--nu", type=int, default=0, help="sample half-width")
        p.add_argument("--tol", type=float, default=1e-3,
                       help="comparison tolerance for oracle-verify")
        p.add_argument("--oracle-m", type=int, default=None,
                       help="truncation half-width for oracle commands")
        p.add_argument("--t-star", type=float, default=900.0,
                       help="late-time horizon for oracle commands")
        p.add_argument("--window", type=int, default=5,
                       help="half-width of the ness-matrix site window")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default=None, help="output path (default stdout)")
    return parser


_DEFAULT_LAM = {
    "flux-scan": tuple(round(-2.0 + i * 0.01, 12) for i in range(401)),
    "dflux": tuple(round(-2.0 + i * 0.01, 12) for i in range(401)),
}
_DEFAULT_ORACLE_M = {"spectrum": 1000, "oracle-verify": 1500}


def _config(ns: argparse.Namespace) -> RunConfig:
    lam = ns.lam
    if lam is None:
        lam = _DEFAULT_LAM.get(ns.command, (0.2,))
    oracle_m = ns.oracle_m
    if oracle_m is None:
        oracle_m = _DEFAULT_ORACLE_M.get(ns.command, 1000)
    return RunConfig(
        command=ns.command,
        beta_l=ns.beta_l,
        beta_r=ns.beta_r,
        lam=lam,
        nu=ns.nu,
        tol=ns.tol,
        oracle_m=oracle_m,
        t_star=ns.t_star,
        window=ns.window,
        fmt=ns.fmt,
        output=ns.output,
    )


# Each handler returns (json_result, csv_columns, csv_rows).


def _cmd_correction(cfg: RunConfig):
    lam = cfg.single_lam()
    grid = np.linspace(-math.pi, math.pi, _CORRECTION_POINTS)
    values = [magnetic_correction(lam, math.cos(k)) for k in grid]
    result = {"k": [float(k) for k in grid], "correction": values}
    return result, ["k", "correction"], list(zip(grid.tolist(), values))


def _cmd_flux(cfg: RunConfig):
    report = flux_report(ModelParams(cfg.single_lam(), cfg.nu), cfg.thermal())
    cols = ["lambda", "nu", "beta_l", "beta_r", "J", "sigma", "J_prime",
            "J_second", "quadrature_error"]
    row = (report.params.lam, report.params.nu, cfg.beta_l, cfg.beta_r,
           report.J, report.sigma, report.J_prime, report.J_second,
           report.quadrature_error)
    return report.to_dict(), cols, [row]


def _cmd_flux_scan(cfg: RunConfig):
    th = cfg.thermal()
    rows = []
    for lam in cfg.lam:
        j = heat_flux(ModelParams(lam, cfg.nu), th)
        rows.append((lam, j, (th.beta_r - th.beta_l) * j))
    result = {
        "lambda": [r[0] for r in rows],
        "J": [r[1] for r in rows],
        "sigma": [r[2] for r in rows],
    }
    return result, ["lambda", "J", "sigma"], rows


def _cmd_dflux(cfg: RunConfig):
    th = cfg.thermal()
    rows = []
    for lam in cfg.lam:
        report = flux_report(ModelParams(lam, cfg.nu), th)
        rows.append((lam, report.J_prime, report.J_second))
    result = {
        "lambda": [r[0] for r in rows],
        "J_prime": [r[1] for r in rows],
        "J_second": [r[2] for r in rows],
    }
    return result, ["lambda", "J_prime", "J_second"], rows


def _cmd_ness_matrix(cfg: RunConfig):
    if cfg.window < 0:
        raise ValueError(f"window half-width must be nonnegative, got {cfg.window}")
    block = correlation_block(
        ModelParams(cfg.single_lam(), cfg.nu), cfg.thermal(), -cfg.window, cfg.window
    )
    rows = [
        (x, y, block.matrix[i, j].real, block.matrix[i, j].imag)
        for i, x in enumerate(block.sites)
        for j, y in enumerate(block.sites)
    ]
    return block.to_dict(), ["x", "y", "re", "im"], rows


def _cmd_spectrum(cfg: RunConfig):
    lam = cfg.single_lam()
    params = ModelParams(lam, cfg.nu)
    sysm = build_truncation(cfg.oracle_m, params)
    data = sysm.bound_data()
    n_outside = 0 if data is None else 1
    if lam != 0.0 and data is not None:
        state = bound_state(lam)
        energy_residual = abs(data[0] - state.energy)
        vec = data[1]
        i0 = sysm.index(0)
        if vec[i0] < 0.0:
            vec = -vec
        span = range(-20, 21)
        sup = max(abs(vec[sysm.index(x)] - state.amplitude(x)) for x in span)
        payload = {
            "energy": state.energy,
            "decay_rate": state.decay_rate,
            "norm_sq": state.norm_sq,
            "staggered": state.staggered,
            "energy_residual": energy_residual,
            "eigenvector_sup_error": sup,
        }
    else:
        payload = {
            "energy": None,
            "decay_rate": None,
            "norm_sq": None,
            "staggered": None,
            "energy_residual": None,
            "eigenvector_sup_error": None,
        }
    result = {"lambda": lam, "oracle_m": cfg.oracle_m,
              "n_outside_band": n_outside, **payload}
    cols = ["lambda", "oracle_m", "n_outside_band", "energy", "decay_rate",
            "norm_sq", "staggered", "energy_residual", "eigenvector_sup_error"]
    row = tuple(result[c] for c in cols)
    return result, cols, [row]


def _cmd_ti_check(cfg: RunConfig):
    params = ModelParams(cfg.single_lam(), cfg.nu)
    th = cfg.thermal()
    fast = ti_commutator_element(params, th)
    direct = ti_commutator_direct(params, th)
    result = {
        "lambda": params.lam,
        "fast": fast,
        "direct": direct,
        "difference": fast - direct,
    }
    cols = ["lambda", "fast", "direct", "difference"]
    return result, cols, [(params.lam, fast, direct, fast - direct)]


def _cmd_oracle_verify(cfg: RunConfig):
    from .ness import s_element

    params = ModelParams(cfg.single_lam(), cfg.nu)
    th = cfg.thermal()
    sysm = build_truncation(cfg.oracle_m, params)
    checks = []

    def record(name: str, measured: float, tolerance: float) -> None:
        checks.append(
            {"name": name, "measured": measured, "tolerance": tolerance,
             "passed": bool(measured < tolerance)}
        )

    for x, y in ((0, 0), (0, 1)):
        est = ness_estimate(sysm, th, x, y, cfg.t_star)
        exact = s_element(params, th, x, y)
        record(f"ness_{x}_{y}", abs(est - exact), cfg.tol)
    j_left, j_right = oracle_flux(sysm, th, cfg.t_star)
    record("first_law", abs(j_left + j_right), 1e-6)
    record("flux_match", abs(j_left - heat_flux(params, th)), cfg.tol)
    result = {"checks": checks, "passed": all(c["passed"] for c in checks)}
    rows = [
        (c["name"], c["measured"], c["tolerance"], "pass" if c["passed"] else "fail")
        for c in checks
    ]
    return result, ["check", "measured", "tolerance", "status"], rows


def _cmd_transition_fit(cfg: RunConfig):
    fit = divergence_fit(cfg.thermal())
    result = {
        "lambda_grid": list(fit.lambda_grid),
        "ratios": list(fit.ratios),
        "C_fit": fit.C_fit,
        "C_theory": fit.C_theory,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "rel_error": fit.rel_error,
    }
    cols = ["lambda", "ratio", "C_fit", "C_theory", "intercept", "residual",
            "rel_error"]
    rows = [
        (lam, ratio, fit.C_fit, fit.C_theory, fit.intercept, fit.residual,
         fit.rel_error)
        for lam, ratio in zip(fit.lambda_grid, fit.ratios)
    ]
    return result, cols, rows


_HANDLERS = {
    "correction": _cmd_correction,
    "flux": _cmd_flux,
    "flux-scan": _cmd_flux_scan,
    "dflux": _cmd_dflux,
    "ness-matrix": _cmd_ness_matrix,
    "spectrum": _cmd_spectrum,
    "ti-check": _cmd_ti_check,
    "oracle-verify": _cmd_oracle_verify,
    "transition-fit": _cmd_transition_fit,
}


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _render(cfg: RunConfig, result, cols, rows) -> str:
    if cfg.fmt == "json":
        envelope = {"command": cfg.command, "config": cfg.echo(), "result": result}
        return json.dumps(envelope, indent=2, allow_nan=False) + "\n"
    lines = [",".join(cols)]
    lines.extend(",".join(_csv_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", newline="\n") as fh:
            fh.write(text)


def _error_record(exc: BaseException) -> str:
    return json.dumps(
        {"error": {"type": type(exc).__name__, "message": str(exc)}}
    )


def main(argv: list[str] | None = None) -> int:
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(ns)
        result, cols, rows = _HANDLERS[cfg.command](cfg)
        _emit(cfg, _render(cfg, result, cols, rows))
    except ValueError as exc:
        print(_error_record(exc), file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(_error_record(exc), file=sys.stderr)
        return 3
    if cfg.command == "oracle-verify" and not result["passed"]:
        print(_error_record(RuntimeError("oracle verification failed")), file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end.

Usage::

    svc-tunneling COMMAND --rho R --stage G --span L [--height V] [options]

Commands: geometry, spectrum, resonances, saturation, scaling, verify, bench.
Exit codes: 0 ok, 1 numeric guard tripped, 2 usage error, 3 verification failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from svc_tunneling import analysis
from svc_tunneling._fmt import dumps
from svc_tunneling.geometry import RHO_MIN, SvcParams, build_layout
from svc_tunneling.oracle import MAX_ORACLE_STAGE, oracle_transmission
from svc_tunneling.spp import NumericGuardError, svc_transmission

COMMANDS = ("geometry", "spectrum", "resonances", "saturation", "scaling", "verify", "bench")
GRID_COMMANDS = ("spectrum", "resonances", "saturation", "scaling", "verify")
VERIFY_TOLERANCE = 1e-8

EXIT_OK, EXIT_GUARD, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3

DEFAULTS = {
    "height": None,
    "area_preserving": False,
    "kmin": None,
    "kmax": None,
    "points": 2000,
    "method": "closed",
    "out": None,
    "format": "csv",
    "g2": None,
    "threshold": 0.999,
}


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: SvcParams
    k_min: float | None
    k_max: float | None
    n_points: int
    method: str
    out: str | None
    fmt: str
    g2: int | None = None
    threshold: float = 0.999

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.k_min, self.k_max, self.n_points)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="svc-tunneling",
        description="Transmission spectra of general Smith-Volterra-Cantor barriers "
                    "(units with hbar^2/2m = 1, so E = k^2).",
        argument_default=argparse.SUPPRESS,
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with default values for any option")
    p.add_argument("--rho", type=float, help="scaling parameter, > 1")
    p.add_argument("--stage", type=int, help="stage G >= 0 (bench: largest stage)")
    p.add_argument("--height", type=float, help="barrier height V (V_0 with --area-preserving)")
    p.add_argument("--span", type=float, help="total length L")
    p.add_argument("--area-preserving", dest="area_preserving", action="store_true",
                   help="rescale the height per stage to keep the barrier area")
    p.add_argument("--kmin", type=float, help="smallest wavenumber (> 0)")
    p.add_argument("--kmax", type=float, help="largest wavenumber")
    p.add_argument("--points", type=int, help="grid points (default 2000)")
    p.add_argument("--method", choices=("closed", "oracle"), help="default: closed")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"),
                   help="spectrum output format (default csv); other commands write JSON")
    p.add_argument("--g2", type=int, help="second stage for saturation")
    p.add_argument("--threshold", type=float, help="minimum peak T for resonances (default 0.999)")
    return p


def parse_args(argv) -> RunConfig:
    """Parse and validate; invalid input exits with status 2 and a usage message."""
    parser = _parser()
    ns = vars(parser.parse_args(list(argv)))
    merged = dict(DEFAULTS)
    if "config" in ns:
        try:
            with open(ns["config"], encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config: {exc}")
        if not isinstance(cfg, dict):
            parser.error("config file must hold a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        unknown = set(cfg) - set(DEFAULTS) - {"rho", "stage", "span"}
        if unknown:
            parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(cfg)
    merged.update({k: v for k, v in ns.items() if k != "config"})
    command = merged["command"]

    for name in ("rho", "stage", "span"):
        if merged.get(name) is None:
            parser.error(f"--{name} is required")
    if merged["height"] is None:
        if command != "geometry":
            parser.error("--height is required")
        merged["height"] = 1.0
    if not merged["rho"] > RHO_MIN:
        parser.error(f"--rho must satisfy rho > 1 (got {merged['rho']})")
    try:
        params = SvcParams(float(merged["rho"]), int(merged["stage"]), float(merged["height"]),
                           float(merged["span"]), bool(merged["area_preserving"]))
    except ValueError as exc:
        parser.error(str(exc))

    if command in GRID_COMMANDS:
        for name in ("kmin", "kmax"):
            if merged[name] is None:
                parser.error(f"--{name} is required for {command}")
    elif command == "bench":
        merged["kmin"] = merged["kmin"] or 0.05
        merged["kmax"] = merged["kmax"] or 15.0
        if "points" not in ns and "points" not in (cfg if "config" in ns else {}):
            merged["points"] = 200
    if merged["kmin"] is not None:
        if not merged["kmin"] > 0:
            parser.error(f"--kmin must be > 0 (got {merged['kmin']})")
        if not merged["kmax"] > merged["kmin"]:
            parser.error("--kmax must exceed --kmin")
    if int(merged["points"]) < 2:
        parser.error("--points must be >= 2")
    if command == "saturation":
        if merged["g2"] is None:
            parser.error("--g2 is required for saturation")
        if merged["g2"] < 0:
            parser.error("--g2 must be >= 0")
    if merged["method"] == "oracle" and params.stage > MAX_ORACLE_STAGE and command != "bench":
        parser.error(f"oracle is limited to stage <= {MAX_ORACLE_STAGE}")

    return RunConfig(
        command=command,
        params=params,
        k_min=None if merged["kmin"] is None else float(merged["kmin"]),
        k_max=None if merged["kmax"] is None else float(merged["kmax"]),
        n_points=int(merged["points"]),
        method=analysis.normalize_method(merged["method"]),
        out=merged["out"],
        fmt=merged["format"],
        g2=None if merged["g2"] is None else int(merged["g2"]),
        threshold=float(merged["threshold"]),
    )


def _report(config: RunConfig, results, **meta) -> str:
    doc = {
        "command": config.command,
        "params": config.params.to_dict(),
        "results": results,
        "meta": {"version": _version(), "method": config.method, **meta},
    }
    return dumps(doc) + "\n"


def _write(config: RunConfig, text: str):
    if config.out is None:
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _check_finite(values):
    if not np.all(np.isfinite(values)):
        raise NumericGuardError("non-finite values in output")


def run(config: RunConfig) -> int:
    """Execute a parsed command and return the process exit code."""
    params = config.params
    try:
        if config.command == "geometry":
            _write(config, build_layout(params).to_json() + "\n")
            return EXIT_OK

        if config.command == "spectrum":
            spec = analysis.sweep(params, config.k_min, config.k_max, config.n_points, config.method)
            _check_finite(spec.t)
            if config.fmt == "csv":
                _write(config, spec.to_csv())
            else:
                results = {"k": spec.k, "T": spec.t, "R": spec.r}
                _write(config, _report(config, results))
            return EXIT_OK

        if config.command == "resonances":
            peaks = analysis.find_resonances(params, config.k_min, config.k_max, config.threshold)
            results = [{"k_star": p.k_star, "t_peak": p.t_peak,
                        "width": p.width if p.resolved else None} for p in peaks]
            _write(config, _report(config, results, threshold=config.threshold))
            return EXIT_OK

        if config.command == "saturation":
            value = analysis.saturation_metric(params, params.stage, config.g2, config.grid)
            _write(config, _report(config, {"g1": params.stage, "g2": config.g2, "metric": value}))
            return EXIT_OK

        if config.command == "scaling":
            fit = analysis.scaling_fit(params, (config.k_min, config.k_max), config.n_points)
            results = {"slope": fit.slope, "intercept": fit.intercept,
                       "k_window": list(fit.k_window), "residual": fit.residual,
                       "envelope_points": fit.n_points}
            _write(config, _report(config, results))
            return EXIT_OK

        if config.command == "verify":
            grid = config.grid
            closed = svc_transmission(params, grid)
            oracle = oracle_transmission(build_layout(params), grid)
            _check_finite(closed)
            _check_finite(oracle)
            dev = float(np.max(np.abs(closed - oracle)))
            ok = dev <= VERIFY_TOLERANCE
            results = {"max_deviation": dev, "tolerance": VERIFY_TOLERANCE, "passed": ok,
                       "k_at_max": float(grid[int(np.argmax(np.abs(closed - oracle)))])}
            _write(config, _report(config, results))
            print(f"max |T_closed - T_oracle| = {dev:.3e}", file=sys.stderr)
            return EXIT_OK if ok else EXIT_VERIFY

        if config.command == "bench":
            stages = range(1, max(params.stage, 1) + 1)
            rep = analysis.benchmark(params, config.grid, stages=stages,
                                     oracle_max_stage=min(params.stage, 16))
            _write(config, _report(config, rep["stages"], points=rep["points"], repeats=rep["repeats"]))
            return EXIT_OK
    except (NumericGuardError, FloatingPointError, OverflowError) as exc:
        print(f"svc-tunneling: numeric guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except analysis.WindowTooNarrowError as exc:
        print(f"svc-tunneling: {exc}", file=sys.stderr)
        return EXIT_USAGE
    raise AssertionError(f"unhandled command {config.command}")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

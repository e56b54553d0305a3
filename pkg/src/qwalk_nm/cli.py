"""Batch command-line driver.

Subcommands:

* ``walk``: evolve one walk, export per-step distribution and scalar
  observables.
* ``sweep-variance``: final-step variance over a grid of telegraph-noise
  amplitudes, one curve per bandwidth.
* ``spectrum``: a distinguishability series (trace distance, mutual
  information or variance), its monotone/exponential detrend, the power
  spectrum of the residual, detected peaks and the band-power ratio.
* ``selftest``: re-hash a run directory against its manifest and run a
  handful of fast numeric self-checks.

Exit codes: 0 ok, 2 usage, 3 configuration, 4 numerical integrity.
Every run writes ``manifest.json`` recording the resolved configuration,
the reproduction conventions in force, and a checksum per emitted file.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .errors import ConfigError, IntegrityError, QwalkError, UsageError
from .noise import (
    NoiseModel,
    OrnsteinUhlenbeckNoise,
    PowerLawNoise,
    RandomTelegraphNoise,
    classify_regime,
    decoherence,
)
from .observables import (
    classical_walk_variance,
    mutual_information,
    paired_coin_run,
    position_distribution,
    trace_distance_series,
    variance,
    variance_series,
)
from .reporting import write_csv, write_json, write_manifest, audit_manifest
from .spectral import (
    DEFAULT_PRIMARY_BAND,
    DEFAULT_SECONDARY_BAND,
    FILTER_EXPONENTIAL,
    FILTER_MONOTONE,
    band_power_ratio,
    detect_peaks,
    exponential_fit,
    nonincreasing_fit,
    power_spectrum,
)
from .walk import (
    COIN_MINUS,
    COIN_PLUS,
    COIN_SYMMETRIC,
    TIMING_CUMULATIVE,
    TIMING_STEPWISE,
    WalkConfig,
    run_walk,
)

FILTER_BY_FLAG = {"mfbf": FILTER_MONOTONE, "expfit": FILTER_EXPONENTIAL}

_CONVENTIONS = {
    "kraus_evaluation": "decoherence factor at total elapsed step count, dt=1",
    "noise_placement": "coin channel applied after the walk unitary",
    "peak_rule": "in-band local maximum above median + 3*MAD of in-band power",
    "csv_float_format": "shortest round-trip decimal, '\\n' line ends",
}


def _parse_coin(text: str) -> np.ndarray:
    named = {"plus": COIN_PLUS, "minus": COIN_MINUS, "symmetric": COIN_SYMMETRIC}
    if text in named:
        return named[text].copy()
    if text.startswith("custom:"):
        parts = text[len("custom:"):].split(",")
        if len(parts) != 4:
            raise ConfigError("custom coin needs re0,im0,re1,im1")
        try:
            re0, im0, re1, im1 = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"bad custom coin: {exc}") from exc
        return np.array([re0 + 1j * im0, re1 + 1j * im1])
    raise ConfigError(f"unknown coin-init {text!r}")


def _parse_bands(text: str) -> tuple[tuple[float, float], tuple[float, float]]:
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError("--bands needs p_lo,p_hi,s_lo,s_hi")
    try:
        p_lo, p_hi, s_lo, s_hi = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad band edge: {exc}") from exc
    for lo, hi in ((p_lo, p_hi), (s_lo, s_hi)):
        if not (0.0 <= lo < hi <= 0.5):
            raise ConfigError(f"band ({lo}, {hi}) must lie within (0, 0.5]")
    if max(p_lo, s_lo) < min(p_hi, s_hi):
        raise ConfigError("primary and secondary bands overlap")
    return (p_lo, p_hi), (s_lo, s_hi)


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",") if p != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag}: {exc}") from exc
    if not values:
        raise ConfigError(f"{flag} is empty")
    return values


def _noise_from_args(args) -> NoiseModel | None:
    kind = args.noise
    if kind is None:
        for flag in ("a", "gamma", "Gamma"):
            if getattr(args, flag, None) is not None:
                raise ConfigError(f"--{flag} given without --noise")
        return None
    if kind == "rtn":
        if args.a is None or args.gamma is None:
            raise ConfigError("rtn noise needs --a and --gamma")
        return RandomTelegraphNoise(a=args.a, gamma=args.gamma)
    if args.Gamma is None or args.gamma is None:
        raise ConfigError(f"{kind} noise needs --Gamma and --gamma")
    if kind == "oun":
        return OrnsteinUhlenbeckNoise(Gamma=args.Gamma, gamma=args.gamma)
    return PowerLawNoise(Gamma=args.Gamma, gamma=args.gamma)


def _noise_dict(noise: NoiseModel | None) -> dict | None:
    if noise is None:
        return None
    return {"kind": noise.kind, **noise.params()}


def _regime_dict(noise: NoiseModel | None) -> dict | None:
    if noise is None:
        return None
    regime = classify_regime(noise)
    return {"label": regime.label, "discriminant": regime.discriminant,
            "heuristic": regime.heuristic}


def _prepare_out_dir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _factor_series(noise: NoiseModel | None, steps: int) -> np.ndarray:
    if noise is None:
        return np.ones(steps + 1)
    return np.array([decoherence(noise, float(n)) for n in range(steps + 1)])


# --------------------------------------------------------------------------
# walk

def cmd_walk(args) -> int:
    out = _prepare_out_dir(args)
    started = time.perf_counter()
    noise = _noise_from_args(args)
    coin = _parse_coin(args.coin_init)
    cfg = WalkConfig(steps=args.steps, coin_angle=args.coin_theta, initial_coin=coin)
    positions = cfg.positions

    paired = args.coin_init in ("plus", "minus")
    dist_rows = []
    var_rows = []
    variances = []
    factors = _factor_series(noise, cfg.steps)
    mi_values = []
    final_dist = None
    for n, rho in enumerate(run_walk(cfg, noise, args.noise_timing)):
        dist = position_distribution(rho)
        final_dist = dist
        for x, p in zip(positions, dist):
            if p != 0.0:  # unreachable sites are exact zeros by construction
                dist_rows.append((n, int(x), float(p)))
        var = variance(dist, positions)
        variances.append(var)
        var_rows.append((n, float(var), classical_walk_variance(n)))
        mi_values.append(mutual_information(rho))

    obs_header = ["step", "decoherence_factor", "mutual_information"]
    obs_columns = [list(range(cfg.steps + 1)), [float(f) for f in factors], mi_values]
    td_values = None
    if paired:
        pair = paired_coin_run(cfg, noise, args.noise_timing)
        td_values = trace_distance_series(pair).values
        obs_header.append("trace_distance")
        obs_columns.append([float(v) for v in td_values])

    write_csv(os.path.join(out, "distribution.csv"),
              ["step", "x", "probability"], dist_rows)
    write_csv(os.path.join(out, "variance.csv"),
              ["step", "variance", "classical_variance"], var_rows)
    write_csv(os.path.join(out, "observables.csv"), obs_header, zip(*obs_columns))
    emitted = ["distribution.csv", "variance.csv", "observables.csv"]

    if args.plots:
        from . import plots

        label = "noise-free" if noise is None else f"{noise.kind} walk"
        plots.save_distribution(os.path.join(out, "distribution.svg"),
                                positions, final_dist, f"{label}, t={cfg.steps}")
        series = {"variance": np.array(variances),
                  "classical": np.arange(cfg.steps + 1, dtype=float)}
        plots.save_step_series(os.path.join(out, "variance.svg"), series, "variance")
        emitted += ["distribution.svg", "variance.svg"]
        if td_values is not None:
            plots.save_step_series(os.path.join(out, "trace_distance.svg"),
                                   {"trace distance": td_values}, "trace distance")
            emitted.append("trace_distance.svg")

    config = {
        "steps": cfg.steps,
        "coin_theta": cfg.coin_angle,
        "coin_init": args.coin_init,
        "noise": _noise_dict(noise),
        "noise_timing": args.noise_timing,
        "lattice_halfwidth": cfg.halfwidth,
        "paired_trace_distance": paired,
    }
    conventions = dict(_CONVENTIONS, noise_timing=args.noise_timing)
    write_manifest(out, "walk", config, conventions,
                   time.perf_counter() - started, emitted, _regime_dict(noise))
    return 0


# --------------------------------------------------------------------------
# sweep-variance

def _sweep_point(task) -> float:
    steps, theta, a, gamma, timing = task
    cfg = WalkConfig(steps=steps, coin_angle=theta)
    noise = RandomTelegraphNoise(a=a, gamma=gamma)
    return variance_series(cfg, noise, timing).values[-1]


def cmd_sweep_variance(args) -> int:
    out = _prepare_out_dir(args)
    started = time.perf_counter()
    if args.noise != "rtn":
        raise ConfigError("the amplitude sweep is defined for --noise rtn")
    if args.a_grid is not None:
        lo, hi, count = args.a_grid.split(",") if args.a_grid.count(",") == 2 else (None, None, None)
        if lo is None:
            raise ConfigError("--a-grid needs lo,hi,count")
        try:
            amplitudes = list(np.linspace(float(lo), float(hi), int(count)))
        except ValueError as exc:
            raise ConfigError(f"--a-grid: {exc}") from exc
    elif args.a is not None:
        amplitudes = _parse_float_list(args.a, "--a")
    else:
        raise ConfigError("sweep needs --a or --a-grid")
    amplitudes = [a for a in amplitudes if a >= 0.0]
    if not amplitudes:
        raise ConfigError("amplitude grid is empty")
    gammas = _parse_float_list(args.gamma, "--gamma") if args.gamma else None
    if not gammas:
        raise ConfigError("sweep needs --gamma (one value per curve)")

    cfg = WalkConfig(steps=args.steps, coin_angle=args.coin_theta)
    noiseless = float(variance_series(cfg).values[-1])
    classical = classical_walk_variance(args.steps)

    tasks = [(args.steps, args.coin_theta, a, g, args.noise_timing)
             for g in gammas for a in amplitudes if a > 0.0]
    workers = args.threads or os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]

    by_pair = dict(zip([(t[3], t[2]) for t in tasks], results))
    rows = []
    curves: dict[float, tuple[list, list]] = {}
    for g in gammas:
        xs, ys = [], []
        for a in amplitudes:
            var = noiseless if a == 0.0 else by_pair[(g, a)]
            rows.append((float(g), float(a), float(var), float(classical), noiseless))
            xs.append(a)
            ys.append(var)
        curves[g] = (xs, ys)

    write_csv(os.path.join(out, "variance_vs_a.csv"),
              ["gamma", "a", "variance", "classical_variance", "noiseless_variance"],
              rows)
    emitted = ["variance_vs_a.csv"]
    if args.plots:
        from . import plots

        plots.save_variance_sweep(os.path.join(out, "plot.svg"),
                                  curves, classical, noiseless)
        emitted.append("plot.svg")

    config = {
        "steps": args.steps,
        "coin_theta": args.coin_theta,
        "noise_kind": "rtn",
        "amplitudes": [float(a) for a in amplitudes],
        "gammas": [float(g) for g in gammas],
        "noise_timing": args.noise_timing,
        "threads": workers,
    }
    conventions = dict(_CONVENTIONS, noise_timing=args.noise_timing)
    write_manifest(out, "sweep-variance", config, conventions,
                   time.perf_counter() - started, emitted)
    return 0


# --------------------------------------------------------------------------
# spectrum

def _series_for_spectrum(args, cfg: WalkConfig, noise: NoiseModel | None) -> np.ndarray:
    if args.series == "td":
        pair = paired_coin_run(cfg, noise, args.noise_timing)
        return trace_distance_series(pair).values
    if args.series == "mi":
        return np.array([mutual_information(rho)
                         for rho in run_walk(cfg, noise, args.noise_timing)])
    return variance_series(cfg, noise, args.noise_timing).values


def cmd_spectrum(args) -> int:
    out = _prepare_out_dir(args)
    started = time.perf_counter()
    if args.steps + 1 < 8:
        raise UsageError("spectrum needs a series of at least 8 points (steps >= 7)")
    noise = _noise_from_args(args)
    primary_band, secondary_band = _parse_bands(args.bands)
    coin = _parse_coin(args.coin_init)
    cfg = WalkConfig(steps=args.steps, coin_angle=args.coin_theta, initial_coin=coin)

    values = _series_for_spectrum(args, cfg, noise)
    filter_kind = FILTER_BY_FLAG[args.filter]
    if filter_kind == FILTER_MONOTONE:
        fit = nonincreasing_fit(values)
        fitted, residual = fit.fitted, fit.residual
    else:
        fitted, residual = exponential_fit(values)
    result = power_spectrum(residual)
    peaks = detect_peaks(result, [secondary_band, primary_band])
    ratio = band_power_ratio(result, primary_band, secondary_band)

    steps_axis = list(range(args.steps + 1))
    write_csv(os.path.join(out, "series.csv"), ["step", "value"],
              zip(steps_axis, map(float, values)))
    write_csv(os.path.join(out, "mfbf.csv"), ["step", "value", "fitted", "residual"],
              zip(steps_axis, map(float, values), map(float, fitted), map(float, residual)))
    write_csv(os.path.join(out, "spectrum.csv"), ["k", "frequency", "power"],
              zip(range(len(result.power)), map(float, result.frequencies),
                  map(float, result.power)))

    peaks_payload = {
        "series": args.series,
        "filter": args.filter,
        "noise": _noise_dict(noise),
        "noise_timing": args.noise_timing,
        "bands": {"primary": list(primary_band), "secondary": list(secondary_band)},
        "peaks": [{"band": ("primary" if p.band == primary_band else "secondary"),
                   "frequency": p.frequency, "power": p.power} for p in peaks],
        "band_power_ratio": (None if math.isinf(ratio) else ratio),
        "secondary_power_zero": math.isinf(ratio),
        "peak_rule": _CONVENTIONS["peak_rule"],
    }
    write_json(os.path.join(out, "peaks.json"), peaks_payload)
    emitted = ["series.csv", "mfbf.csv", "spectrum.csv", "peaks.json"]

    if args.plots:
        from . import plots

        plots.save_spectrum_report(os.path.join(out, "plot.svg"),
                                   steps_axis, values, fitted,
                                   result.frequencies, result.power, peaks,
                                   [secondary_band, primary_band])
        emitted.append("plot.svg")

    config = {
        "series": args.series,
        "steps": args.steps,
        "coin_theta": args.coin_theta,
        "coin_init": args.coin_init,
        "noise": _noise_dict(noise),
        "noise_timing": args.noise_timing,
        "filter": args.filter,
        "bands": {"primary": list(primary_band), "secondary": list(secondary_band)},
    }
    conventions = dict(_CONVENTIONS, noise_timing=args.noise_timing,
                       detrend_filter=filter_kind)
    write_manifest(out, "spectrum", config, conventions,
                   time.perf_counter() - started, emitted, _regime_dict(noise))
    return 0


# --------------------------------------------------------------------------
# selftest

def _numeric_selfchecks() -> list[str]:
    from .walk import build_operators
    from .noise import kraus_pair

    failures = []
    ops = build_operators(WalkConfig(steps=4))
    eye = np.eye(2 * ops.lattice_size)
    if np.max(np.abs(ops.walk.conj().T @ ops.walk - eye)) > 1e-10:
        failures.append("walk operator unitarity")
    for noise in (RandomTelegraphNoise(0.7, 0.3), OrnsteinUhlenbeckNoise(0.2, 0.4),
                  PowerLawNoise(0.2, 0.4)):
        if kraus_pair(noise, 7.0).completeness_residual() > 1e-10:
            failures.append(f"kraus completeness ({noise.kind})")
    rng = np.random.default_rng(0)
    x = rng.normal(size=64)
    checked = power_spectrum(x)
    if abs(np.sum(checked.power) / 64 - np.dot(x, x)) > 1e-9 * max(1.0, np.dot(x, x)):
        failures.append("spectrum Parseval identity")
    fit = nonincreasing_fit(np.array([1.0, 0.0, 1.0]))
    if np.max(np.abs(fit.fitted - [1.0, 0.5, 0.5])) > 1e-12:
        failures.append("monotone fit on [1, 0, 1]")
    return failures


def cmd_selftest(args) -> int:
    failures = _numeric_selfchecks()
    for name in ("walk operator unitarity", "kraus completeness (rtn)",
                 "kraus completeness (oun)", "kraus completeness (pln)",
                 "spectrum Parseval identity", "monotone fit on [1, 0, 1]"):
        status = "FAIL" if name in failures else "ok"
        print(f"selftest: {name}: {status}")
    if args.out is not None:
        problems = audit_manifest(args.out)
        if problems:
            for p in problems:
                print(f"selftest: manifest audit: {p}")
            failures.extend(problems)
        else:
            print("selftest: manifest audit: ok")
    if failures:
        raise IntegrityError("; ".join(failures))
    return 0


# --------------------------------------------------------------------------

def _add_noise_flags(sub) -> None:
    sub.add_argument("--noise", choices=["rtn", "oun", "pln"], default=None,
                     help="noise model (omit for a noise-free walk)")
    sub.add_argument("--a", type=float, default=None, help="telegraph coupling strength")
    sub.add_argument("--gamma", type=float, default=None, help="noise bandwidth")
    sub.add_argument("--Gamma", type=float, default=None, help="effective relaxation rate")


def _add_common_flags(sub, default_timing: str) -> None:
    sub.add_argument("--coin-theta", type=float, default=math.pi / 4,
                     help="coin rotation angle (default pi/4, the Hadamard coin)")
    sub.add_argument("--coin-init", default="symmetric",
                     help="plus | minus | symmetric | custom:re0,im0,re1,im1")
    sub.add_argument("--noise-timing", choices=[TIMING_STEPWISE, TIMING_CUMULATIVE],
                     default=default_timing,
                     help="apply the channel inside each step, or at total elapsed time")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--plots", action="store_true", help="also render SVG figures")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker processes for independent runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk-nm",
        description="Coined quantum walk under dephasing noise, with spectral "
                    "separation of recurrence sources.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command")

    walk = subs.add_parser("walk", help="run one walk and export observables")
    walk.add_argument("--steps", type=int, required=True)
    _add_noise_flags(walk)
    _add_common_flags(walk, TIMING_STEPWISE)
    walk.set_defaults(handler=cmd_walk)

    sweep = subs.add_parser("sweep-variance",
                            help="final variance over a telegraph amplitude grid")
    sweep.add_argument("--steps", type=int, default=100)
    sweep.add_argument("--noise", choices=["rtn", "oun", "pln"], default="rtn")
    sweep.add_argument("--a", type=str, default=None,
                       help="comma-separated amplitude list")
    sweep.add_argument("--a-grid", type=str, default=None,
                       help="lo,hi,count linear amplitude grid")
    sweep.add_argument("--gamma", type=str, default=None,
                       help="comma-separated bandwidths, one curve each")
    _add_common_flags(sweep, TIMING_STEPWISE)
    sweep.set_defaults(handler=cmd_sweep_variance)

    spectrum = subs.add_parser("spectrum",
                               help="detrended power spectrum of a series")
    spectrum.add_argument("--series", choices=["td", "mi", "variance"], required=True)
    spectrum.add_argument("--steps", type=int, default=99,
                          help="series covers steps 0..steps (default 99, length 100)")
    spectrum.add_argument("--filter", choices=sorted(FILTER_BY_FLAG), default="mfbf",
                          help="mfbf: subtract closest non-increasing sequence; "
                               "expfit: subtract fitted exponential decay")
    spectrum.add_argument("--bands", type=str, default="0.2,0.35,0.0,0.1",
                          help="p_lo,p_hi,s_lo,s_hi frequency bands")
    _add_noise_flags(spectrum)
    _add_common_flags(spectrum, TIMING_CUMULATIVE)
    spectrum.set_defaults(handler=cmd_spectrum)

    selftest = subs.add_parser("selftest", help="audit a run directory and self-check")
    selftest.add_argument("--out", default=None, help="run directory with manifest.json")
    selftest.set_defaults(handler=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return handler(args)
    except QwalkError as err:
        payload = {"error": type(err).__name__, "message": str(err),
                   "exit_code": err.exit_code}
        print(json.dumps(payload), file=sys.stderr)
        return err.exit_code


if __name__ == "__main__":
    sys.exit(main())

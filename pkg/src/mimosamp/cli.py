"""Command-line front end: experiment runners emitting CSVs and figures.

Subcommands
-----------
``plan``         print and save the sampling plan for a scheme and band
``reconstruct``  sample a signal pair through a scheme and reconstruct it
``consistency``  compare original output samples with resampled ones
``error-sweep``  aliasing errors versus the per-channel sample count
``noise``        reconstruction error from noisy samples (sigma or L sweep)

Exit codes: 0 success, 2 configuration error, 3 singular system,
4 truncation-capacity error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .analysis import (
    NoiseModel,
    actual_mse,
    consistency_test,
    error_report,
    noisy_reconstruct,
)
from .config import ExperimentConfig, ResolvedExperiment, load_config, resolve
from .errors import CapacityError, ConfigError, MimoSampError, SingularSystemError
from .plan import grid_instants
from .reconstruct import fft_reconstruct, recover_coefficients, unstack_spectra
from .report import (
    render_consistency,
    render_noise,
    render_reconstruction,
    render_sweep,
    write_csv,
)
from .spectrum import SpectrumSignal, dirichlet_bandlimit
from .system import sample_outputs

__all__ = ["main", "console_main"]


def _int_list(text: str) -> list[int]:
    if ":" in text:
        start, stop, step = (int(v) for v in text.split(":"))
        return list(range(start, stop + 1, step))
    return [int(v) for v in text.split(",")]


def _float_list(text: str) -> list[float]:
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        count = int(round((stop - start) / step)) + 1
        return [start + i * step for i in range(count)]
    return [float(v) for v in text.split(",")]


def _band(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def _materialized(exp: ResolvedExperiment) -> list[SpectrumSignal]:
    out = []
    for s in exp.signals:
        if isinstance(s, SpectrumSignal):
            out.append(s)
        else:
            out.append(dirichlet_bandlimit(s, min(exp.config.truncation, s.max_index)))
    return out


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    band = getattr(args, "band", None)
    return cfg.override(
        scheme=getattr(args, "scheme", None),
        lo=band[0] if band else None,
        hi=band[1] if band else None,
        length=getattr(args, "length", None),
        alpha=getattr(args, "alpha", None),
        signals=getattr(args, "signals", None),
        mode=getattr(args, "mode", None),
        truncation=getattr(args, "truncation", None),
        seed=getattr(args, "seed", None),
        trials=getattr(args, "trials", None),
        postfilter=getattr(args, "postfilter", None),
        sigma=getattr(args, "sigma", None),
        output_counts=tuple(getattr(args, "output_counts"))
        if getattr(args, "output_counts", None)
        else None,
        out_dir=Path(args.out) if getattr(args, "out", None) else None,
        figures=False if getattr(args, "no_figures", False) else None,
    )


def cmd_plan(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    exp = resolve(cfg)
    plan = exp.plan
    print(
        f"scheme={cfg.scheme} outputs={plan.outputs} inputs={plan.inputs} "
        f"folds={plan.folds} samples_per_channel={plan.length} "
        f"band=[{plan.lo},{plan.hi}] width={plan.width} "
        f"total_samples={plan.total_samples}"
    )
    write_csv(
        cfg.out_dir / "plan.csv",
        [
            "scheme", "outputs", "inputs", "folds", "samples_per_channel",
            "band_lo", "band_hi", "width", "total_samples",
        ],
        [
            (
                cfg.scheme, plan.outputs, plan.inputs, plan.folds, plan.length,
                plan.lo, plan.hi, plan.width, plan.total_samples,
            )
        ],
    )
    return 0


def cmd_reconstruct(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    exp = resolve(cfg)
    rec = exp.reconstructor()
    plan = exp.plan
    sampled = sample_outputs(exp.system, exp.signals, plan, cfg.truncation)
    counts = exp.output_counts()
    grids = fft_reconstruct(sampled.values, rec, counts)
    t_p = grid_instants(plan)

    write_csv(
        cfg.out_dir / "samples.csv",
        ["m", "p", "t", "value_re", "value_im"],
        (
            (m + 1, p, t_p[p], sampled.values[m, p].real, sampled.values[m, p].imag)
            for m in range(plan.outputs)
            for p in range(plan.length)
        ),
    )
    for r, grid in enumerate(grids):
        t_q = 2.0 * np.pi * np.arange(len(grid)) / len(grid)
        write_csv(
            cfg.out_dir / f"recon_{r + 1}.csv",
            ["q", "t", "value_re", "value_im"],
            ((q, t_q[q], grid[q].real, grid[q].imag) for q in range(len(grid))),
        )
    spectra = unstack_spectra(recover_coefficients(sampled.values, rec), plan)
    write_csv(
        cfg.out_dir / "spectra.csv",
        ["r", "n", "coeff_re", "coeff_im"],
        (
            (r + 1, n, spec.coeff(n).real, spec.coeff(n).imag)
            for r, spec in enumerate(spectra)
            for n in plan.band
        ),
    )
    reports = error_report(exp.signals, exp.system, rec, cfg.truncation)
    write_csv(
        cfg.out_dir / "errors.csv",
        ["r", "actual_mse", "averaged_mse", "upper_bound"],
        (
            (rep.channel + 1, rep.actual_mse, rep.averaged_mse, rep.upper_bound)
            for rep in reports
        ),
    )
    if cfg.figures:
        originals = [
            np.asarray(s.eval(2.0 * np.pi * np.arange(c) / c))
            for s, c in zip(_materialized(exp), counts)
        ]
        render_reconstruction(
            cfg.out_dir / "reconstruction.png", t_p, sampled.values, grids, originals
        )
    for rep in reports:
        print(
            f"channel {rep.channel + 1}: actual_mse={rep.actual_mse:.6e} "
            f"averaged_mse={rep.averaged_mse:.6e} upper_bound={rep.upper_bound:.6e}"
        )
    return 0


def cmd_consistency(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    exp = resolve(cfg)
    rec = exp.reconstructor()
    plan = exp.plan
    sampled = sample_outputs(exp.system, exp.signals, plan, cfg.truncation)
    deviation, resampled = consistency_test(exp.system, rec, sampled.values)
    t_p = grid_instants(plan)
    write_csv(
        cfg.out_dir / "consistency.csv",
        [
            "m", "p", "t", "original_re", "original_im",
            "resampled_re", "resampled_im", "abs_diff",
        ],
        (
            (
                m + 1, p, t_p[p],
                sampled.values[m, p].real, sampled.values[m, p].imag,
                resampled[m, p].real, resampled[m, p].imag,
                abs(resampled[m, p] - sampled.values[m, p]),
            )
            for m in range(plan.outputs)
            for p in range(plan.length)
        ),
    )
    if cfg.figures:
        render_consistency(
            cfg.out_dir / "consistency.png", t_p, sampled.values, resampled
        )
    print(f"max deviation = {deviation:.6e}")
    return 0


def cmd_error_sweep(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    lengths = args.l_list
    if not lengths:
        raise ConfigError("error-sweep needs a non-empty L list")
    rows = []
    for L in lengths:
        sub = resolve(replace(cfg, length=L))
        rec = sub.reconstructor()
        for rep in error_report(sub.signals, sub.system, rec, cfg.truncation):
            rows.append(
                (L, rep.channel + 1, rep.actual_mse, rep.averaged_mse, rep.upper_bound)
            )
    write_csv(
        cfg.out_dir / "sweep.csv",
        ["L", "r", "actual_mse", "averaged_mse", "upper_bound"],
        rows,
    )
    if cfg.figures:
        render_sweep(cfg.out_dir / "error_sweep.png", rows)
    for row in rows:
        print(
            f"L={row[0]} channel {row[1]}: actual={row[2]:.6e} "
            f"averaged={row[3]:.6e} bound={row[4]:.6e}"
        )
    return 0


def _mean_noisy_error(exp: ResolvedExperiment, rec, sigma: float, cfg: ExperimentConfig):
    """Noisy reconstruction error per channel, averaged over the trial seeds."""
    totals = np.zeros(exp.plan.inputs)
    for trial in range(cfg.trials):
        noise = NoiseModel(sigma=sigma, seed=cfg.seed + trial)
        _, errs = noisy_reconstruct(
            exp.system, exp.signals, rec, noise,
            postfilter=cfg.postfilter, truncation=cfg.truncation,
        )
        totals += np.asarray(errs)
    return totals / cfg.trials


def cmd_noise(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    if args.l_list:
        rows = []
        for L in args.l_list:
            sub = resolve(replace(cfg, length=L))
            rec = sub.reconstructor()
            means = _mean_noisy_error(sub, rec, cfg.sigma, cfg)
            rows.extend((L, r + 1, means[r]) for r in range(sub.plan.inputs))
        write_csv(cfg.out_dir / "noise.csv", ["L", "r", "error"], rows)
        if cfg.figures:
            render_noise(cfg.out_dir / "noise.png", rows, "samples per channel")
        for row in rows:
            print(f"L={row[0]} channel {row[1]}: error={row[2]:.6e}")
        return 0

    sigmas = args.sigma_list or [0.01 * k for k in range(1, 11)]
    exp = resolve(cfg)
    rec = exp.reconstructor()
    rows = []
    for sigma in sigmas:
        means = _mean_noisy_error(exp, rec, sigma, cfg)
        rows.extend((sigma, r + 1, means[r]) for r in range(exp.plan.inputs))
    write_csv(cfg.out_dir / "noise.csv", ["sigma", "r", "error"], rows)

    # noiseless reference plus a straight-line fit per channel
    clean = sample_outputs(exp.system, exp.signals, exp.plan, cfg.truncation)
    spectra = unstack_spectra(recover_coefficients(clean.values, rec), exp.plan)
    noiseless, _ = actual_mse(_materialized(exp), spectra)
    if len(sigmas) >= 2:
        fits = []
        xs = np.asarray(sigmas)
        for r in range(exp.plan.inputs):
            ys = np.asarray([row[2] for row in rows if row[1] == r + 1])
            slope, intercept = np.polyfit(xs, ys, 1)
            resid = ys - (slope * xs + intercept)
            total = ys - ys.mean()
            r_sq = 1.0 - float(resid @ resid) / float(total @ total)
            fits.append((r + 1, slope, intercept, r_sq, noiseless[r]))
            print(
                f"channel {r + 1}: slope={slope:.6e} intercept={intercept:.6e} "
                f"r_squared={r_sq:.8f} noiseless={noiseless[r]:.6e}"
            )
        write_csv(
            cfg.out_dir / "fit.csv",
            ["r", "slope", "intercept", "r_squared", "noiseless"],
            fits,
        )
    if cfg.figures:
        render_noise(cfg.out_dir / "noise.png", rows, "noise level sigma")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="experiment config file")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--seed", type=int, help="noise seed (64-bit)")
    sub.add_argument(
        "--mode", choices=["pseudoinverse", "explicit"], help="left-inverse mode"
    )
    sub.add_argument("--scheme", help="sampling scheme preset or 'custom'")
    sub.add_argument("--band", type=_band, metavar="N1:N2", help="frequency band")
    sub.add_argument("--length", type=int, help="samples per channel (centered band)")
    sub.add_argument("--alpha", type=float, help="translation shift (radians)")
    sub.add_argument("--signals", help="signal preset: bl51, hardy or custom")
    sub.add_argument("--truncation", type=int, help="coefficient cutoff for analytic signals")
    sub.add_argument("--no-figures", action="store_true", help="skip PNG rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimosamp",
        description="MIMO sampling and FFT-based reconstruction experiments",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("plan", help="show the sampling plan")
    _add_common(p)
    p.set_defaults(func=cmd_plan)

    p = subs.add_parser("reconstruct", help="sample and reconstruct a signal pair")
    _add_common(p)
    p.add_argument(
        "--output-counts", type=_int_list, metavar="N1,N2,...",
        help="output grid sizes per input channel",
    )
    p.set_defaults(func=cmd_reconstruct)

    p = subs.add_parser("consistency", help="resampling consistency check")
    _add_common(p)
    p.set_defaults(func=cmd_consistency)

    p = subs.add_parser("error-sweep", help="aliasing error vs samples per channel")
    _add_common(p)
    p.add_argument(
        "--l-list", type=_int_list, default=_int_list("11:51:4"),
        metavar="LIST", help="L values: comma list or start:stop:step",
    )
    p.set_defaults(func=cmd_error_sweep)

    p = subs.add_parser("noise", help="reconstruction from noisy samples")
    _add_common(p)
    p.add_argument("--sigma", type=float, help="noise level for the L sweep")
    p.add_argument(
        "--sigma-list", type=_float_list, metavar="LIST",
        help="sigma values: comma list or start:stop:step",
    )
    p.add_argument(
        "--l-list", type=_int_list, metavar="LIST",
        help="sweep L instead of sigma",
    )
    p.add_argument("--postfilter", type=int, help="low-pass order after reconstruction")
    p.add_argument("--trials", type=int, help="noise draws averaged per sweep point")
    p.set_defaults(func=cmd_noise)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SingularSystemError as exc:
        print(f"singular system: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 4
    except (MimoSampError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())

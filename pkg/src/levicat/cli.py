"""Command-line front end.

One executable, ``levicat``, with one subcommand per workflow stage:

* ``derive``    - derived scales and the diffusion budget for a config
* ``rates``     - decoherence-rate channels on a separation grid
* ``coherence`` - cat-coherence decay curves (breathing or static separation)
* ``gen-data``  - synthetic rate measurements with controlled noise
* ``fit``       - Bayesian parameter recovery on a dataset
* ``exclude``   - detectability map over the collapse parameter plane
* ``mass-scan`` - saturated collapse rate versus environment across masses
* ``wigner``    - phase-space distribution of a (decohered) cat state
* ``evolve``    - full master-equation integration diagnostics

Exit codes: 0 success, 1 configuration problems (bad flags, bad config
files), 2 numerical failures (non-convergence, positivity loss, NaNs).
All outputs land in the configured output directory with a checksum
manifest; identical config + seed + version reruns produce byte-identical
data files.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .artifacts import (write_json_artifact, write_manifest, write_rate_dataset,
                        read_rate_dataset, write_table)
from .config import Config, load_config
from .constants import HBAR
from .dynamics import (coherence_dynamic, coherence_static,
                       default_separation_grid, generate_synthetic_dataset)
from .errors import ConfigurationError, NumericalError
from .inference import run_mcmc
from .lindblad import dpp_for_localization_rate, evolve_lindblad
from .operators import default_dim, prepare_cat
from .rates import (cycle_averaged_gamma, gamma_csl, gamma_csl_max, gamma_env,
                    gamma_total, heating_from_dpp, rate_table)
from .scan import (critical_lambda, default_lambda_grid, default_rc_grid,
                   scan_exclusion, scan_mass)
from .states import ThermalizationSpec
from .wigner import purity_from_wigner, wigner_function

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage errors with exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=None,
                        help="JSON config (default: bundled demo scenario)")
    common.add_argument("--output", metavar="DIR", default=None,
                        help="output directory (default: from config)")
    common.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="levicat",
                     description="levitated-cat decoherence toolkit")
    parser.add_argument("--version", action="version",
                        version=f"levicat {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    common = _common()

    sub.add_parser("derive", parents=[common],
                   help="derived scales and noise budget")

    p = sub.add_parser("rates", parents=[common],
                       help="rate channels versus separation")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--dx-min", type=float, default=None,
                   help="smallest separation in metres (default r_c/100)")
    p.add_argument("--dx-max", type=float, default=None,
                   help="largest separation in metres (default 1000 r_c)")
    p.add_argument("--dpp", type=float, default=None,
                   help="override the environmental momentum-diffusion rate")

    p = sub.add_parser("coherence", parents=[common],
                       help="cat coherence decay curves")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--time", type=float, default=None,
                   help="curve length in seconds (default: three e-folds)")
    p.add_argument("--static", action="store_true",
                   help="hold the separation fixed instead of breathing")
    p.add_argument("--dpp", type=float, default=None)

    p = sub.add_parser("gen-data", parents=[common],
                       help="synthetic rate measurements")
    p.add_argument("--n", type=int, default=None,
                   help="number of separations (default: from config)")
    p.add_argument("--noise", type=float, default=None)
    p.add_argument("--out", default="dataset.csv")

    p = sub.add_parser("fit", parents=[common],
                       help="posterior sampling for (lambda, D_pp)")
    p.add_argument("--data", metavar="PATH", default=None,
                   help="dataset CSV (default: regenerate from config)")
    p.add_argument("--chains", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--burn", type=int, default=None)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--backend", choices=("python", "compiled"), default=None)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("exclude", parents=[common],
                       help="detectability over the collapse plane")
    p.add_argument("--gamma-min", type=float, default=0.05,
                   help="smallest resolvable excess rate in 1/s")
    p.add_argument("--dx", type=float, default=2e-7,
                   help="working separation in metres")
    p.add_argument("--lambda-points", type=int, default=61)
    p.add_argument("--rc-points", type=int, default=41)

    p = sub.add_parser("mass-scan", parents=[common],
                       help="saturated collapse rate versus mass")
    p.add_argument("--masses", default=None,
                   help="comma-separated masses in kg (default: 1e-19..1e-15)")
    p.add_argument("--dx", type=float, default=None)

    p = sub.add_parser("wigner", parents=[common],
                       help="phase-space snapshot of a cat state")
    p.add_argument("--alpha", type=float, default=1.25)
    p.add_argument("--gamma-omega", type=float, default=0.0,
                   help="position-localization rate in units of the trap frequency")
    p.add_argument("--tau", type=float, default=0.0,
                   help="evolution time in trap-phase units (Omega t)")
    p.add_argument("--grid-points", type=int, default=121)

    p = sub.add_parser("evolve", parents=[common],
                       help="master-equation run with diagnostics")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--cycles", type=float, default=1.0,
                   help="duration in trap periods")
    p.add_argument("--records", type=int, default=50)
    p.add_argument("--dpp", type=float, default=None)
    p.add_argument("--nbar", type=float, default=0.0)
    p.add_argument("--gamma-m", type=float, default=0.0,
                   help="mechanical damping rate in 1/s")

    return parser


def _prepare(args) -> tuple[Config, Path, int]:
    cfg = load_config(args.config)
    outdir = Path(args.output if args.output else cfg.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    seed = cfg.inference.seed if args.seed is None else args.seed
    return cfg, outdir, seed


def _finish(outdir: Path, files: list[Path], tool: str, seed: int,
            t0: float) -> None:
    write_manifest(outdir, files, tool=tool, seed=seed,
                   duration_s=time.perf_counter() - t0)
    for path in files:
        print(f"wrote {path}")


def _cmd_derive(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    scales = cfg.scales()
    budget = cfg.budget()
    resolved = cfg.resolved()
    resolved["derived"]["d_pp_gas"] = budget.gas
    resolved["derived"]["d_pp_trap"] = budget.trap
    resolved["derived"]["d_pp_blackbody"] = budget.blackbody
    resolved["derived"]["d_pp_total"] = budget.total
    resolved["derived"]["heating_rate"] = heating_from_dpp(
        budget.total, cfg.mass, cfg.trap.angular_frequency)
    resolved["derived"]["gamma_csl_max"] = gamma_csl_max(cfg.collapse, cfg.mass)
    path = write_json_artifact(outdir / "derived.json", resolved["derived"],
                               tool="derive", seed=seed, config=resolved)
    print(f"mass           {cfg.mass:.6g} kg")
    print(f"x_zpf          {scales.x_zpf:.6g} m")
    print(f"lamb_dicke     {scales.lamb_dicke:.6g}")
    print(f"d_pp_total     {budget.total:.6g} kg^2 m^2 s^-3")
    print(f"gamma_csl_max  {gamma_csl_max(cfg.collapse, cfg.mass):.6g} 1/s")
    for note in cfg.warnings:
        print(f"note: {note}")
    _finish(outdir, [path], "derive", seed, t0)
    return 0


def _cmd_rates(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    r_c = cfg.collapse.r_c
    lo = args.dx_min if args.dx_min is not None else r_c / 100.0
    hi = args.dx_max if args.dx_max is not None else 1000.0 * r_c
    if not 0 < lo < hi:
        raise ConfigurationError("need 0 < dx-min < dx-max")
    if args.points < 2:
        raise ConfigurationError("need at least 2 grid points")
    d_pp = args.dpp if args.dpp is not None else cfg.budget().total
    grid = np.logspace(math.log10(lo), math.log10(hi), args.points)
    points = rate_table(d_pp, cfg.collapse, cfg.mass, cfg.particle.radius, grid)
    rows = [(pt.delta_x, pt.gamma_env, pt.gamma_csl, pt.gamma_dp,
             pt.gamma_total) for pt in points]
    path = write_table(outdir / "rates.csv",
                       ("delta_x", "gamma_env", "gamma_csl", "gamma_dp",
                        "gamma_total"),
                       rows, tool="rates", seed=seed, config=cfg.resolved())
    _finish(outdir, [path], "rates", seed, t0)
    return 0


def _cmd_coherence(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    if args.alpha <= 0:
        raise ConfigurationError("alpha must be > 0")
    if args.points < 2:
        raise ConfigurationError("need at least 2 time points")
    d_pp = args.dpp if args.dpp is not None else cfg.budget().total
    scales = cfg.scales()
    omega = cfg.trap.angular_frequency
    mass, radius = cfg.mass, cfg.particle.radius

    def rate_env(dx):
        return gamma_env(d_pp, dx)

    def rate_csl(dx):
        return gamma_csl(cfg.collapse, mass, radius, dx)

    def rate_tot(dx):
        return gamma_total(d_pp, cfg.collapse, mass, radius, dx)

    dx_fixed = 2.0 * args.alpha * scales.x_zpf
    if args.time is not None:
        t_max = args.time
        if t_max <= 0:
            raise ConfigurationError("--time must be > 0")
    else:
        mean_rate = (rate_tot(dx_fixed) if args.static else
                     cycle_averaged_gamma(rate_tot, args.alpha, scales.x_zpf,
                                          omega))
        if mean_rate <= 0:
            raise ConfigurationError(
                "total rate is zero; pass --time explicitly")
        t_max = 3.0 / mean_rate
    times = np.linspace(0.0, t_max, args.points)

    if args.static:
        total = coherence_static(1.0, rate_env(dx_fixed), rate_csl(dx_fixed),
                                 times)
        env = coherence_static(1.0, rate_env(dx_fixed), 0.0, times)
        csl = coherence_static(1.0, 0.0, rate_csl(dx_fixed), times)
    else:
        total = coherence_dynamic(1.0, rate_tot, args.alpha, scales.x_zpf,
                                  omega, times)
        env = coherence_dynamic(1.0, rate_env, args.alpha, scales.x_zpf,
                                omega, times)
        csl = coherence_dynamic(1.0, rate_csl, args.alpha, scales.x_zpf,
                                omega, times)
    rows = list(zip(total.times, total.values, env.values, csl.values))
    path = write_table(outdir / "coherence.csv",
                       ("time", "c_total", "c_env", "c_csl"), rows,
                       tool="coherence", seed=seed, config=cfg.resolved())
    _finish(outdir, [path], "coherence", seed, t0)
    return 0


def _make_dataset(cfg: Config, seed: int, n: int | None, noise: float | None):
    grid = default_separation_grid(
        cfg.collapse, n if n is not None else cfg.inference.n_points)
    return generate_synthetic_dataset(
        lambda_true=cfg.collapse.lambda_csl,
        d_pp_true=cfg.dpp_prior_center(),
        collapse=cfg.collapse, mass=cfg.mass, radius=cfg.particle.radius,
        delta_x_grid=grid,
        noise_fraction=noise if noise is not None else cfg.inference.noise_fraction,
        seed=seed)


def _cmd_gen_data(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    dataset = _make_dataset(cfg, seed, args.n, args.noise)
    path = write_rate_dataset(outdir / args.out, dataset, config=cfg.resolved())
    print(f"{len(dataset)} points, lambda_true={dataset.lambda_true:.6g}, "
          f"d_pp_true={dataset.d_pp_true:.6g}, "
          f"{dataset.n_resampled} redrawn")
    _finish(outdir, [path], "gen-data", seed, t0)
    return 0


def _cmd_fit(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    if args.data is not None:
        dataset = read_rate_dataset(args.data)
    else:
        dataset = _make_dataset(cfg, seed, None, None)
    result = run_mcmc(
        dataset, cfg.geometry(), cfg.prior(),
        n_chains=args.chains if args.chains is not None else cfg.inference.chains,
        n_samples=args.samples if args.samples is not None else cfg.inference.samples,
        n_burn=args.burn if args.burn is not None else cfg.inference.burn,
        seed=seed, thin=args.thin, backend=args.backend, threads=args.threads)

    rows = []
    n_chains, n_samples = result.log10_lambda.shape
    for c in range(n_chains):
        for s in range(n_samples):
            rows.append((c, result.log10_lambda[c, s], result.d_pp[c, s],
                         result.log_posterior_values[c, s]))
    posterior_path = write_table(
        outdir / "posterior.csv",
        ("chain", "log10_lambda", "d_pp", "log_posterior"), rows,
        tool="fit", seed=seed, config=cfg.resolved())

    summary = {
        "map_log10_lambda": result.map_log10_lambda,
        "map_d_pp": result.map_d_pp,
        "hpd68_log10_lambda": list(result.hpd68_log10_lambda),
        "hpd95_log10_lambda": list(result.hpd95_log10_lambda),
        "hpd68_d_pp": list(result.hpd68_dpp),
        "hpd95_d_pp": list(result.hpd95_dpp),
        "r_gr_log10_lambda": result.r_gr_log10_lambda,
        "r_gr_d_pp": result.r_gr_dpp,
        "acceptance_rate": result.acceptance_rate,
        "upper_bound_lambda_95": result.upper_bound(0.95),
        "converged": result.converged,
        "backend": result.backend,
        "n_chains": n_chains,
        "n_samples": n_samples,
        "n_burn": result.n_burn,
        "thin": result.thin,
        "dataset": {
            "n_points": len(dataset),
            "lambda_true": dataset.lambda_true,
            "d_pp_true": dataset.d_pp_true,
            "noise_fraction": dataset.noise_fraction,
            "seed": dataset.seed,
        },
    }
    summary_path = write_json_artifact(outdir / "fit.json", summary,
                                       tool="fit", seed=seed,
                                       config=cfg.resolved())
    lo, hi = result.hpd95_log10_lambda
    print(f"backend            {result.backend}")
    print(f"MAP log10(lambda)  {result.map_log10_lambda:.4f}")
    print(f"95% HPD            [{lo:.4f}, {hi:.4f}]")
    print(f"95% upper bound    {result.upper_bound(0.95):.4g}")
    print(f"R_GR               {result.r_gr_log10_lambda:.4f} (lambda), "
          f"{result.r_gr_dpp:.4f} (D_pp)")
    print(f"acceptance         {result.acceptance_rate:.3f}")
    _finish(outdir, [posterior_path, summary_path], "fit", seed, t0)
    if not result.converged:
        print("chains did not converge (R_GR above threshold)",
              file=sys.stderr)
        return 2
    return 0


def _cmd_exclude(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    delta_x = args.dx
    exclusion = scan_exclusion(
        cfg.mass, cfg.particle.radius, delta_x, args.gamma_min,
        m0=cfg.collapse.m0,
        log10_lambda=default_lambda_grid(args.lambda_points),
        log10_rc=default_rc_grid(args.rc_points))
    rows = []
    for i, ll in enumerate(exclusion.log10_lambda):
        for j, lr in enumerate(exclusion.log10_rc):
            rows.append((ll, lr, int(exclusion.detectable[i, j])))
    path = write_table(outdir / "exclusion.csv",
                       ("log10_lambda", "log10_rc", "detectable"), rows,
                       tool="exclude", seed=seed, config=cfg.resolved())
    lam_crit = critical_lambda(cfg.collapse.r_c, cfg.mass,
                               cfg.particle.radius, delta_x, args.gamma_min,
                               cfg.collapse.m0)
    n_detectable = int(exclusion.detectable.sum())
    print(f"{n_detectable}/{exclusion.detectable.size} cells detectable at "
          f"gamma_min={args.gamma_min:g} 1/s, dx={delta_x:g} m")
    print(f"critical lambda at configured r_c: {lam_crit:.4g}")
    _finish(outdir, [path], "exclude", seed, t0)
    return 0


def _cmd_mass_scan(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    if args.masses is not None:
        try:
            masses = [float(tok) for tok in args.masses.split(",") if tok]
        except ValueError as exc:
            raise ConfigurationError(f"bad --masses list: {exc}") from exc
        if not masses or any(m <= 0 for m in masses):
            raise ConfigurationError("--masses needs positive numbers")
    else:
        masses = np.logspace(-19, -15, 9)
    delta_x = args.dx if args.dx is not None else cfg.collapse.r_c
    rows_out = scan_mass(cfg.collapse, cfg.gas, cfg.particle.density, masses,
                         delta_x)
    rows = [(float(mass), row.mass_amu, row.gamma_csl_max,
             row.gamma_env_comparison)
            for mass, row in zip(masses, rows_out)]
    path = write_table(outdir / "mass_scan.csv",
                       ("mass", "mass_amu", "gamma_csl_max", "gamma_env"),
                       rows, tool="mass-scan", seed=seed, config=cfg.resolved())
    _finish(outdir, [path], "mass-scan", seed, t0)
    return 0


def _cmd_wigner(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    if args.alpha <= 0:
        raise ConfigurationError("alpha must be > 0")
    if args.gamma_omega < 0 or args.tau < 0:
        raise ConfigurationError("gamma-omega and tau must be >= 0")
    scales = cfg.scales()
    omega = cfg.trap.angular_frequency
    rho = prepare_cat(args.alpha).density_matrix()

    if args.tau > 0 and args.gamma_omega > 0:
        lam = 0.5 * args.gamma_omega * omega  # [q,[q,.]] -> [X,[X,.]] factor
        d_pp = dpp_for_localization_rate(lam, scales.x_zpf)
        duration = args.tau / omega
        dt = 0.05 / (rho.dim * (omega + 4.0 * lam))
        steps = max(1, int(math.ceil(duration / dt)))
        dt = duration / steps
        evo = evolve_lindblad(rho, omega, d_pp, ThermalizationSpec(),
                              scales.x_zpf, dt, steps, record_every=steps)
        rho = evo.rho_final

    grid = wigner_function(rho, scales.x_zpf, n_x=args.grid_points,
                           n_p=args.grid_points)
    rows = []
    for i, x in enumerate(grid.x):
        for j, p in enumerate(grid.p):
            rows.append((x, p, grid.values[i, j]))
    path = write_table(outdir / "wigner.csv", ("x", "p", "w"), rows,
                       tool="wigner", seed=seed, config=cfg.resolved())
    print(f"normalization {grid.normalization():.6f}")
    print(f"purity        {purity_from_wigner(grid):.6f}")
    _finish(outdir, [path], "wigner", seed, t0)
    return 0


def _cmd_evolve(args) -> int:
    t0 = time.perf_counter()
    cfg, outdir, seed = _prepare(args)
    if args.alpha <= 0 or args.cycles <= 0 or args.records < 1:
        raise ConfigurationError("alpha, cycles, records must be positive")
    if args.nbar < 0 or args.gamma_m < 0:
        raise ConfigurationError("nbar and gamma-m must be >= 0")
    scales = cfg.scales()
    omega = cfg.trap.angular_frequency
    d_pp = args.dpp if args.dpp is not None else cfg.budget().total
    rho = prepare_cat(args.alpha).density_matrix()
    therm = ThermalizationSpec(gamma_m=args.gamma_m, n_th=args.nbar)

    lam = d_pp * scales.x_zpf ** 2 / HBAR ** 2
    duration = args.cycles * 2.0 * math.pi / omega
    stiffness = rho.dim * (omega + 4.0 * lam
                           + args.gamma_m * (2.0 * args.nbar + 1.0))
    dt = 0.05 / stiffness
    steps = max(args.records, int(math.ceil(duration / dt)))
    dt = duration / steps
    record_every = max(1, steps // args.records)

    evo = evolve_lindblad(rho, omega, d_pp, therm, scales.x_zpf, dt, steps,
                          record_every=record_every,
                          coherence_alpha=args.alpha)
    rows = list(zip(evo.times, evo.traces, evo.purities,
                    evo.mean_occupations, evo.top_populations,
                    evo.coherences))
    path = write_table(outdir / "evolution.csv",
                       ("time", "trace", "purity", "mean_occupation",
                        "top_population", "coherence"),
                       rows, tool="evolve", seed=seed, config=cfg.resolved())
    print(f"trace drift      {evo.trace_drift_rate:.3e} 1/s")
    print(f"final purity     {evo.purities[-1]:.6f}")
    print(f"final <n>        {evo.mean_occupations[-1]:.6f}")
    _finish(outdir, [path], "evolve", seed, t0)
    return 0


_HANDLERS = {
    "derive": _cmd_derive,
    "rates": _cmd_rates,
    "coherence": _cmd_coherence,
    "gen-data": _cmd_gen_data,
    "fit": _cmd_fit,
    "exclude": _cmd_exclude,
    "mass-scan": _cmd_mass_scan,
    "wigner": _cmd_wigner,
    "evolve": _cmd_evolve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("levicat: error: a subcommand is required", file=sys.stderr)
        return 1
    try:
        return _HANDLERS[args.command](args)
    except ConfigurationError as exc:
        print(f"levicat: configuration error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"levicat: numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Bayesian separation of environmental dephasing from collapse-rate signals.

The sampled parameters are u = log10(lambda) with a log-uniform prior over a
finite box, and the momentum-diffusion constant D_pp with either a truncated
Gaussian prior (calibration-informed) or a box prior (diagnostics).  Given a
dataset on a separation grid the model rate is linear in (lambda, D_pp), so
per-point features are precomputed once and the Metropolis-Hastings stepping
runs in a backend kernel (compiled when available).

Determinism: a master seed spawns one counter-based substream per chain, and
all proposal/accept randomness is pre-drawn from those substreams, so runs
are reproducible bit for bit regardless of backend or thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .constants import HBAR
from .dynamics import RateDataset, default_separation_grid, generate_synthetic_dataset
from .errors import ConfigurationError, ConvergenceError
from .params import CollapseParams
from .rates import csl_form_factor

__all__ = [
    "RateGeometry",
    "PriorSpec",
    "PosteriorResult",
    "model_features",
    "log_likelihood",
    "log_posterior",
    "run_mcmc",
    "gelman_rubin",
    "hpd_interval",
    "upper_bound",
    "narrowing_study",
    "self_consistent_dpp",
]

# Burn-in adaptation: multiplicative scale updates every window, chasing this
# acceptance rate; scales freeze once burn-in ends so the kept chain is a
# proper Markov chain.
ADAPT_EVERY = 100
TARGET_ACCEPT = 0.3
ADAPT_GAIN = 1.0

R_HAT_THRESHOLD = 1.05


@dataclass(frozen=True)
class RateGeometry:
    """Fixed experimental geometry entering the rate model."""

    mass: float
    radius: float
    r_c: float
    m0: float

    def __post_init__(self) -> None:
        if self.mass <= 0 or self.radius < 0 or self.r_c <= 0 or self.m0 <= 0:
            raise ConfigurationError("invalid rate geometry")

    @classmethod
    def from_collapse(cls, collapse: CollapseParams, mass: float,
                      radius: float) -> "RateGeometry":
        return cls(mass=mass, radius=radius, r_c=collapse.r_c, m0=collapse.m0)


@dataclass(frozen=True)
class PriorSpec:
    """Priors: log-uniform box on log10(lambda); Gaussian (truncated at zero)
    or box prior on D_pp."""

    lambda_log_range: tuple[float, float] = (-18.0, -6.0)
    dpp_center: float = 0.0
    dpp_sigma: float = 1.0
    dpp_kind: str = "gaussian"
    dpp_box: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        lo, hi = self.lambda_log_range
        if not lo < hi:
            raise ConfigurationError("lambda_log_range must satisfy lo < hi")
        if self.dpp_kind not in ("gaussian", "box"):
            raise ConfigurationError(f"unknown D_pp prior kind {self.dpp_kind!r}")
        if self.dpp_kind == "gaussian":
            if self.dpp_center < 0 or self.dpp_sigma <= 0:
                raise ConfigurationError(
                    "gaussian D_pp prior needs center >= 0 and sigma > 0")
        else:
            if self.dpp_box is None:
                raise ConfigurationError("box D_pp prior needs dpp_box")
            b_lo, b_hi = self.dpp_box
            if not 0 <= b_lo < b_hi:
                raise ConfigurationError("dpp_box must satisfy 0 <= lo < hi")

    def _kernel_params(self) -> tuple[int, float, float, float, float]:
        if self.dpp_kind == "gaussian":
            return 0, self.dpp_center, self.dpp_sigma, 0.0, 0.0
        lo, hi = self.dpp_box  # type: ignore[misc]
        return 1, 0.0, 1.0, lo, hi

    def log_prior(self, log10_lambda: float, d_pp: float) -> float:
        """Normalized log prior density; -inf outside the support."""
        lo, hi = self.lambda_log_range
        if not lo <= log10_lambda <= hi:
            return -math.inf
        value = -math.log(hi - lo)
        if self.dpp_kind == "gaussian":
            if d_pp < 0:
                return -math.inf
            z = (d_pp - self.dpp_center) / self.dpp_sigma
            return value - 0.5 * z * z - math.log(
                math.sqrt(2.0 * math.pi) * self.dpp_sigma)
        b_lo, b_hi = self.dpp_box  # type: ignore[misc]
        if not b_lo <= d_pp <= b_hi:
            return -math.inf
        return value - math.log(b_hi - b_lo)


def model_features(dataset: RateDataset, geom: RateGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Per-point coefficients (a_i, c_i) with Gamma_model = D_pp a_i + lambda c_i."""
    env = np.square(dataset.delta_x) / HBAR**2
    csl = (geom.mass / geom.m0) ** 2 * np.atleast_1d(
        csl_form_factor(dataset.delta_x / geom.r_c, geom.radius / geom.r_c))
    if dataset.delta_x.size == 0:
        csl = np.zeros(0)
    return np.ascontiguousarray(env), np.ascontiguousarray(csl)


def log_likelihood(dataset: RateDataset, geom: RateGeometry,
                   lambda_csl: float, d_pp: float) -> float:
    """Gaussian log-likelihood including normalization constants."""
    if lambda_csl < 0 or d_pp < 0:
        raise ConfigurationError("model parameters must be >= 0")
    env, csl = model_features(dataset, geom)
    model = d_pp * env + lambda_csl * csl
    resid = (dataset.gamma - model) / dataset.sigma
    return float(-0.5 * np.sum(resid**2)
                 - np.sum(np.log(np.sqrt(2.0 * math.pi) * dataset.sigma)))


def log_posterior(dataset: RateDataset, geom: RateGeometry, prior: PriorSpec,
                  log10_lambda: float, d_pp: float) -> float:
    lp = prior.log_prior(log10_lambda, d_pp)
    if not math.isfinite(lp):
        return -math.inf
    return lp + log_likelihood(dataset, geom, 10.0**log10_lambda, d_pp)


@dataclass
class PosteriorResult:
    """Post-burn-in chains plus summaries.

    Arrays are (n_chains, n_samples); log_posterior values include all
    normalization constants (they match :func:`log_posterior` pointwise).
    """

    log10_lambda: np.ndarray
    d_pp: np.ndarray
    log_posterior_values: np.ndarray
    map_log10_lambda: float
    map_d_pp: float
    hpd68_log10_lambda: tuple[float, float]
    hpd95_log10_lambda: tuple[float, float]
    hpd68_dpp: tuple[float, float]
    hpd95_dpp: tuple[float, float]
    r_gr_log10_lambda: float
    r_gr_dpp: float
    acceptance_rate: float
    converged: bool
    seed: int
    n_burn: int
    thin: int
    backend: str

    def pooled(self, name: str = "log10_lambda") -> np.ndarray:
        return getattr(self, name).reshape(-1)

    def upper_bound(self, quantile: float = 0.95) -> float:
        """lambda marginal quantile (in lambda units, not log10)."""
        return upper_bound(10.0 ** self.pooled("log10_lambda"), quantile)


def _chain_inputs(prior: PriorSpec, rng: np.random.Generator,
                  n_steps: int) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Overdispersed start point plus pre-drawn proposal randomness."""
    lo, hi = prior.lambda_log_range
    u0 = float(rng.uniform(lo, hi))
    if prior.dpp_kind == "gaussian":
        d0 = -1.0
        while d0 < 0:
            d0 = prior.dpp_center + 2.0 * prior.dpp_sigma * rng.standard_normal()
    else:
        b_lo, b_hi = prior.dpp_box  # type: ignore[misc]
        d0 = float(rng.uniform(b_lo, b_hi))
    zs = rng.standard_normal((n_steps, 2))
    log_us = np.log(rng.random(n_steps))
    return u0, float(d0), zs, log_us


def _resolve_backend(backend: str | None):
    if backend in (None, "default"):
        return _kernels.mh_chain, _kernels.BACKEND
    if backend == "python":
        return _kernels.mh_chain_python, "python"
    if backend == "compiled":
        if _kernels.mh_chain_compiled is None:
            raise ConfigurationError("compiled kernel is not available")
        return _kernels.mh_chain_compiled, "compiled"
    raise ConfigurationError(f"unknown backend {backend!r}")


def run_mcmc(dataset: RateDataset, geom: RateGeometry, prior: PriorSpec,
             n_chains: int = 4, n_samples: int = 20000,
             n_burn: int | None = None, seed: int = 0, thin: int = 1,
             scale_u: float = 0.5, scale_d: float | None = None,
             backend: str | None = None, threads: int = 1,
             r_hat_threshold: float = R_HAT_THRESHOLD) -> PosteriorResult:
    """Sample the posterior with per-chain Metropolis-Hastings.

    n_samples counts kept samples per chain (after thinning); burn-in
    defaults to 20% of the kept-sample budget.  Proposal scales adapt toward
    TARGET_ACCEPT during burn-in only.  Convergence is flagged, not enforced:
    the result always comes back, with `converged` reporting whether every
    potential-scale-reduction factor stayed below r_hat_threshold.
    """
    if n_chains < 2:
        raise ConfigurationError("need at least 2 chains for convergence checks")
    if n_samples < 10:
        raise ConfigurationError("n_samples too small")
    if thin < 1:
        raise ConfigurationError("thin must be >= 1")
    if n_burn is None:
        n_burn = n_samples // 5
    if n_burn < 0:
        raise ConfigurationError("n_burn must be >= 0")
    d_kind, d_center, d_sigma, d_lo, d_hi = prior._kernel_params()
    if scale_d is None:
        scale_d = d_sigma if d_kind == 0 else (d_hi - d_lo) / 10.0
    kernel, backend_used = _resolve_backend(backend)

    env, csl = model_features(dataset, geom)
    gamma = np.ascontiguousarray(dataset.gamma)
    inv_sigma = np.ascontiguousarray(
        1.0 / dataset.sigma if len(dataset) else np.zeros(0))
    u_min, u_max = prior.lambda_log_range
    n_record = n_samples * thin
    n_steps = n_burn + n_record

    streams = np.random.SeedSequence(seed).spawn(n_chains)

    def run_chain(chain_index: int):
        rng = np.random.Generator(np.random.Philox(streams[chain_index]))
        u0, d0, zs, log_us = _chain_inputs(prior, rng, n_steps)
        out_u = np.empty(n_record)
        out_d = np.empty(n_record)
        out_lp = np.empty(n_record)
        accepted, su, sd = kernel(
            u0, d0, env, csl, gamma, inv_sigma,
            u_min, u_max, d_kind, d_center, d_sigma, d_lo, d_hi,
            zs, log_us, n_burn, ADAPT_EVERY, TARGET_ACCEPT, ADAPT_GAIN,
            scale_u, scale_d, out_u, out_d, out_lp)
        sl = slice(thin - 1, None, thin)
        return out_u[sl].copy(), out_d[sl].copy(), out_lp[sl].copy(), accepted

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_chain, range(n_chains)))
    else:
        results = [run_chain(i) for i in range(n_chains)]

    u_chains = np.stack([r[0] for r in results])
    d_chains = np.stack([r[1] for r in results])
    lp_chains = np.stack([r[2] for r in results])
    accepted_total = sum(r[3] for r in results)
    acceptance = accepted_total / float(n_chains * n_record)
    if not 0.0 < acceptance < 1.0:
        raise ConvergenceError(
            f"degenerate sampler: post-burn-in acceptance rate {acceptance}")

    # Shift stored log-posteriors by the constants the kernel omits, so the
    # stored values match log_posterior() pointwise.
    offset = -math.log(u_max - u_min)
    if d_kind == 0:
        offset -= math.log(math.sqrt(2.0 * math.pi) * d_sigma)
    else:
        offset -= math.log(d_hi - d_lo)
    if len(dataset):
        offset -= float(np.sum(np.log(np.sqrt(2.0 * math.pi) * dataset.sigma)))
    lp_chains = lp_chains + offset

    r_u = gelman_rubin(u_chains)
    r_d = gelman_rubin(d_chains)
    converged = bool(r_u < r_hat_threshold and r_d < r_hat_threshold)

    pooled_u = u_chains.reshape(-1)
    pooled_d = d_chains.reshape(-1)
    best = int(np.argmax(lp_chains.reshape(-1)))

    return PosteriorResult(
        log10_lambda=u_chains,
        d_pp=d_chains,
        log_posterior_values=lp_chains,
        map_log10_lambda=float(pooled_u[best]),
        map_d_pp=float(pooled_d[best]),
        hpd68_log10_lambda=hpd_interval(pooled_u, 0.68),
        hpd95_log10_lambda=hpd_interval(pooled_u, 0.95),
        hpd68_dpp=hpd_interval(pooled_d, 0.68),
        hpd95_dpp=hpd_interval(pooled_d, 0.95),
        r_gr_log10_lambda=r_u,
        r_gr_dpp=r_d,
        acceptance_rate=acceptance,
        converged=converged,
        seed=seed,
        n_burn=n_burn,
        thin=thin,
        backend=backend_used,
    )


def gelman_rubin(chains: np.ndarray) -> float:
    """Potential scale reduction sqrt(V_hat / W) from between/within variances.

    chains has shape (n_chains, n_samples).  Raises ConvergenceError on
    degenerate (zero-variance) chains, for which the statistic is undefined.
    """
    chains = np.asarray(chains, dtype=float)
    if chains.ndim != 2 or chains.shape[0] < 2 or chains.shape[1] < 2:
        raise ConfigurationError("need >= 2 chains and >= 2 samples each")
    n = chains.shape[1]
    within = float(np.mean(np.var(chains, axis=1, ddof=1)))
    if within == 0.0:
        raise ConvergenceError("zero within-chain variance; R_GR undefined")
    between = n * float(np.var(np.mean(chains, axis=1), ddof=1))
    v_hat = (n - 1) / n * within + between / n
    return math.sqrt(v_hat / within)


def hpd_interval(samples: np.ndarray, mass: float = 0.95) -> tuple[float, float]:
    """Shortest interval holding the requested posterior mass (sorted-sample
    sweep)."""
    if not 0.0 < mass < 1.0:
        raise ConfigurationError("interval mass must be in (0, 1)")
    s = np.sort(np.asarray(samples, dtype=float).reshape(-1))
    n = s.size
    if n < 2:
        raise ConfigurationError("need at least 2 samples")
    k = max(2, int(math.ceil(mass * n)))
    if k >= n:
        return float(s[0]), float(s[-1])
    widths = s[k - 1:] - s[: n - k + 1]
    i = int(np.argmin(widths))
    return float(s[i]), float(s[i + k - 1])


def upper_bound(samples: np.ndarray, quantile: float = 0.95) -> float:
    """Marginal quantile; quantile = 1 returns the sample maximum."""
    if not 0.0 < quantile <= 1.0:
        raise ConfigurationError("quantile must be in (0, 1]")
    return float(np.quantile(np.asarray(samples, dtype=float).reshape(-1), quantile))


def narrowing_study(lambda_true: float, d_pp_true: float,
                    collapse: CollapseParams, mass: float, radius: float,
                    prior: PriorSpec, n_values: Sequence[int],
                    seeds: Sequence[int], noise_fraction: float = 0.05,
                    n_chains: int = 2, n_samples: int = 4000,
                    backend: str | None = None) -> dict[int, float]:
    """Mean posterior width (std of log10 lambda) versus dataset size.

    For each N the same seeds generate fresh datasets on an N-point default
    grid; widths average over seeds.  Against independent-point scaling the
    widths shrink like 1/sqrt(N).
    """
    geom = RateGeometry.from_collapse(collapse, mass, radius)
    out: dict[int, float] = {}
    for n_points in n_values:
        widths = []
        for seed in seeds:
            grid = default_separation_grid(collapse, n_points)
            dataset = generate_synthetic_dataset(
                lambda_true, d_pp_true, collapse, mass, radius, grid,
                noise_fraction, seed)
            result = run_mcmc(dataset, geom, prior, n_chains=n_chains,
                              n_samples=n_samples, seed=seed, backend=backend)
            widths.append(float(np.std(result.pooled("log10_lambda"))))
        out[int(n_points)] = float(np.mean(widths))
    return out


def self_consistent_dpp(gamma_env_target: float, delta_x: float) -> float:
    """D_pp giving a chosen environmental rate at a chosen separation."""
    if gamma_env_target <= 0 or delta_x <= 0:
        raise ConfigurationError("need positive target rate and separation")
    return gamma_env_target * HBAR**2 / delta_x**2

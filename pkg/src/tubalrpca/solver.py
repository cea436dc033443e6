"""ADMM solver for low-tubal-rank + sparse decomposition.

Splits an observed tensor X into L + E by alternating a weighted
tensor-nuclear-norm prox (L), entrywise soft-thresholding (E), and a
dual ascent step on the multiplier for the constraint X = L + E, with
the usual geometric penalty schedule. Method variants differ only in
their weight policy; they share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, InputError, NumericFailure
from .norms import WeightSpec, prox_gwtnn, soft_threshold
from .tensor import as_tensor3, inf_norm
from .weights import (
    WeightPolicy,
    etrpca_policy,
    gwtrpca_policy,
    intra_weights,
    mce_inter_weights,
    slice_energies,
    trpca_policy,
)


def default_lambda(d1: int, d2: int, d3: int) -> float:
    """Sparsity tradeoff 1/sqrt(d3 * max(d1, d2)); the classical matrix
    rule 1/sqrt(max(d1, d2)) is the d3 = 1 case."""
    if min(d1, d2, d3) < 1:
        raise ConfigError(f"dims must be positive, got {(d1, d2, d3)}")
    return 1.0 / math.sqrt(d3 * max(d1, d2))


@dataclass
class AdmmConfig:
    """Scalars of the ADMM loop plus the weight policy.

    lam=None resolves to :func:`default_lambda` for the input's shape at
    solve time.
    """

    lam: float | None = None
    mu0: float = 1e-2
    rho: float = 1.1
    mu_max: float = 1e7
    eps: float = 1e-6
    max_iter: int = 500
    weight_policy: WeightPolicy = field(default_factory=gwtrpca_policy)

    def __post_init__(self):
        if self.lam is not None and not self.lam > 0:
            raise ConfigError("lambda must be positive")
        if not self.mu0 > 0:
            raise ConfigError("mu0 must be positive")
        if self.rho < 1:
            raise ConfigError("rho must be >= 1")
        if self.mu0 > self.mu_max:
            raise ConfigError("mu0 must not exceed mu_max")
        if not self.eps > 0:
            raise ConfigError("eps must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")


@dataclass
class SolveReport:
    """Decomposition plus per-iteration diagnostics.

    residual_history[t] is the feasibility gap ||X - L - E||_inf after
    iteration t+1; converged means the final gap fell below eps.
    """

    l_hat: np.ndarray
    e_hat: np.ndarray
    iterations: int
    residual_history: list[float]
    converged: bool
    final_weights: WeightSpec


def solve(x, cfg: AdmmConfig | None = None) -> SolveReport:
    """Decompose `x` (shape (d1, d2, d3)) into low-tubal-rank + sparse parts.

    Per iteration t (penalty mu, L/E/Y start at zero):
      1. if the policy is adaptive and due, refresh inter-slice weights
         from the slice energies of the shrinkage target X - E - Y/mu
      2. L <- prox of (1/mu) * weighted TNN at X - E - Y/mu
      3. E <- soft-threshold(X - L - Y/mu, lam/mu)
      4. Y <- Y + mu * (L + E - X)
      5. mu <- min(rho * mu, mu_max)
    until ||X - L - E||_inf < eps or max_iter.
    """
    x = as_tensor3(x)
    if not np.all(np.isfinite(x)):
        raise InputError("input tensor has non-finite entries")
    if cfg is None:
        cfg = AdmmConfig()
    d1, d2, d3 = x.shape
    lam = cfg.lam if cfg.lam is not None else default_lambda(d1, d2, d3)
    policy = cfg.weight_policy
    w_intra = intra_weights(min(d1, d2), policy)
    w_inter = np.ones(d3)
    adaptive = policy.inter_mode == "adaptive_mce"

    l_hat = np.zeros_like(x)
    e_hat = np.zeros_like(x)
    y = np.zeros_like(x)
    mu = cfg.mu0
    history: list[float] = []
    converged = False
    iterations = 0

    for t in range(cfg.max_iter):
        target = x - e_hat - y / mu
        if adaptive and t % policy.recompute_every == 0:
            w_inter = mce_inter_weights(slice_energies(target), policy.scale_floor)
        weights = WeightSpec(w_intra, w_inter)
        try:
            l_hat = prox_gwtnn(target, weights, 1.0 / mu)
        except NumericFailure as err:
            raise NumericFailure(f"iteration {t + 1}: {err}") from err
        e_hat = soft_threshold(x - l_hat - y / mu, lam / mu)
        y = y + mu * (l_hat + e_hat - x)
        mu = min(cfg.rho * mu, cfg.mu_max)
        residual = inf_norm(x - l_hat - e_hat)
        history.append(residual)
        iterations = t + 1
        if residual < cfg.eps:
            converged = True
            break

    return SolveReport(
        l_hat=l_hat,
        e_hat=e_hat,
        iterations=iterations,
        residual_history=history,
        converged=converged,
        final_weights=WeightSpec(w_intra, w_inter),
    )


def solve_trpca(x, cfg: AdmmConfig | None = None) -> SolveReport:
    """Plain tensor RPCA: all weights fixed to 1."""
    cfg = replace(cfg if cfg is not None else AdmmConfig(), weight_policy=trpca_policy())
    return solve(x, cfg)


def solve_etrpca_like(x, cfg: AdmmConfig | None = None) -> SolveReport:
    """Grouped intra-slice weights, uniform inter-slice weights."""
    cfg = replace(cfg if cfg is not None else AdmmConfig(), weight_policy=etrpca_policy())
    return solve(x, cfg)


def solve_rpca_per_channel(x, cfg: AdmmConfig | None = None) -> SolveReport:
    """Matrix RPCA applied to each frontal slice independently.

    Each d1 x d2 x 1 channel is solved with unit weights and the matrix
    rule lam = 1/sqrt(max(d1, d2)) (unless cfg pins lam), then the
    channels are recombined. The merged residual history takes the
    entrywise max across channels, padding finished channels with their
    final residual.
    """
    x = as_tensor3(x)
    d1, d2, d3 = x.shape
    base = cfg if cfg is not None else AdmmConfig()
    lam = base.lam if base.lam is not None else default_lambda(d1, d2, 1)
    channel_cfg = replace(base, lam=lam, weight_policy=trpca_policy())
    reports = [solve(x[:, :, k:k + 1], channel_cfg) for k in range(d3)]

    iterations = max(r.iterations for r in reports)
    history = [
        max(r.residual_history[min(t, len(r.residual_history) - 1)] for r in reports)
        for t in range(iterations)
    ]
    return SolveReport(
        l_hat=np.concatenate([r.l_hat for r in reports], axis=2),
        e_hat=np.concatenate([r.e_hat for r in reports], axis=2),
        iterations=iterations,
        residual_history=history,
        converged=all(r.converged for r in reports),
        final_weights=WeightSpec.uniform(min(d1, d2), d3),
    )

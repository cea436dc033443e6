#!/usr/bin/env python3
"""Effect of inter-slice weight settings on recovery quality.

Runs the ADMM loop with several fixed inter-slice weight triples and
with adaptive weight learning on the same corrupted image, printing the
PSNR for each setting. Fixed triples are not expressible through
WeightPolicy (by design), so this script drives the proximal operator
directly.
"""

import argparse

import numpy as np

from tubalrpca import (
    AdmmConfig,
    WeightSpec,
    corrupt_tubes,
    inf_norm,
    make_test_image,
    prox_gwtnn,
    psnr,
    soft_threshold,
    solve,
)
from tubalrpca.solver import default_lambda


def admm_fixed_weights(x, w_inter, cfg):
    d1, d2, d3 = x.shape
    lam = default_lambda(d1, d2, d3)
    w = WeightSpec(np.ones(min(d1, d2)), np.asarray(w_inter, float))
    l_hat = np.zeros_like(x)
    e_hat = np.zeros_like(x)
    y = np.zeros_like(x)
    mu = cfg.mu0
    for _ in range(cfg.max_iter):
        l_hat = prox_gwtnn(x - e_hat - y / mu, w, 1.0 / mu)
        e_hat = soft_threshold(x - l_hat - y / mu, lam / mu)
        y = y + mu * (l_hat + e_hat - x)
        mu = min(cfg.rho * mu, cfg.mu_max)
        if inf_norm(x - l_hat - e_hat) < cfg.eps:
            break
    return l_hat


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=128)
    ap.add_argument("--corrupt", type=float, default=0.10)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    img = make_test_image(args.size, args.size, seed=0)
    observed, _ = corrupt_tubes(img, args.corrupt, args.seed)
    x = observed / 255.0
    cfg = AdmmConfig()

    fixed = [(1.2, 0.8, 0.8), (1.0, 1.0, 1.0), (0.8, 1.2, 1.2)]
    print(f"{'w_inter':24s} psnr_db")
    for triple in fixed:
        l_hat = admm_fixed_weights(x, triple, cfg)
        p = psnr(img, np.clip(255.0 * l_hat, 0, 255))
        print(f"{str(triple):24s} {p:7.3f}")

    rep = solve(x, cfg)
    p = psnr(img, np.clip(255.0 * rep.l_hat, 0, 255))
    learned = tuple(round(float(v), 2) for v in rep.final_weights.w_inter)
    print(f"adaptive {str(learned):15s} {p:7.3f}")


if __name__ == "__main__":
    main()

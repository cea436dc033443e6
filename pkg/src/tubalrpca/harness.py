"""Experiment harness: corruption injection, PSNR, orchestration, CSV reports.

Every run is reproducible from (input, config, seed): corruption masks
and values come from the portable SplitMix64 stream, solvers are
deterministic, and CSV rows are formatted with fixed precision so
reruns are byte-identical apart from the wall-time column.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DimensionMismatch, FormatError
from .imageio import load_image, save_image
from .rng import SplitMix64
from .solver import AdmmConfig, solve, solve_etrpca_like, solve_rpca_per_channel, solve_trpca
from .spectral import tprod
from .tensor import as_tensor3, read_t3b, write_t3b
from .weights import WeightPolicy, gwtrpca_policy

METHODS = {
    "gwtrpca": solve,
    "trpca": solve_trpca,
    "etrpca": solve_etrpca_like,
    "rpca": solve_rpca_per_channel,
}

CSV_HEADER = "image,method,psnr_db,iterations,seconds,w_inter"

_IMAGE_SUFFIXES = (".png", ".ppm")
_NOISE_KINDS = ("auto", "tube", "salt_pepper")


def corrupt_tubes(t, fraction: float, seed: int):
    """Replace floor(fraction * d1 * d2) whole tubes with uniform noise.

    Pixel positions are drawn without replacement; at each chosen pixel
    every channel is replaced by an independent uniform draw from
    [0, 255]. Returns (corrupted copy, set of corrupted (i, j) positions).
    """
    x = as_tensor3(t).copy()
    if not 0.0 <= fraction <= 1.0:
        raise ConfigError(f"corruption fraction must be in [0, 1], got {fraction}")
    d1, d2, d3 = x.shape
    n = int(fraction * d1 * d2)
    rng = SplitMix64(seed)
    flat = rng.sample_without_replacement(d1 * d2, n)
    rows = flat // d2
    cols = flat % d2
    x[rows, cols, :] = rng.uniforms(n * d3, 0.0, 255.0).reshape(n, d3)
    mask = {(int(i), int(j)) for i, j in zip(rows, cols)}
    return x, mask


def salt_pepper(t, level: float, seed: int, peak: float | None = None):
    """Flip each entry to 0 or `peak` (equal odds) with probability `level`.

    Returns (corrupted copy, boolean mask of flipped entries). `peak`
    defaults to the max absolute value of the input.
    """
    x = as_tensor3(t).copy()
    if not 0.0 <= level <= 1.0:
        raise ConfigError(f"noise level must be in [0, 1], got {level}")
    if peak is None:
        peak = float(np.max(np.abs(x)))
    rng = SplitMix64(seed)
    u = rng.uniforms(x.size)
    high = (rng.u64(x.size) & np.uint64(1)).astype(bool)
    mask = u < level
    flat = x.reshape(-1)
    flat[mask] = np.where(high[mask], peak, 0.0)
    return x, mask.reshape(x.shape)


def psnr(reference, estimate, peak: float = 255.0) -> float:
    """Peak signal-to-noise ratio 10*log10(peak^2 / MSE) in dB.

    Identical inputs give +inf.
    """
    ref = as_tensor3(reference, "reference")
    est = as_tensor3(estimate, "estimate")
    if ref.shape != est.shape:
        raise DimensionMismatch(f"psnr shapes differ: {ref.shape} vs {est.shape}")
    if not peak > 0:
        raise ConfigError("peak must be positive")
    mse = float(np.mean(np.square(ref - est)))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def make_test_image(d1: int = 256, d2: int = 256, seed: int = 0,
                    n_shapes: int = 14, saturation: float = 0.15,
                    texture: float = 0.02) -> np.ndarray:
    """Deterministic synthetic color photo in [0, 255].

    Piecewise-smooth scene: a vertical color gradient, randomly placed
    shaded ellipses whose edges are shared by all channels, a mild
    per-shape color cast, and a little shared fine texture, quantized
    to 8 bits. This mimics the statistics that matter here: strongly
    correlated channels, a dominant luminance slice, and singular value
    tails that decay without an exact low-rank cutoff.
    """
    rng = SplitMix64(seed)
    ii = np.linspace(0.0, 1.0, d1)[:, None]
    jj = np.linspace(0.0, 1.0, d2)[None, :]
    base_top = 110 + 60 * rng.uniforms(3)
    base_bot = 60 + 60 * rng.uniforms(3)
    img = np.empty((d1, d2, 3))
    for c in range(3):
        img[:, :, c] = base_top[c] * (1 - ii) + base_bot[c] * ii
    for _ in range(n_shapes):
        cy, cx = rng.uniforms(2)
        ay, ax = rng.uniforms(2, 0.04, 0.35)
        angle = rng.uniforms(1, 0.0, np.pi)[0]
        co, si = np.cos(angle), np.sin(angle)
        u = (ii - cy) * co + (jj - cx) * si
        v = -(ii - cy) * si + (jj - cx) * co
        inside = (u / ay) ** 2 + (v / ax) ** 2 <= 1.0
        level = rng.uniforms(1, 30, 225)[0]
        cast = rng.uniforms(3, -1.0, 1.0) * saturation * 255
        gy, gx = rng.uniforms(2, -40, 40)
        fill = level + gy * (ii - cy) + gx * (jj - cx)
        for c in range(3):
            channel = img[:, :, c]
            channel[inside] = np.clip(fill + cast[c], 0, 255)[inside]
    if texture > 0:
        grain = rng.normals(d1 * d2).reshape(d1, d2)
        gains = rng.uniforms(3, 0.7, 1.0)
        img += texture * 255 * grain[:, :, None] * gains[None, None, :]
    return np.clip(np.rint(img), 0, 255).astype(np.float64)


def load_tensor(path) -> np.ndarray:
    """Load a tensor from a .t3b file or an image file by extension."""
    suffix = Path(path).suffix.lower()
    if suffix == ".t3b":
        return read_t3b(path)
    if suffix in _IMAGE_SUFFIXES:
        return load_image(path)
    raise FormatError(f"{path}: unsupported input extension {suffix!r}")


def synth_low_rank_sparse(d1: int, d2: int, d3: int, rank: int, sparsity: float, seed: int):
    """Ground-truth pair for exact-recovery tests.

    L0 is a t-product of Gaussian factor tensors (tubal rank <= rank),
    E0 has floor(sparsity * d1*d2*d3) random-sign unit spikes at
    distinct entries. Returns (l0, e0).
    """
    if rank < 1 or rank > min(d1, d2):
        raise ConfigError(f"rank must be in [1, {min(d1, d2)}], got {rank}")
    if not 0.0 <= sparsity <= 1.0:
        raise ConfigError(f"sparsity must be in [0, 1], got {sparsity}")
    rng = SplitMix64(seed)
    a = rng.normals(d1 * rank * d3).reshape(d1, rank, d3) / math.sqrt(d1)
    b = rng.normals(rank * d2 * d3).reshape(rank, d2, d3) / math.sqrt(d2)
    l0 = tprod(a, b)
    n = int(sparsity * d1 * d2 * d3)
    flat = rng.sample_without_replacement(d1 * d2 * d3, n)
    signs = np.where((rng.u64(n) & np.uint64(1)).astype(bool), 1.0, -1.0)
    e0 = np.zeros(d1 * d2 * d3)
    e0[flat] = signs
    return l0, e0.reshape(d1, d2, d3)


@dataclass
class Experiment:
    """One recovery run: input, corruption protocol, method, output dir."""

    input: str | Path
    method: str = "gwtrpca"
    corruption: float = 0.0
    seed: int = 0
    noise: str = "auto"
    admm: AdmmConfig | None = None
    out_dir: str | Path = "out"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; choose from {sorted(METHODS)}")
        if not 0.0 <= self.corruption <= 1.0:
            raise ConfigError(f"corruption must be in [0, 1], got {self.corruption}")
        if self.noise not in _NOISE_KINDS:
            raise ConfigError(f"unknown noise kind {self.noise!r}; choose from {_NOISE_KINDS}")


@dataclass
class MetricsRow:
    """One results-CSV row."""

    image: str
    method: str
    psnr_db: float
    iterations: int
    seconds: float
    w_inter: np.ndarray = field(repr=False)

    def to_csv(self) -> str:
        p = "inf" if math.isinf(self.psnr_db) else f"{self.psnr_db:.4f}"
        w = ";".join(f"{v:.4f}" for v in np.asarray(self.w_inter).ravel())
        return f"{self.image},{self.method},{p},{self.iterations},{self.seconds:.3f},{w}"


def append_metrics_row(path, row: MetricsRow) -> None:
    path = Path(path)
    new = not path.exists()
    with open(path, "a") as f:
        if new:
            f.write(CSV_HEADER + "\n")
        f.write(row.to_csv() + "\n")


def run_experiment(e: Experiment, results_csv="auto") -> MetricsRow:
    """Corrupt (optional), solve, write artifacts, return the metrics row.

    Writes into e.out_dir: the corrupted input (image and/or .t3b), the
    recovered tensor (.t3b, plus an image for image inputs), and a
    per-iteration residual CSV (residuals refer to the peak-normalized
    problem the solver sees). PSNR is measured against the loaded input;
    image estimates are clamped to [0, 255] first. With
    results_csv="auto" the row is appended to out_dir/results.csv.
    """
    out = Path(e.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reference = load_tensor(e.input)
    stem = Path(e.input).stem
    is_image = Path(e.input).suffix.lower() in _IMAGE_SUFFIXES
    peak = 255.0 if is_image else max(float(np.max(np.abs(reference))), 1e-12)
    noise = e.noise if e.noise != "auto" else ("tube" if is_image else "salt_pepper")

    if e.corruption > 0:
        if noise == "tube":
            observed, _ = corrupt_tubes(reference, e.corruption, e.seed)
        else:
            observed, _ = salt_pepper(reference, e.corruption, e.seed, peak)
    else:
        observed = reference
    write_t3b(observed, out / f"{stem}_corrupted.t3b")
    if is_image:
        save_image(observed, out / f"{stem}_corrupted.png")

    cfg = e.admm if e.admm is not None else AdmmConfig()
    # solve at peak-normalized scale: the ADMM constants (mu0, eps) are
    # calibrated for O(1) data, and the convex problem is scale-equivariant
    start = time.perf_counter()
    report = METHODS[e.method](observed / peak, cfg)
    seconds = time.perf_counter() - start

    recovered = report.l_hat * peak
    estimate = np.clip(recovered, 0.0, 255.0) if is_image else recovered
    write_t3b(estimate, out / f"{stem}_{e.method}_recovered.t3b")
    if is_image:
        save_image(estimate, out / f"{stem}_{e.method}_recovered.png")
    with open(out / f"{stem}_{e.method}_residuals.csv", "w") as f:
        f.write("iteration,residual\n")
        for t, r in enumerate(report.residual_history, start=1):
            f.write(f"{t},{r:.16e}\n")

    row = MetricsRow(
        image=stem,
        method=e.method,
        psnr_db=psnr(reference, estimate, peak),
        iterations=report.iterations,
        seconds=seconds,
        w_inter=report.final_weights.w_inter,
    )
    if results_csv == "auto":
        append_metrics_row(out / "results.csv", row)
    elif results_csv is not None:
        append_metrics_row(results_csv, row)
    return row


_ADMM_KEYS = {"lambda", "mu0", "rho", "mu_max", "eps", "max_iter"}
_WEIGHT_KEYS = {"intra", "groups", "inter", "scale_floor", "recompute_every"}
_SUITE_KEYS = {"inputs", "methods", "out_dir", "corruption", "seed", "noise", "admm", "weights"}
_OVERRIDE_KEYS = {"admm", "weights", "noise"}


def policy_from_dict(d: dict) -> WeightPolicy:
    """Weight policy from a config mapping; starts from the gwtrpca defaults."""
    unknown = set(d) - _WEIGHT_KEYS
    if unknown:
        raise ConfigError(f"unknown weight config keys: {sorted(unknown)}")
    base = gwtrpca_policy()
    return WeightPolicy(
        intra_mode=d.get("intra", base.intra_mode),
        intra_groups=tuple(d.get("groups", base.intra_groups)),
        inter_mode=d.get("inter", base.inter_mode),
        scale_floor=d.get("scale_floor", base.scale_floor),
        recompute_every=d.get("recompute_every", base.recompute_every),
    )


def admm_from_dict(d: dict, policy: WeightPolicy | None = None) -> AdmmConfig:
    unknown = set(d) - _ADMM_KEYS
    if unknown:
        raise ConfigError(f"unknown admm config keys: {sorted(unknown)}")
    base = AdmmConfig()
    return AdmmConfig(
        lam=d.get("lambda", base.lam),
        mu0=d.get("mu0", base.mu0),
        rho=d.get("rho", base.rho),
        mu_max=d.get("mu_max", base.mu_max),
        eps=d.get("eps", base.eps),
        max_iter=d.get("max_iter", base.max_iter),
        weight_policy=policy if policy is not None else gwtrpca_policy(),
    )


def load_overrides(path) -> dict:
    """Read a recover-style JSON config: only admm/weights/noise keys."""
    cfg = _read_json(path)
    unknown = set(cfg) - _OVERRIDE_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _read_json(path) -> dict:
    try:
        with open(path) as f:
            cfg = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return cfg


def build_admm(cfg: dict) -> AdmmConfig:
    policy = policy_from_dict(cfg.get("weights", {}))
    return admm_from_dict(cfg.get("admm", {}), policy)


def _max_workers(n_jobs: int) -> int:
    env = os.environ.get("TUBALRPCA_THREADS")
    if env is None:
        return 1
    try:
        cap = int(env)
    except ValueError as e:
        raise ConfigError(f"TUBALRPCA_THREADS must be an integer, got {env!r}") from e
    return max(1, min(n_jobs, cap))


def run_suite(config_path):
    """Run every (input, method) pair of a suite config.

    All methods see the identical corrupted tensor for a given input
    (corruption depends only on input and seed). Writes results.csv
    (one row per run, config order) and summary.csv (per-method mean
    PSNR) into out_dir; returns (rows, summary dict).
    """
    cfg = _read_json(config_path)
    unknown = set(cfg) - _SUITE_KEYS
    if unknown:
        raise ConfigError(f"unknown suite config keys: {sorted(unknown)}")
    for key in ("inputs", "methods", "out_dir"):
        if key not in cfg:
            raise ConfigError(f"suite config is missing {key!r}")
    inputs = cfg["inputs"]
    methods = cfg["methods"]
    if not inputs or not isinstance(inputs, list):
        raise ConfigError("inputs must be a non-empty list of paths")
    if not isinstance(methods, list) or not methods or any(m not in METHODS for m in methods):
        raise ConfigError(f"methods must be a non-empty subset of {sorted(METHODS)}, got {methods}")
    admm = build_admm(cfg)
    out_dir = Path(cfg["out_dir"])

    experiments = [
        Experiment(
            input=path,
            method=m,
            corruption=cfg.get("corruption", 0.0),
            seed=cfg.get("seed", 0),
            noise=cfg.get("noise", "auto"),
            admm=admm,
            out_dir=out_dir,
        )
        for path in inputs
        for m in methods
    ]
    workers = _max_workers(len(experiments))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(lambda e: run_experiment(e, results_csv=None), experiments))
    else:
        rows = [run_experiment(e, results_csv=None) for e in experiments]

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "results.csv", "w") as f:
        f.write(CSV_HEADER + "\n")
        for row in rows:
            f.write(row.to_csv() + "\n")
    summary: dict[str, float] = {}
    for m in methods:
        vals = [r.psnr_db for r in rows if r.method == m]
        summary[m] = sum(vals) / len(vals)
    with open(out_dir / "summary.csv", "w") as f:
        f.write("method,mean_psnr_db\n")
        for m in methods:
            v = "inf" if math.isinf(summary[m]) else f"{summary[m]:.4f}"
            f.write(f"{m},{v}\n")
    return rows, summary

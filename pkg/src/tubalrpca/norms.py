"""Tensor nuclear norms and their proximal operators.

The weighted norm attaches two weight vectors to the spectrum of a
tensor: `w_intra` weights singular values by index inside each
frequency slice, `w_inter` weights whole frequency slices. The
proximal operator shrinks each singular value by tau * w_inter[k] *
w_intra[i]; with the intra weights non-decreasing every per-slice
subproblem is an exactly-solvable weighted nuclear norm minimization,
so the operator is an exact minimizer, not a heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatch
from .spectral import _irfft_stack, _rfft_stack, _stack_svd, csvd, half_multiplicity, n_unique_slices
from .tensor import as_tensor3


@dataclass
class WeightSpec:
    """Intra-slice weights (length min(d1,d2)) and inter-slice weights (length d3).

    Intra weights must be nonnegative and non-decreasing (the exactness
    condition for the prox); inter weights must be strictly positive and
    conjugate-symmetric (w_inter[k] == w_inter[-k mod d3]): a zero would
    annihilate a whole frequency slice and an asymmetric vector cannot
    produce a real-valued operator.
    """

    w_intra: np.ndarray
    w_inter: np.ndarray

    def __post_init__(self):
        self.w_intra = np.asarray(self.w_intra, dtype=np.float64).ravel()
        self.w_inter = np.asarray(self.w_inter, dtype=np.float64).ravel()
        if self.w_intra.size == 0 or self.w_inter.size == 0:
            raise ConfigError("weight vectors must be non-empty")
        if np.any(self.w_intra < 0):
            raise ConfigError("intra-slice weights must be nonnegative")
        if np.any(np.diff(self.w_intra) < 0):
            raise ConfigError("intra-slice weights must be non-decreasing")
        if np.any(self.w_inter <= 0):
            raise ConfigError("inter-slice weights must be strictly positive")
        d3 = self.w_inter.size
        mirror = (-np.arange(d3)) % d3
        if np.any(self.w_inter[mirror] != self.w_inter):
            raise ConfigError("inter-slice weights must be conjugate-symmetric")

    @staticmethod
    def uniform(d: int, d3: int) -> "WeightSpec":
        return WeightSpec(np.ones(d), np.ones(d3))


def _check_weight_dims(shape, w: WeightSpec):
    d1, d2, d3 = shape
    if w.w_intra.size != min(d1, d2):
        raise DimensionMismatch(
            f"w_intra has length {w.w_intra.size}, expected {min(d1, d2)}"
        )
    if w.w_inter.size != d3:
        raise DimensionMismatch(f"w_inter has length {w.w_inter.size}, expected {d3}")


def tnn(x) -> float:
    """Tensor nuclear norm: mean over frequency slices of the slice nuclear norms."""
    x = as_tensor3(x)
    d3 = x.shape[2]
    sf = np.linalg.svd(_rfft_stack(x), compute_uv=False)
    return float(np.sum(half_multiplicity(d3)[:, None] * sf) / d3)


def gwtnn(x, w: WeightSpec) -> float:
    """Weighted tensor nuclear norm: (1/d3) sum_k w_inter[k] sum_i w_intra[i] s_i(k).

    With all weights 1 this equals :func:`tnn`.
    """
    x = as_tensor3(x)
    d3 = x.shape[2]
    _check_weight_dims(x.shape, w)
    sf = np.linalg.svd(_rfft_stack(x), compute_uv=False)
    h = n_unique_slices(d3)
    slice_w = half_multiplicity(d3) * w.w_inter[:h]
    return float(np.sum(slice_w[:, None] * sf * w.w_intra[None, :]) / d3)


def _check_wsvt_weights(w, d: int) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64).ravel()
    if w.size != d:
        raise DimensionMismatch(f"weight vector has length {w.size}, expected {d}")
    if np.any(w < 0) or np.any(np.diff(w) < 0):
        raise ConfigError("weights must be nonnegative and non-decreasing")
    return w


def wsvt(m, w, tau: float) -> np.ndarray:
    """Weighted singular value thresholding of a matrix.

    Shrinks the i-th singular value by tau * w[i] and truncates at zero;
    for non-decreasing nonnegative `w` this is the exact minimizer of
    0.5*||L - m||_F^2 + tau * sum_i w[i]*sigma_i(L).
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise DimensionMismatch(f"wsvt expects a matrix, got {m.shape}")
    w = _check_wsvt_weights(w, min(m.shape))
    if tau < 0:
        raise ConfigError("tau must be nonnegative")
    u, s, vh = csvd(m, full_matrices=False)
    s = np.maximum(s - tau * w, 0.0)
    return (u * s) @ vh


def prox_gwtnn(m, w: WeightSpec, tau: float) -> np.ndarray:
    """Proximal operator of tau * gwtnn at `m`.

    Per unique frequency slice k: SVD, shrink singular value i by
    tau * w_inter[k] * w_intra[i], reconstruct; mirrored slices reuse
    the conjugated result, and the inverse transform is exactly real.
    """
    m = as_tensor3(m)
    d3 = m.shape[2]
    _check_weight_dims(m.shape, w)
    if tau < 0:
        raise ConfigError("tau must be nonnegative")
    h = n_unique_slices(d3)
    uf, sf, vhf = _stack_svd(_rfft_stack(m), full_matrices=False)
    thr = tau * w.w_inter[:h, None] * w.w_intra[None, :]
    sf = np.maximum(sf - thr, 0.0)
    zf = (uf * sf[:, None, :]) @ vhf
    return _irfft_stack(zf, d3)


def soft_threshold(h, thr: float) -> np.ndarray:
    """Entrywise shrink-toward-zero: sign(h) * max(|h| - thr, 0)."""
    if thr < 0:
        raise ConfigError("threshold must be nonnegative")
    h = np.asarray(h, dtype=np.float64)
    return np.sign(h) * np.maximum(np.abs(h) - thr, 0.0)

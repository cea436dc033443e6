"""Mode-3 Fourier transforms, the tensor-tensor product, and the t-SVD.

Everything here exploits the conjugate symmetry of the spectrum of a
real tensor: per-slice SVDs and products are computed only for the
unique frequency slices k = 0 .. d3//2 and the mirrored slices are
implied (rfft/irfft), which halves the work and makes inverse
transforms exactly real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NumericFailure, SymmetryViolation
from .tensor import as_tensor3, conj_asymmetry

IDFT_SYMMETRY_RTOL = 1e-8


def n_unique_slices(d3: int) -> int:
    """Number of frequency slices not implied by conjugate symmetry."""
    return d3 // 2 + 1


def half_multiplicity(d3: int) -> np.ndarray:
    """How many full-spectrum slices each unique slice stands for."""
    mult = np.full(n_unique_slices(d3), 2.0)
    mult[0] = 1.0
    if d3 % 2 == 0:
        mult[-1] = 1.0
    return mult


def dft3(x) -> np.ndarray:
    """Unnormalized forward DFT of every tube; output is conjugate-symmetric."""
    return np.fft.fft(as_tensor3(x), axis=2)


def idft3(xf, rtol: float = IDFT_SYMMETRY_RTOL) -> np.ndarray:
    """Inverse DFT along tubes with 1/d3 normalization, returned real.

    Rejects spectra whose conjugate asymmetry exceeds `rtol` relative to
    the largest entry: such input cannot come from a real tensor.
    """
    xf = np.asarray(xf, dtype=np.complex128)
    if xf.ndim != 3:
        raise DimensionMismatch(f"expected 3-order spectrum, got {xf.shape}")
    scale = float(np.max(np.abs(xf)))
    if scale > 0 and conj_asymmetry(xf) > rtol * scale:
        raise SymmetryViolation(
            f"spectrum asymmetry {conj_asymmetry(xf):.3e} exceeds "
            f"{rtol:.1e} * {scale:.3e}; upstream slice handling is inconsistent"
        )
    return np.fft.ifft(xf, axis=2).real


def csvd(m, full_matrices: bool = True):
    """SVD of a real or complex matrix: (u, s, vh) with m = u @ diag(s) @ vh.

    s is real, nonnegative, non-increasing; u and vh have unitary
    columns/rows. LAPACK non-convergence surfaces as NumericFailure.
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise DimensionMismatch(f"csvd expects a matrix, got shape {m.shape}")
    try:
        return np.linalg.svd(m, full_matrices=full_matrices)
    except np.linalg.LinAlgError as e:
        raise NumericFailure(f"SVD did not converge: {e}") from e


def _rfft_stack(x: np.ndarray) -> np.ndarray:
    """Unique frequency slices as a (d3//2+1, d1, d2) matrix stack."""
    return np.fft.rfft(x, axis=2).transpose(2, 0, 1)


def _irfft_stack(zf: np.ndarray, d3: int) -> np.ndarray:
    """Inverse of :func:`_rfft_stack`; exact-real by construction."""
    return np.fft.irfft(zf.transpose(1, 2, 0), n=d3, axis=2)


def _stack_svd(xf: np.ndarray, full_matrices: bool):
    """Batched SVD over a stack of frequency slices, slice index on errors."""
    try:
        return np.linalg.svd(xf, full_matrices=full_matrices)
    except np.linalg.LinAlgError:
        for k in range(xf.shape[0]):
            try:
                np.linalg.svd(xf[k], full_matrices=full_matrices)
            except np.linalg.LinAlgError as e:
                raise NumericFailure(
                    f"SVD did not converge on frequency slice {k}: {e}"
                ) from e
        raise NumericFailure("batched SVD did not converge")


def tprod(x, y) -> np.ndarray:
    """Tensor-tensor product of (d1, d2, d3) and (d2, l, d3).

    Equal to fold(bcirc(x) @ unfold(y)); computed as per-slice products
    in the Fourier domain.
    """
    x = as_tensor3(x, "x")
    y = as_tensor3(y, "y")
    if x.shape[1] != y.shape[0] or x.shape[2] != y.shape[2]:
        raise DimensionMismatch(f"tprod shapes incompatible: {x.shape} * {y.shape}")
    zf = _rfft_stack(x) @ _rfft_stack(y)
    return _irfft_stack(zf, x.shape[2])


def conj_transpose(x) -> np.ndarray:
    """Transpose every frontal slice, then reverse the order of slices 2..d3."""
    x = as_tensor3(x)
    y = x.transpose(1, 0, 2)
    return np.concatenate([y[:, :, :1], y[:, :, :0:-1]], axis=2)


@dataclass
class TSvd:
    """Factors of x = u * s * v^H (t-product): u, v orthogonal, s f-diagonal."""

    u: np.ndarray  # (d1, d1, d3)
    s: np.ndarray  # (d1, d2, d3), every frontal slice diagonal
    v: np.ndarray  # (d2, d2, d3)

    def reconstruct(self) -> np.ndarray:
        return tprod(tprod(self.u, self.s), conj_transpose(self.v))


def tsvd(x) -> TSvd:
    """t-SVD via full SVDs of the unique frequency slices.

    Mirrored slices reuse the conjugated factors, so the inverse
    transforms are exactly real and mirrored singular values agree
    bit-for-bit.
    """
    x = as_tensor3(x)
    d1, d2, d3 = x.shape
    dmin = min(d1, d2)
    xf = _rfft_stack(x)
    uf, sf, vhf = _stack_svd(xf, full_matrices=True)
    sf_full = np.zeros((xf.shape[0], d1, d2), dtype=np.float64)
    sf_full[:, np.arange(dmin), np.arange(dmin)] = sf
    u = _irfft_stack(uf, d3)
    s = _irfft_stack(sf_full, d3)
    v = _irfft_stack(vhf.conj().transpose(0, 2, 1), d3)
    return TSvd(u=u, s=s, v=v)

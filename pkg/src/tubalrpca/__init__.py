"""Low-tubal-rank + sparse tensor decomposition.

Decomposes a 3-order tensor X into L + E, where L has low tubal rank
(measured by a globally weighted tensor nuclear norm in the mode-3
Fourier domain) and E is entrywise sparse, via ADMM. Ships a batch CLI
for image recovery and tensor denoising experiments.
"""

from .errors import (
    ConfigError,
    DimensionMismatch,
    FormatError,
    InputError,
    NumericFailure,
    SymmetryViolation,
)
from .harness import (
    Experiment,
    MetricsRow,
    corrupt_tubes,
    make_test_image,
    psnr,
    run_experiment,
    run_suite,
    salt_pepper,
    synth_low_rank_sparse,
)
from .imageio import load_image, save_image
from .norms import WeightSpec, gwtnn, prox_gwtnn, soft_threshold, tnn, wsvt
from .rng import SplitMix64
from .solver import (
    AdmmConfig,
    SolveReport,
    default_lambda,
    solve,
    solve_etrpca_like,
    solve_rpca_per_channel,
    solve_trpca,
)
from .spectral import TSvd, conj_transpose, csvd, dft3, idft3, tprod, tsvd
from .tensor import (
    axpy,
    bcirc,
    fold,
    fro_norm,
    identity_tensor,
    inf_norm,
    l1_norm,
    read_t3b,
    unfold,
    write_t3b,
)
from .weights import (
    WeightPolicy,
    etrpca_policy,
    grouped_intra,
    gwtrpca_policy,
    mce_inter_weights,
    slice_energies,
    trpca_policy,
)

__version__ = "0.1.0"

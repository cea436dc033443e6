"""Command-line interface.

Subcommands: recover (decompose one input), synth (generate ground
truth for recovery tests), suite (batch runs from a JSON config), info
(spectral summary of an input). Exit codes: 0 success, 1 usage/config,
2 I/O or format, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    DimensionMismatch,
    FormatError,
    InputError,
    NumericFailure,
    SymmetryViolation,
)
from .harness import (
    METHODS,
    Experiment,
    build_admm,
    load_overrides,
    load_tensor,
    run_experiment,
    run_suite,
    synth_low_rank_sparse,
)
from .spectral import dft3
from .tensor import write_t3b


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1 (argparse default is 2)
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    p = _Parser(prog="tubalrpca", description="Low-tubal-rank + sparse tensor decomposition")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    r = sub.add_parser("recover", help="decompose an image or .t3b tensor")
    r.add_argument("--input", required=True, help="PNG, P6 PPM, or .t3b file")
    r.add_argument("--method", required=True, choices=sorted(METHODS))
    r.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="sparsity tradeoff (default: 1/sqrt(d3*max(d1,d2)))")
    r.add_argument("--corrupt", type=float, default=0.0,
                   help="corruption fraction to inject before solving")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--config", default=None, help="JSON with admm/weights/noise overrides")
    r.add_argument("--out", required=True, help="output directory")
    r.set_defaults(func=cmd_recover)

    s = sub.add_parser("synth", help="generate a low-tubal-rank + sparse ground-truth pair")
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--d3", type=int, required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--sparsity", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    u = sub.add_parser("suite", help="run a batch of experiments from a JSON config")
    u.add_argument("--config", required=True)
    u.set_defaults(func=cmd_suite)

    i = sub.add_parser("info", help="print dims, slice energies, and spectrum checks")
    i.add_argument("--input", required=True)
    i.set_defaults(func=cmd_info)
    return p


def cmd_recover(args) -> int:
    overrides = load_overrides(args.config) if args.config else {}
    admm = build_admm(overrides)
    if args.lam is not None:
        admm = replace(admm, lam=args.lam)
    e = Experiment(
        input=args.input,
        method=args.method,
        corruption=args.corrupt,
        seed=args.seed,
        noise=overrides.get("noise", "auto"),
        admm=admm,
        out_dir=args.out,
    )
    row = run_experiment(e)
    print(f"method={row.method} psnr_db={row.psnr_db:.4f} iterations={row.iterations} "
          f"seconds={row.seconds:.3f}")
    print(f"artifacts in {args.out}")
    return 0


def cmd_synth(args) -> int:
    l0, e0 = synth_low_rank_sparse(args.d1, args.d2, args.d3, args.rank, args.sparsity, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_t3b(l0, out / "ground_l.t3b")
    write_t3b(e0, out / "ground_e.t3b")
    write_t3b(l0 + e0, out / "observed.t3b")
    meta = {
        "d1": args.d1, "d2": args.d2, "d3": args.d3,
        "rank": args.rank, "sparsity": args.sparsity, "seed": args.seed,
    }
    with open(out / "meta.json", "w") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"wrote ground_l.t3b, ground_e.t3b, observed.t3b, meta.json to {out}")
    return 0


def cmd_suite(args) -> int:
    rows, summary = run_suite(args.config)
    for row in rows:
        print(row.to_csv())
    print("-- mean PSNR per method --")
    for method, value in summary.items():
        print(f"{method}: {'inf' if math.isinf(value) else f'{value:.4f}'}")
    return 0


def cmd_info(args) -> int:
    t = load_tensor(args.input)
    d1, d2, d3 = t.shape
    xf = dft3(t)
    energies = [float(np.linalg.svd(xf[:, :, k], compute_uv=False).sum()) for k in range(d3)]
    top = max(max(energies), 1e-300)
    half = d3 // 2 + 1
    nonincreasing = all(
        energies[k + 1] <= energies[k] + 1e-8 * top for k in range(half - 1)
    )
    symmetric = all(
        abs(energies[k] - energies[(-k) % d3]) <= 1e-8 * top for k in range(d3)
    )
    print(f"input: {args.input}")
    print(f"dims: {d1} x {d2} x {d3}")
    print("slice_energies: " + " ".join(f"{v:.6g}" for v in energies))
    print(f"first-half non-increasing: {'yes' if nonincreasing else 'no'}")
    print(f"mirror-symmetric within 1e-8: {'yes' if symmetric else 'no'}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"tubalrpca: config error: {e}", file=sys.stderr)
        return 1
    except (FormatError, DimensionMismatch) as e:
        print(f"tubalrpca: input error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"tubalrpca: i/o error: {e}", file=sys.stderr)
        return 2
    except (NumericFailure, SymmetryViolation, InputError, np.linalg.LinAlgError) as e:
        print(f"tubalrpca: numeric failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver: ``normlab norm | verify | selftest``."""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import experiments
from .garling_seq import gnorm, gnorm_bruteforce, parse_sequence_weights
from .norms import (
    GNormParams,
    cell_dp_oracle,
    garling_function_norm,
    identity_packing_norm,
    lp_norm,
    schreier_y_norm,
)
from .stepfn import load_step_function, make_step_function
from .weights import parse_weight_function

_ARITH = re.compile(r"[0-9eEpi.+\-*/() ]+")


def _floats(text: str) -> list[float]:
    # accepts arithmetic such as e^8-1 for convenience
    out = []
    for item in text.split(","):
        item = item.strip().replace("^", "**")
        if not _ARITH.fullmatch(item):
            raise argparse.ArgumentTypeError(f"not a number: {item!r}")
        out.append(float(eval(item, {"__builtins__": {}}, {"e": math.e, "pi": math.pi})))
    return out


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",")]


def _read_sequence(path: str) -> list[float]:
    values = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            values.append(float(line))
    return values


def _seed(args) -> int:
    env = os.environ.get("NORMLAB_SEED")
    return int(env) if env not in (None, "") else args.seed


def cmd_norm(args) -> int:
    if args.space == "g":
        seq = _read_sequence(args.input)
        w = parse_sequence_weights(args.weight, args.p)
        value = gnorm(seq, w)
    else:
        f = load_step_function(args.input)
        if args.space == "G":
            params = GNormParams(args.p, parse_weight_function(args.weight), args.grid, refine=args.refine)
            value = garling_function_norm(f, params)
        elif args.space == "Y":
            value = schreier_y_norm(f)
        else:
            value = lp_norm(f, args.p)
    print(f"{value:.12g}")
    return 0


def cmd_verify(args) -> int:
    exp = args.experiment
    if exp == "y":
        table = experiments.run_y_counterexample(args.b, offset=args.offset,
                                                 tol=1e-9 if args.tol is None else args.tol)
    elif exp == "divergence":
        table = experiments.run_garling_divergence(args.r, args.n_cells, bound=args.bound)
    elif exp == "charbasis":
        table = experiments.run_char_basis_check(args.N, parse_weight_function(args.weight), args.p,
                                                 h=args.grid, tol=1e-3 if args.tol is None else args.tol)
    else:
        table = experiments.run_lp_block_check(args.k, args.trials, parse_weight_function(args.weight),
                                               args.p, seed=_seed(args),
                                               tol=1e-3 if args.tol is None else args.tol)
    text = table.to_csv()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    for msg in table.failures:
        print(f"FAIL: {msg}", file=sys.stderr)
    return 0 if table.ok else 1


def run_selftest(seed: int, n_seq: int = 200, n_fun: int = 20) -> list[str]:
    """Oracle-equivalence and invariant spot checks; returns failure messages."""
    rng = np.random.default_rng(seed)
    failures = []
    for i in range(n_seq):
        n = int(rng.integers(1, 11))
        p = float(rng.choice([1.0, 1.5, 2.0]))
        f = rng.uniform(0, 5, n) * (rng.random(n) < 0.8)
        w = parse_sequence_weights(f"power:{rng.uniform(0.1, 1.0):.6f}", p)
        a, b = gnorm(f, w), gnorm_bruteforce(f, w)
        if abs(a - b) > 1e-12 * max(1.0, b):
            failures.append(f"gnorm instance {i}: dp {a!r} vs brute {b!r}")
        if abs(gnorm(3.0 * f, w) - 3.0 * a) > 1e-9 * max(1.0, a):
            failures.append(f"gnorm instance {i}: homogeneity")
    W = parse_weight_function("power:0.5")
    h = 2.0**-6
    for i in range(n_fun):
        n = int(rng.integers(1, 5))
        edges = np.sort(rng.choice(np.arange(1, 129), size=2 * n, replace=False)) / 32.0
        raw = [(edges[2 * j], edges[2 * j + 1], float(rng.integers(1, 20)) / 4) for j in range(n)]
        f = make_step_function(raw)
        grid = garling_function_norm(f, GNormParams(1.0, W, h))
        cell = cell_dp_oracle(f, W, 1.0, h)
        if abs(grid - cell) > 1e-12 * max(1.0, cell):
            failures.append(f"function {i}: grid {grid!r} vs cell oracle {cell!r}")
        if grid < identity_packing_norm(f, W, 1.0) - 1e-12:
            failures.append(f"function {i}: below the identity packing")
    return failures


def cmd_selftest(args) -> int:
    failures = run_selftest(_seed(args))
    for msg in failures:
        print(f"FAIL: {msg}", file=sys.stderr)
    print("selftest: " + ("ok" if not failures else f"{len(failures)} failure(s)"))
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="compute one norm of an input file")
    p_norm.add_argument("--space", choices=["g", "G", "Y", "Lp"], required=True, help="g: sequence, G: Garling function, Y, Lp")
    p_norm.add_argument("--weight", default="power:0.5", help="weight spec, e.g. power:0.5")
    p_norm.add_argument("--p", type=float, default=1.0)
    p_norm.add_argument("--grid", type=float, default=2.0**-8, help="grid step h for the G engine")
    p_norm.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True)
    p_norm.add_argument("--input", required=True, help="step file (lo hi value) or sequence file (one value per line)")
    p_norm.set_defaults(func=cmd_norm)

    p_ver = sub.add_parser("verify", help="run one separation experiment and write CSV")
    p_ver.add_argument("--experiment", choices=["y", "divergence", "charbasis", "lpblocks"], required=True)
    p_ver.add_argument("--b", type=_floats, default=[1.0, 4.0, 16.0, 100.0])
    p_ver.add_argument("--offset", choices=["sqrt", "square"], default="sqrt", help="interval offset c = sqrt(b) or c = b^2")
    p_ver.add_argument("--r", type=_floats, default=[1.0, 10.0, 100.0, 1000.0, math.exp(8) - 1], help="comma list; expressions like e^8-1 allowed")
    p_ver.add_argument("--n-cells", type=int, default=4096)
    p_ver.add_argument("--bound", type=float, default=4.0)
    p_ver.add_argument("--N", type=_ints, default=[1, 2, 4, 8, 16])
    p_ver.add_argument("--k", type=_ints, default=None, help="block boundaries 1=k1<k2<...")
    p_ver.add_argument("--trials", type=int, default=100)
    p_ver.add_argument("--weight", default="power:0.5")
    p_ver.add_argument("--p", type=float, default=1.0)
    p_ver.add_argument("--grid", type=float, default=2.0**-8)
    p_ver.add_argument("--tol", type=float, default=None, help="override the experiment tolerance")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--output", help="CSV path (default stdout)")
    p_ver.set_defaults(func=cmd_verify)

    p_self = sub.add_parser("selftest", help="oracle-equivalence and invariant checks")
    p_self.add_argument("--seed", type=int, default=0)
    p_self.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"normlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

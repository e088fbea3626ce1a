"""Reproducible separation experiments, each producing a CSV-ready table."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .garling_seq import gnorm, weights_from_W
from .norms import (
    GNormParams,
    garling_function_norm,
    garling_norm_monotone_fastpath,
    identity_packing_norm,
    schreier_y_norm,
)
from .stepfn import StepFunction, equimeasurable, indicator, make_step_function
from .weights import WeightFunction


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, condition: bool, message: str) -> None:
        if not condition:
            self.failures.append(message)

    def column(self, name: str) -> list:
        k = self.columns.index(name)
        return [row[k] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
        return buf.getvalue()


def y_oracle_initial_interval(b: float) -> float:
    """max over a of min(sqrt(a), b - a), by bisection on the crossing point."""
    lo, hi = 0.0, b
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.sqrt(mid) < b - mid:
            lo = mid
        else:
            hi = mid
    return math.sqrt(0.5 * (lo + hi))


def run_y_counterexample(b_list: Sequence[float], offset: str = "sqrt", tol: float = 1e-9) -> Table:
    """Compare ``||1_(c, c+b]||_Y`` with ``||1_(0, b]||_Y``.

    ``offset`` picks the shift: ``sqrt`` uses c = sqrt(b), ``square`` uses c = b**2.
    """
    offsets = {"sqrt": math.sqrt, "square": lambda b: b * b}
    if offset not in offsets:
        raise ValueError(f"offset must be one of {sorted(offsets)}")
    table = Table(["b", "c", "y_shifted", "y_initial", "y_initial_oracle", "ratio", "sqrt_b"])
    for b in b_list:
        if b <= 0:
            raise ValueError("b must be positive")
        c = offsets[offset](b)
        shifted = schreier_y_norm(indicator(c, c + b))
        initial = schreier_y_norm(indicator(0.0, b))
        oracle = y_oracle_initial_interval(b)
        ratio = shifted / initial
        table.rows.append([float(b), c, shifted, initial, oracle, ratio, math.sqrt(b)])
        table.check(abs(shifted - b) <= tol, f"b={b}: ||1_(c,c+b]||_Y={shifted!r} != b")
        table.check(initial <= math.sqrt(b) + tol, f"b={b}: ||1_(0,b]||_Y={initial!r} > sqrt(b)")
        table.check(abs(initial - oracle) <= 1e-6, f"b={b}: Y norm {initial!r} vs oracle {oracle!r}")
        table.check(ratio >= math.sqrt(b) - tol, f"b={b}: ratio {ratio!r} < sqrt(b)")
    return table


def divergence_pair(r: float, n_cells: int) -> dict[str, StepFunction]:
    """Step approximants of ``f_r(t) = (r+1-t)^-1/2`` and ``f_r*(t) = (t+1)^-1/2`` on (0, r].

    Cells are geometric in ``t + 1`` for the decreasing function and mirrored
    (``t -> r - t``) for the increasing one, so each lower/upper approximant
    of one function has the same (value, length) histogram as the matching
    approximant of the other.
    """
    t = np.expm1(np.arange(n_cells + 1) / n_cells * math.log1p(r))
    t[-1] = r
    dec = lambda x: (x + 1.0) ** -0.5
    inc = lambda x: (r + 1.0 - x) ** -0.5
    x = r - t[::-1]  # mirrored cell edges, ascending
    x[0] = 0.0
    return {
        "fstar_lower": make_step_function(zip(t[:-1], t[1:], dec(t[1:]))),
        "fstar_upper": make_step_function(zip(t[:-1], t[1:], dec(t[:-1]))),
        "f_lower": make_step_function(zip(x[:-1], x[1:], inc(x[:-1]))),
        "f_upper": make_step_function(zip(x[:-1], x[1:], inc(x[1:]))),
    }


def run_garling_divergence(r_list: Sequence[float], n_cells: int = 4096, bound: float = 4.0) -> Table:
    """Norm of f_r* grows like log(r+1) while the norm of its rearrangement f_r stays bounded."""
    if n_cells < 64:
        raise ValueError("n_cells must be >= 64")
    W = WeightFunction.power(0.5)
    table = Table(["r", "n_cells", "norm_fstar_lower", "log_r_plus_1", "norm_f_upper", "bound",
                   "slack", "ratio", "equimeasurable_check"])
    for r in r_list:
        if r <= 0:
            raise ValueError("r must be positive")
        pair = divergence_pair(r, n_cells)
        # identity packing of the lower approximant bounds the norm of f_r* from below
        fstar_lower = identity_packing_norm(pair["fstar_lower"], W, 1.0)
        slack = identity_packing_norm(pair["fstar_upper"], W, 1.0) - fstar_lower
        f_upper = garling_norm_monotone_fastpath(pair["f_upper"], W, 1.0)
        equi = (equimeasurable(pair["f_upper"], pair["fstar_upper"])
                and equimeasurable(pair["f_lower"], pair["fstar_lower"]))
        log_r = math.log1p(r)
        table.rows.append([float(r), n_cells, fstar_lower, log_r, f_upper, bound, slack,
                           fstar_lower / f_upper, equi])
        table.check(fstar_lower >= log_r - slack, f"r={r}: {fstar_lower!r} < log(r+1) - slack")
        table.check(f_upper <= bound + slack, f"r={r}: {f_upper!r} > {bound} + slack")
        table.check(equi, f"r={r}: discretizations are not equimeasurable")
    return table


def run_char_basis_check(N_list: Sequence[int], W: WeightFunction, p: float = 1.0,
                         h: float = 2.0**-8, tol: float = 1e-3) -> Table:
    """``||1_1 + ... + 1_N||_G`` against ``W_hat(N)^(1/p)`` and the sequence norm of ones."""
    K = W.cumulative(1.0)
    params = GNormParams(p, W, h, refine=True)
    table = Table(["N", "norm_G", "predicted", "K_gnorm", "sum_K_w"])
    for N in N_list:
        if N < 1:
            raise ValueError("N must be >= 1")
        f = make_step_function([(i - 1, i, 1.0) for i in range(1, N + 1)])
        norm = garling_function_norm(f, params)
        predicted = W.cumulative(float(N)) ** (1.0 / p)
        w = weights_from_W(W, N, p)
        seq = K ** (1.0 / p) * gnorm(np.ones(N), w)
        summed = (K * float(np.sum(w.take(N)))) ** (1.0 / p)
        table.rows.append([int(N), norm, predicted, seq, summed])
        table.check(abs(norm - predicted) <= tol * predicted, f"N={N}: {norm!r} vs {predicted!r}")
        table.check(abs(seq - predicted) <= tol * predicted, f"N={N}: K^(1/p) gnorm {seq!r} vs {predicted!r}")
    return table


def default_boundaries(n_blocks: int = 6) -> list[int]:
    return [2**i for i in range(n_blocks + 1)]


def growth_boundaries(q: int, n_blocks: int = 6) -> list[int]:
    """Boundaries whose i-th block has length q**(i-1)."""
    k = [1]
    for i in range(n_blocks):
        k.append(k[-1] + q**i)
    return k


def _block_indicators(k: Sequence[int]) -> list[StepFunction]:
    if k[0] != 1 or any(b <= a for a, b in zip(k, k[1:])):
        raise ValueError("boundaries must satisfy 1 = k_1 < k_2 < ...")
    return [indicator(a - 1.0, b - 1.0) for a, b in zip(k, k[1:])]


def block_combination(k: Sequence[int], coeffs: Sequence[float], block_norms: Sequence[float]) -> StepFunction:
    raw = [(a - 1.0, b - 1.0, abs(c) / nb) for a, b, c, nb in zip(k, k[1:], coeffs, block_norms)]
    return make_step_function(raw)


def run_lp_block_check(k: Sequence[int] | None, coeff_trials: int, W: WeightFunction, p: float = 1.0,
                       seed: int = 0, h: float = 2.0**-4, tol: float = 1e-3,
                       growth_factors: Sequence[int] = (2, 4, 8, 16)) -> Table:
    """Normalized constant-coefficient blocks are 1-dominated by the l_p basis.

    ``trial`` rows test random coefficients on the blocks ``k``; the
    ``constant`` row reports the lower ratio for all-ones coefficients;
    ``growth`` rows repeat it for schedules whose block lengths grow by
    factors q = 2, 4, 8, ... and must be nondecreasing in q.
    """
    k = list(default_boundaries() if k is None else k)
    blocks = _block_indicators(k)
    m = len(blocks)
    params = GNormParams(p, W, h, refine=True)
    norms = [garling_function_norm(b, params) for b in blocks]
    rng = np.random.default_rng(seed)
    table = Table(["kind", "label", "lhs", "rhs", "ratio"])
    for trial in range(coeff_trials):
        a = rng.standard_normal(m)
        if trial == 0:
            a = np.eye(m)[0]
        lhs = garling_function_norm(block_combination(k, a, norms), params)
        rhs = float(np.sum(np.abs(a) ** p) ** (1.0 / p))
        table.rows.append(["trial", trial, lhs, rhs, lhs / rhs])
        table.check(lhs <= rhs + tol, f"trial {trial}: {lhs!r} > ||a||_p={rhs!r}")

    ones = np.ones(m)
    lhs = garling_function_norm(block_combination(k, ones, norms), params)
    rhs = m ** (1.0 / p)
    table.rows.append(["constant", "given", lhs, rhs, lhs / rhs])

    previous = -math.inf
    for q in growth_factors:
        kq = growth_boundaries(q, m)
        # integer block edges: the unit grid already contains the keep-everything packing
        coarse = GNormParams(p, W, 1.0)
        nq = [garling_function_norm(b, coarse) for b in _block_indicators(kq)]
        lhs = garling_function_norm(block_combination(kq, ones, nq), coarse)
        ratio = lhs / rhs
        table.rows.append(["growth", q, lhs, rhs, ratio])
        table.check(ratio >= previous - 1e-12, f"growth q={q}: ratio {ratio!r} decreased")
        table.check(lhs <= rhs + tol, f"growth q={q}: {lhs!r} > {rhs!r}")
        previous = ratio
    return table

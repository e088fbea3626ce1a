"""Function-space norms of step functions.

* :func:`garling_function_norm` - the Garling function norm, reduced to
  choosing how much of each piece to keep and packing the kept mass to the
  left, then solved by a grid DP over the packed length.
* :func:`garling_norm_monotone_fastpath` - the same norm for functions that
  are nondecreasing on their support ``(0, r]``, as a 1-D maximization over
  right-aligned windows.
* :func:`schreier_y_norm` - ``sup_a`` of the largest mass of ``f`` on
  ``[a, inf)`` that fits in measure ``sqrt(a)``.
* :func:`lp_norm` and :func:`cell_dp_oracle` - reference norm and an
  independent cell-by-cell DP used to certify the grid engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stepfn import StepFunction
from .weights import WeightFunction

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
SNAP = 1e-9


class NormError(ValueError):
    pass


@dataclass(frozen=True)
class GNormParams:
    p: float
    W: WeightFunction
    h: float = 2.0**-8
    refine: bool = False
    rel_tol: float = 1e-4
    max_states: int = 1 << 22

    def __post_init__(self):
        if self.p < 1:
            raise NormError(f"p must be >= 1, got {self.p}")
        if not self.h > 0:
            raise NormError(f"grid step must be positive, got {self.h}")


def _cell_counts(f: StepFunction, h: float) -> np.ndarray:
    return np.array([int(math.floor(iv.length / h + SNAP)) for iv, _ in f.pieces], dtype=np.int64)


def _trailing_window_max(g: np.ndarray, width: int) -> np.ndarray:
    """out[i] = max(g[i - width + 1 : i + 1]) (window clipped at 0)."""
    out = g.copy()
    span = 1
    while span < width:
        step = min(span, width - span)
        shifted = np.full_like(out, -np.inf)
        shifted[step:] = out[:-step]
        np.maximum(out, shifted, out=out)
        span += step
    return out


def _grid_power_value(f: StepFunction, W: WeightFunction, p: float, h: float) -> float:
    """max of sum_j a_j^p (W_hat(L_j) - W_hat(L_{j-1})) with kept lengths on the h-grid."""
    counts = _cell_counts(f, h)
    total = int(counts.sum())
    if total == 0:
        return 0.0
    Wg = W.cumulative(h * np.arange(total + 1, dtype=float))
    best = np.full(total + 1, -np.inf)
    best[0] = 0.0
    reach = 0
    for (iv, a), c in zip(f.pieces, counts):
        if c == 0:
            continue
        reach += int(c)
        coef = a**p
        head = best[: reach + 1]
        # keep l cells of this piece after L - l packed cells:
        # best'[L] = coef W_hat(L) + max_{L-c <= M <= L} (best[M] - coef W_hat(M))
        win = _trailing_window_max(head - coef * Wg[: reach + 1], int(c) + 1)
        best[: reach + 1] = coef * Wg[: reach + 1] + win
    return float(np.max(best[: reach + 1]))


def garling_function_norm(f: StepFunction, params: GNormParams) -> float:
    """Grid lower bound on the Garling function norm of f.

    With ``params.refine`` the grid is halved until two successive halvings
    each change the value by less than ``params.rel_tol`` (or the state
    budget is exhausted).
    """
    if f.is_zero():
        return 0.0
    p, W, h = params.p, params.W, params.h
    value = _grid_power_value(f, W, p, h)
    if params.refine:
        # two agreeing halvings in a row: one can be a fluke of the snapping
        agreed = 0
        while agreed < 2:
            h /= 2.0
            if f.support_measure / h > params.max_states:
                break
            finer = _grid_power_value(f, W, p, h)
            agreed = agreed + 1 if abs(finer - value) <= params.rel_tol * abs(finer) else 0
            value = max(value, finer)
    return value ** (1.0 / p)


def identity_packing_norm(f: StepFunction, W: WeightFunction, p: float) -> float:
    """``(int f^p W)^(1/p)``: the value of the identity packing, a lower bound on the norm."""
    total = 0.0
    for iv, v in f.pieces:
        total += v**p * (W.cumulative(iv.hi) - W.cumulative(iv.lo))
    return total ** (1.0 / p)


def cell_dp_oracle(f: StepFunction, W: WeightFunction, p: float, h: float,
                   max_states: int = 10**7) -> float:
    """Keep-or-drop DP over individual cells of length h.

    Each piece is cut into ``floor(length / h)`` cells; the state is the
    number of cells kept so far, and keeping the next cell as the k-th kept
    one earns ``a^p (W_hat(k h) - W_hat((k - 1) h))``.
    """
    values = []
    for (iv, v), c in zip(f.pieces, _cell_counts(f, h)):
        values.extend([v**p] * int(c))
    n = len(values)
    if n == 0:
        return 0.0
    if n * (n + 1) > max_states:
        raise NormError(f"{n} cells exceed the oracle state budget")
    increments = np.diff(W.cumulative(h * np.arange(n + 1, dtype=float)))
    best = np.full(n + 1, -np.inf)
    best[0] = 0.0
    for j, v in enumerate(values):
        cand = best[: j + 1] + v * increments[: j + 1]
        best[1 : j + 2] = np.maximum(best[1 : j + 2], cand)
    return float(best.max() ** (1.0 / p))


def _check_nondecreasing(f: StepFunction) -> None:
    prev_hi, prev_v = 0.0, 0.0
    for iv, v in f.pieces:
        if v < prev_v or (iv.lo > prev_hi and prev_v > 0):
            raise NormError("fast path needs f nondecreasing on (0, sup supp f]")
        prev_hi, prev_v = iv.hi, v


def _window_values(f: StepFunction, W: WeightFunction, p: float, cs: np.ndarray) -> np.ndarray:
    """F(c) = int_c^r f(u)^p W(u - c) du for each left edge c."""
    lo = np.array([iv.lo for iv in f.intervals])
    hi = np.array([iv.hi for iv in f.intervals])
    coef = np.array(f.values) ** p
    out = np.empty(len(cs))
    chunk = max(1, (1 << 22) // max(1, len(lo)))
    for start in range(0, len(cs), chunk):
        c = cs[start : start + chunk, None]
        upper = W.cumulative(np.maximum(hi[None, :] - c, 0.0))
        lower = W.cumulative(np.maximum(lo[None, :] - c, 0.0))
        out[start : start + chunk] = (coef[None, :] * (upper - lower)).sum(axis=1)
    return out


def _golden_max(func, a: float, b: float, tol: float = 1e-12, max_iter: int = 200):
    x1, x2 = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    f1, f2 = func(x1), func(x2)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = func(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = func(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _scan_then_refine(func_many, candidates: np.ndarray) -> tuple[float, float]:
    cands = np.unique(candidates)
    vals = func_many(cands)
    k = int(np.argmax(vals))
    best_x, best_v = float(cands[k]), float(vals[k])
    lo = cands[max(k - 1, 0)]
    hi = cands[min(k + 1, len(cands) - 1)]
    if hi > lo:
        x, v = _golden_max(lambda t: float(func_many(np.array([t]))[0]), float(lo), float(hi))
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v


def garling_norm_monotone_fastpath(f: StepFunction, W: WeightFunction, p: float,
                                   n_scan: int = 1024) -> float:
    """Norm of a function nondecreasing on its support ``(0, r]``.

    Only windows aligned to the right end ``r`` matter, so this maximizes
    ``int_0^s f(t + r - s)^p W(t) dt`` over ``s`` in ``[0, r]``: at every
    piece boundary, on a uniform scan, then by golden section near the best.
    """
    if f.is_zero():
        return 0.0
    _check_nondecreasing(f)
    r = f.sup
    edges = [x for iv in f.intervals for x in (iv.lo, iv.hi)]
    cands = np.concatenate([[0.0, r], edges, np.linspace(0.0, r, n_scan)])
    _, best = _scan_then_refine(lambda cs: _window_values(f, W, p, cs), cands)
    return max(best, 0.0) ** (1.0 / p)


def _y_profile(f: StepFunction, a_values: np.ndarray) -> np.ndarray:
    """Largest integral of f over a set in [a, inf) of measure sqrt(a), per a."""
    order = np.argsort(-np.array(f.values), kind="stable")
    lo = np.array([f.intervals[k].lo for k in order])
    hi = np.array([f.intervals[k].hi for k in order])
    vals = np.array([f.values[k] for k in order])
    a = a_values[:, None]
    lengths = np.clip(hi[None, :] - np.maximum(lo[None, :], a), 0.0, None)
    cum = np.cumsum(lengths, axis=1)
    budget = np.sqrt(a)
    taken = np.clip(np.minimum(cum, budget) - (cum - lengths), 0.0, None)
    return (taken * vals[None, :]).sum(axis=1)


def schreier_y_norm(f: StepFunction, n_scan: int = 1024) -> float:
    if f.is_zero():
        return 0.0
    edges = [x for iv in f.intervals for x in (iv.lo, iv.hi)]
    cands = np.concatenate([[0.0], edges, np.linspace(0.0, f.sup, n_scan)])
    _, best = _scan_then_refine(lambda a: _y_profile(f, a), cands)
    return best


def lp_norm(f: StepFunction, p: float) -> float:
    if p < 1:
        raise NormError(f"p must be >= 1, got {p}")
    return f.integral(p) ** (1.0 / p)

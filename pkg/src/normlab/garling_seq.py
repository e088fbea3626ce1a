"""Garling sequence norm on finitely supported sequences.

``||f||_g = max over i_1 < ... < i_k of (sum_k |f(i_k)|**p * w(k))**(1/p)``.

Sequences are plain Python/numpy sequences indexed from 0; weight slot ``k``
(0-based) holds ``w(k + 1)`` in the usual 1-based notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .weights import WeightFunction, parse_weight_function


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class SequenceWeights:
    """Nonincreasing positive weights plus the exponent p.

    ``rule`` (1-based ``k -> w(k)``) lets the weights grow on demand.
    """

    w: tuple[float, ...] = ()
    p: float = 1.0
    rule: Callable[[int], float] | None = None

    def __post_init__(self):
        if self.p < 1:
            raise SequenceError(f"p must be >= 1, got {self.p}")
        w = np.asarray(self.w, dtype=float)
        if np.any(w <= 0):
            raise SequenceError("weights must be positive")
        if np.any(np.diff(w) > 0):
            raise SequenceError("weights must be nonincreasing")

    def take(self, n: int) -> np.ndarray:
        if n <= len(self.w):
            return np.asarray(self.w[:n], dtype=float)
        if self.rule is None:
            raise SequenceError(f"need {n} weights, only {len(self.w)} available")
        extra = [self.rule(k) for k in range(len(self.w) + 1, n + 1)]
        out = np.concatenate([np.asarray(self.w, dtype=float), extra])
        if np.any(np.diff(out) > 0) or np.any(out <= 0):
            raise SequenceError("weight rule produced non-monotone or nonpositive weights")
        return out

    @classmethod
    def power(cls, alpha: float, p: float = 1.0) -> "SequenceWeights":
        if not (0 < alpha <= 1):
            raise SequenceError(f"need 0 < alpha <= 1, got {alpha}")
        return cls((), p, lambda k: float(k) ** (-alpha))


def weights_from_W(W: WeightFunction, n: int, p: float = 1.0) -> SequenceWeights:
    """``w(i) = (W_hat(i) - W_hat(i-1)) / W_hat(1)``, for i = 1..n, extendable."""
    if n < 1:
        raise SequenceError("n must be >= 1")
    K = W.cumulative(1.0)
    cum = W.cumulative(np.arange(n + 1, dtype=float))
    w = tuple(float(x) for x in np.diff(cum) / K)

    def rule(k: int) -> float:
        return (W.cumulative(float(k)) - W.cumulative(float(k - 1))) / K

    return SequenceWeights(w, p, rule)


def parse_sequence_weights(spec: str, p: float = 1.0) -> SequenceWeights:
    """``power:<alpha>`` gives ``w(k) = k**-alpha``; ``fromW:power:<alpha>`` derives from W."""
    if spec.startswith("fromW:"):
        return weights_from_W(parse_weight_function(spec), 1, p)
    kind, _, arg = spec.partition(":")
    if kind != "power" or not arg:
        raise SequenceError(f"unknown weight spec {spec!r}")
    return SequenceWeights.power(float(arg), p)


def _nonzero_abs(f: Sequence[float]) -> np.ndarray:
    a = np.abs(np.asarray(f, dtype=float))
    # zero entries never help: skipping them moves later entries to heavier slots
    return a[a > 0]


def gnorm(f: Sequence[float], w: SequenceWeights) -> float:
    """Exact Garling norm by dynamic programming over (index, slot)."""
    a = _nonzero_abs(f)
    n = len(a)
    if n == 0:
        return 0.0
    weights = w.take(n)
    terms = a ** w.p
    # best[k] = best value using k chosen entries among those seen so far
    best = np.full(n + 1, -np.inf)
    best[0] = 0.0
    for j in range(n):
        cand = best[: j + 1] + terms[j] * weights[: j + 1]
        best[1 : j + 2] = np.maximum(best[1 : j + 2], cand)
    return float(best.max() ** (1.0 / w.p))


def gnorm_bruteforce(f: Sequence[float], w: SequenceWeights) -> float:
    """Enumerate every index subset in increasing order (n <= 20)."""
    a = np.abs(np.asarray(f, dtype=float))
    n = len(a)
    if n > 20:
        raise SequenceError(f"brute force limited to n <= 20, got {n}")
    if n == 0 or not np.any(a):
        return 0.0
    # larger subsets than the available weights must contain a zero entry
    m = n if w.rule is not None else min(n, len(w.w))
    weights = np.concatenate([w.take(m), np.zeros(n - m)])
    # row r of masks is the subset encoded by the bits of r
    masks = (np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1
    slots = np.cumsum(masks, axis=1) - 1
    feasible = slots[:, -1] < m
    contrib = np.where(masks == 1, a ** w.p * weights[np.clip(slots, 0, n - 1)], 0.0)
    best = contrib[feasible].sum(axis=1).max()
    return float(best ** (1.0 / w.p))


def ryff_matching(f: Sequence[float], g: Sequence[float], tol: float = 0.0) -> dict[int, int]:
    """Bijection m: supp f -> supp g with ``g[m[i]] == f[i]``.

    Both supports are sorted by decreasing value (ties by index) and paired
    positionally. Raises if the nonzero value multisets differ.
    """
    fa, ga = np.abs(np.asarray(f, dtype=float)), np.abs(np.asarray(g, dtype=float))
    fs = sorted((i for i in range(len(fa)) if fa[i] != 0), key=lambda i: (-fa[i], i))
    gs = sorted((i for i in range(len(ga)) if ga[i] != 0), key=lambda i: (-ga[i], i))
    if len(fs) != len(gs) or any(abs(fa[i] - ga[j]) > tol for i, j in zip(fs, gs)):
        raise SequenceError("sequences are not equimeasurable")
    return dict(zip(fs, gs))

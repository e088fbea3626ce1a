"""Weight functions W on (0, inf) and their cumulative integrals.

The power family ``W(t) = (t + 1)**(-alpha)`` has closed-form cumulative
integrals. Any other nonincreasing positive callable can be wrapped with
:meth:`WeightFunction.from_callable`; its cumulative integral then comes
from adaptive Simpson quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

QUAD_TOL = 1e-10


def adaptive_simpson(func: Callable[[float], float], a: float, b: float,
                     tol: float = QUAD_TOL, max_depth: int = 50) -> float:
    """Integrate func over [a, b] by recursive Simpson with Richardson correction."""
    if b <= a:
        return 0.0

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = func(lm), func(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return (recurse(a, m, fa, flm, fm, left, tol / 2, depth - 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2, depth - 1))

    fa, fb = func(a), func(b)
    fm = func(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightFunction:
    """Nonincreasing positive weight with cumulative ``W_hat(x) = int_0^x W``."""

    name: str
    func: Callable[[float], float] = field(repr=False, compare=False)
    alpha: float | None = None

    @classmethod
    def power(cls, alpha: float) -> "WeightFunction":
        if not (0 < alpha <= 1):
            raise WeightError(f"power weight needs 0 < alpha <= 1, got {alpha}")
        return cls(f"power:{alpha:g}", lambda t: (t + 1.0) ** (-alpha), float(alpha))

    @classmethod
    def from_callable(cls, func: Callable[[float], float], name: str = "custom") -> "WeightFunction":
        grid = np.concatenate([np.linspace(1e-6, 1.0, 200), np.geomspace(1.0, 1e6, 200)])
        vals = np.array([func(float(t)) for t in grid])
        if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
            raise WeightError("weight must be positive and finite on (0, inf)")
        if np.any(np.diff(vals) > 1e-12 * np.abs(vals[:-1])):
            raise WeightError("weight must be nonincreasing")
        return cls(name, func)

    def __call__(self, t):
        if self.alpha is not None:
            return (np.asarray(t, dtype=float) + 1.0) ** (-self.alpha)
        if np.ndim(t) == 0:
            return self.func(float(t))
        return np.array([self.func(float(x)) for x in np.ravel(t)]).reshape(np.shape(t))

    def cumulative(self, x):
        """W_hat(x); accepts scalars or arrays of nonnegative reals."""
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0):
            raise WeightError("cumulative weight needs x >= 0")
        if self.alpha is not None:
            if self.alpha == 1.0:
                out = np.log1p(arr)
            else:
                beta = 1.0 - self.alpha
                out = np.expm1(beta * np.log1p(arr)) / beta
        else:
            out = self._quadrature_cumulative(arr)
        return float(out) if np.ndim(x) == 0 else out

    def _quadrature_cumulative(self, arr: np.ndarray) -> np.ndarray:
        flat = arr.ravel()
        nodes, inv = np.unique(flat, return_inverse=True)
        acc = np.empty_like(nodes)
        prev, total = 0.0, 0.0
        for k, x in enumerate(nodes):
            total += adaptive_simpson(self.func, prev, float(x))
            acc[k] = total
            prev = float(x)
        return acc[inv].reshape(arr.shape)

    def class_report(self, far: float = 1e8) -> dict[str, bool]:
        """Sampled checks of the three weight-class conditions."""
        w0, wfar = float(self(0.0)), float(self(far))
        return {
            "vanishes_at_infinity": wfar < 1e-2 * w0,
            # a convergent tail puts vanishing mass on [far/10, far]
            "unbounded_cumulative": self.cumulative(far) - self.cumulative(far / 10) > 1e-2 * self.cumulative(1.0),
            "integrable_at_zero": math.isfinite(self.cumulative(1.0)),
        }


def weight_cumulative(W: WeightFunction, x: float) -> float:
    if x < 0:
        raise WeightError("cumulative weight needs x >= 0")
    return W.cumulative(x)


def parse_weight_function(spec: str) -> WeightFunction:
    """Parse ``power:<alpha>`` (also accepted with a ``fromW:`` prefix)."""
    body = spec[len("fromW:"):] if spec.startswith("fromW:") else spec
    kind, _, arg = body.partition(":")
    if kind != "power" or not arg:
        raise WeightError(f"unknown weight spec {spec!r}")
    return WeightFunction.power(float(arg))

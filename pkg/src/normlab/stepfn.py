"""Compactly supported step functions on (0, inf).

Every set is a finite union of bounded half-open intervals ``(lo, hi]`` and
every function is nonnegative and constant on finitely many such intervals.
Distribution functions and decreasing rearrangements are computed exactly
from the (value, length) layout.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

ATOL = 1e-9


class StepFunctionError(ValueError):
    """Raised when raw pieces cannot be put in canonical form."""


@dataclass(frozen=True, order=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise StepFunctionError(f"empty or reversed interval ({self.lo}, {self.hi}]")
        if self.lo < 0:
            raise StepFunctionError(f"interval ({self.lo}, {self.hi}] leaves (0, inf)")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    def shifted(self, shift: float) -> "Interval":
        return Interval(self.lo + shift, self.hi + shift)


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint, sorted, non-adjacent half-open intervals."""

    parts: tuple[Interval, ...] = ()

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "IntervalSet":
        ivs = sorted(Interval(float(lo), float(hi)) for lo, hi in pairs)
        merged: list[list[float]] = []
        for iv in ivs:
            if merged and iv.lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], iv.hi)
            else:
                merged.append([iv.lo, iv.hi])
        return cls(tuple(Interval(lo, hi) for lo, hi in merged))

    @property
    def measure(self) -> float:
        return sum(iv.length for iv in self.parts)

    @property
    def sup(self) -> float:
        return self.parts[-1].hi if self.parts else 0.0

    def is_empty(self) -> bool:
        return not self.parts

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        a, b = self.parts, other.parts
        while i < len(a) and j < len(b):
            cut = a[i].intersect(b[j])
            if cut is not None:
                out.append(cut)
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative step function; pieces are sorted, disjoint and positive."""

    pieces: tuple[tuple[Interval, float], ...] = ()

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.pieces]

    @property
    def intervals(self) -> list[Interval]:
        return [iv for iv, _ in self.pieces]

    def support(self) -> IntervalSet:
        return IntervalSet.from_pairs((iv.lo, iv.hi) for iv, _ in self.pieces)

    @property
    def support_measure(self) -> float:
        return sum(iv.length for iv, _ in self.pieces)

    @property
    def sup(self) -> float:
        return self.pieces[-1][0].hi if self.pieces else 0.0

    def is_zero(self) -> bool:
        return not self.pieces

    def __call__(self, x: float) -> float:
        # pieces are (lo, hi]: find the last piece with lo < x
        los = [iv.lo for iv, _ in self.pieces]
        k = bisect.bisect_left(los, x) - 1
        if k >= 0:
            iv, v = self.pieces[k]
            if x <= iv.hi:
                return v
        return 0.0

    def scaled(self, c: float) -> "StepFunction":
        c = abs(c)
        if c == 0:
            return StepFunction()
        return StepFunction(tuple((iv, c * v) for iv, v in self.pieces))

    def shifted(self, shift: float) -> "StepFunction":
        return StepFunction(tuple((iv.shifted(shift), v) for iv, v in self.pieces))

    def integral(self, p: float = 1.0) -> float:
        return sum(v**p * iv.length for iv, v in self.pieces)

    def split(self) -> "StepFunction":
        """Split every piece at its midpoint (not canonical; used for refinement checks)."""
        out = []
        for iv, v in self.pieces:
            mid = 0.5 * (iv.lo + iv.hi)
            out.append((Interval(iv.lo, mid), v))
            out.append((Interval(mid, iv.hi), v))
        return StepFunction(tuple(out))

    def __add__(self, other: "StepFunction") -> "StepFunction":
        cuts = sorted({x for iv, _ in self.pieces + other.pieces for x in (iv.lo, iv.hi)})
        raw = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid = 0.5 * (lo + hi)
            v = self(mid) + other(mid)
            if v > 0:
                raw.append((lo, hi, v))
        return make_step_function(raw)

    def pointwise_le(self, other: "StepFunction", tol: float = ATOL) -> bool:
        cuts = sorted({x for iv, _ in self.pieces + other.pieces for x in (iv.lo, iv.hi)})
        for lo, hi in zip(cuts, cuts[1:]):
            mid = 0.5 * (lo + hi)
            if self(mid) > other(mid) + tol:
                return False
        return True


@dataclass(frozen=True)
class DistributionFunction:
    """Right-continuous, nonincreasing s -> measure{f > s}.

    ``steps[k] = (s_k, m_k)`` means the value is ``m_k`` on ``[s_k, s_{k+1})``.
    The last step always carries measure 0.
    """

    steps: tuple[tuple[float, float], ...]

    def __call__(self, s: float) -> float:
        if s < 0:
            raise ValueError("distribution functions are defined for s >= 0")
        k = bisect.bisect_right([t for t, _ in self.steps], s) - 1
        return self.steps[k][1]


def make_step_function(raw: Iterable[Sequence[float]]) -> StepFunction:
    """Build a canonical step function from ``(lo, hi, value)`` triples.

    Overlaps are allowed only where both pieces carry the same value.
    Zero pieces are dropped and adjacent equal-valued pieces merged.
    """
    triples = []
    for item in raw:
        lo, hi, v = (float(x) for x in item)
        if v < 0:
            raise StepFunctionError(f"negative value {v}; pass |f|")
        iv = Interval(lo, hi)
        if v > 0:
            triples.append((iv, v))
    triples.sort(key=lambda t: (t[0].lo, t[0].hi))

    merged: list[list] = []
    for iv, v in triples:
        if merged:
            plo, phi, pv = merged[-1]
            if iv.lo < phi:
                if v != pv:
                    raise StepFunctionError(
                        f"pieces ({plo}, {phi}]={pv} and ({iv.lo}, {iv.hi}]={v} overlap"
                    )
                merged[-1][1] = max(phi, iv.hi)
                continue
            if iv.lo == phi and v == pv:
                merged[-1][1] = iv.hi
                continue
        merged.append([iv.lo, iv.hi, v])
    return StepFunction(tuple((Interval(lo, hi), v) for lo, hi, v in merged))


def indicator(lo: float, hi: float, value: float = 1.0) -> StepFunction:
    return make_step_function([(lo, hi, value)])


def restrict(f: StepFunction, F: IntervalSet) -> StepFunction:
    """Return ``f * 1_F``."""
    out = []
    j = 0
    parts = F.parts
    for iv, v in f.pieces:
        while j < len(parts) and parts[j].hi <= iv.lo:
            j += 1
        k = j
        while k < len(parts) and parts[k].lo < iv.hi:
            cut = iv.intersect(parts[k])
            if cut is not None:
                out.append((cut.lo, cut.hi, v))
            k += 1
    return make_step_function(out)


def _value_lengths(f: StepFunction) -> dict[float, float]:
    agg: dict[float, float] = {}
    for iv, v in f.pieces:
        agg[v] = agg.get(v, 0.0) + iv.length
    return agg


def distribution(f: StepFunction) -> DistributionFunction:
    agg = _value_lengths(f)
    values = sorted(agg)
    # measure above each threshold, accumulated from the top value down
    above = [0.0] * len(values)
    acc = 0.0
    for k in range(len(values) - 1, -1, -1):
        above[k] = acc
        acc += agg[values[k]]
    steps = [(0.0, acc)]
    for v, m in zip(values, above):
        steps.append((v, m))
    return DistributionFunction(tuple(steps))


def decreasing_rearrangement(f: StepFunction) -> StepFunction:
    agg = _value_lengths(f)
    raw = []
    x = 0.0
    for v in sorted(agg, reverse=True):
        raw.append((x, x + agg[v], v))
        x += agg[v]
    return make_step_function(raw)


def _clustered(f: StepFunction, tol: float) -> list[tuple[float, float]]:
    out: list[list[float]] = []
    for v, length in sorted(_value_lengths(f).items()):
        if out and v - out[-1][0] <= tol:
            out[-1][1] += length
        else:
            out.append([v, length])
    return [(v, m) for v, m in out]


def equimeasurable(f: StepFunction, g: StepFunction, tol: float = ATOL) -> bool:
    """True iff the (value, total length) histograms of f and g agree within tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    a, b = _clustered(f, tol), _clustered(g, tol)
    if len(a) != len(b):
        return False
    return all(abs(va - vb) <= tol and abs(ma - mb) <= tol for (va, ma), (vb, mb) in zip(a, b))


def parse_step_text(text: str) -> StepFunction:
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise StepFunctionError(f"line {lineno}: expected 'lo hi value', got {line!r}")
        raw.append(tuple(float(x) for x in fields))
    return make_step_function(raw)


def load_step_function(path: str | Path) -> StepFunction:
    return parse_step_text(Path(path).read_text())


def format_step_function(f: StepFunction) -> str:
    return "".join(f"{iv.lo!r} {iv.hi!r} {v!r}\n" for iv, v in f.pieces)

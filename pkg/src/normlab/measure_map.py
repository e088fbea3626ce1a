"""Order- and measure-preserving maps between finite interval unions.

A :class:`PackingMap` is a finite gluing of translations ``t -> t + shift``.
The canonical one, :func:`packing_map`, packs ``(0, measure(F)]`` onto ``F``
from left to right; its inverse is the cumulative-measure map of ``F``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable

from .stepfn import ATOL, Interval, IntervalSet, StepFunction, make_step_function


@dataclass(frozen=True)
class PackingMap:
    """Piecewise shift: each source interval moves rigidly by its shift.

    Nothing is validated here, so hand-built (possibly broken) maps can be
    represented; use :func:`verify_mo` to check the order/measure properties.
    """

    segments: tuple[tuple[Interval, float], ...]

    @property
    def domain(self) -> IntervalSet:
        return IntervalSet.from_pairs((iv.lo, iv.hi) for iv, _ in self.segments)

    def images(self) -> list[Interval]:
        return [iv.shifted(s) for iv, s in self.segments]

    def __call__(self, t: float) -> float:
        los = [iv.lo for iv, _ in self.segments]
        k = bisect.bisect_left(los, t) - 1
        if k >= 0:
            iv, s = self.segments[k]
            if t <= iv.hi:
                return t + s
        raise ValueError(f"{t} is outside the domain of the map")

    def inverse(self, x: float) -> float:
        for iv, s in self.segments:
            if iv.lo + s < x <= iv.hi + s:
                return x - s
        raise ValueError(f"{x} is outside the image of the map")

    def dump(self) -> str:
        return "".join(f"{iv.lo!r} {iv.hi!r} {s!r}\n" for iv, s in self.segments)


def cumulative_measure(E: IntervalSet, x: float) -> float:
    """Measure of ``(-inf, x]`` intersected with E."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    total = 0.0
    for iv in E.parts:
        if x <= iv.lo:
            break
        total += min(x, iv.hi) - iv.lo
    return total


def initial_segment(E: IntervalSet, t: float) -> IntervalSet:
    """Left part of E with measure exactly t."""
    total = E.measure
    if not (0 <= t <= total):
        raise ValueError(f"t={t} outside [0, {total}]")
    if t == total:
        return E
    out = []
    remaining = t
    for iv in E.parts:
        if remaining <= 0:
            break
        if iv.length <= remaining:
            out.append(iv)
            remaining -= iv.length
        else:
            out.append(Interval(iv.lo, iv.lo + remaining))
            remaining = 0.0
    return IntervalSet(tuple(out))


def packing_map(F: IntervalSet) -> PackingMap:
    """Canonical map from ``(0, measure(F)]`` onto F gluing left-to-right shifts."""
    if F.is_empty():
        raise ValueError("cannot pack onto an empty set")
    segs = []
    c = 0.0
    for iv in F.parts:
        segs.append((Interval(c, c + iv.length), iv.lo - c))
        c += iv.length
    return PackingMap(tuple(segs))


def pushforward_compose(f: StepFunction, m: PackingMap) -> StepFunction:
    """``f o m`` on the domain of m."""
    raw = []
    for src, s in m.segments:
        img = src.shifted(s)
        for iv, v in f.pieces:
            if iv.hi <= img.lo:
                continue
            if iv.lo >= img.hi:
                break
            cut = iv.intersect(img)
            if cut is not None:
                raw.append((cut.lo - s, cut.hi - s, v))
    return make_step_function(raw)


def verify_mo(m: PackingMap, probes: Iterable[Interval], tol: float = ATOL) -> bool:
    """Check strict monotonicity across segments and measure preservation on probes."""
    segs = m.segments
    for (a, sa), (b, sb) in zip(segs, segs[1:]):
        if a.hi > b.lo + tol:
            return False
        if a.hi + sa > b.lo + sb + tol:
            return False
    images = m.images()
    for J in probes:
        pre = 0.0
        for img in images:
            cut = img.intersect(J)
            if cut is not None:
                pre += cut.length
        if abs(pre - J.length) > tol:
            return False
    return True

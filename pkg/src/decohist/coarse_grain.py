"""Coarse-grained classes: half-open intervals of equal length.

Class ``alpha`` collects the values ``xbar`` in
``(origin + alpha*delta - delta/2, origin + alpha*delta + delta/2]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Partition

__all__ = ["IntervalId", "interval_bounds", "indicator", "interval_index"]


@dataclass(frozen=True, order=True)
class IntervalId:
    """Index ``alpha`` of a coarse-grained class."""

    alpha: int

    def bounds(self, p: Partition):
        return interval_bounds(self.alpha, p)


def interval_bounds(alpha, p: Partition):
    """Return ``(low, high)`` of interval ``alpha``; ``low`` is excluded.

    Both ends use the same expression, so ``high`` of interval ``alpha`` is
    bitwise equal to ``low`` of interval ``alpha + 1`` and every point lies in
    exactly one interval.
    """
    return _edge(alpha, p), _edge(alpha + 1, p)


def _edge(alpha, p):
    return p.origin + alpha * p.delta - p.delta / 2.0


def indicator(xbar, alpha, p: Partition) -> int:
    """1 if ``low < xbar <= high`` for interval ``alpha``, else 0."""
    low, high = interval_bounds(alpha, p)
    return 1 if low < xbar <= high else 0


def interval_index(xbar, p: Partition) -> int:
    """The unique ``alpha`` whose interval contains ``xbar``.

    A rounding guess is corrected by one step against :func:`indicator`, so
    boundary points follow the half-open rule exactly.
    """
    alpha = int(math.floor((xbar - p.origin) / p.delta + 0.5))
    for cand in (alpha, alpha - 1, alpha + 1):
        if indicator(xbar, cand, p):
            return cand
    raise ArithmeticError(f"no interval contains {xbar!r}")  # pragma: no cover

"""Families of monomial ideals: power filtrations, weight-valuation
filtrations, colon families, sandwich selectors, and their checkers.

A graded family {I_m} satisfies I_0 = R and I_m * I_n inside I_{m+n}; a
filtration is additionally descending.  Evaluation is memoized per family;
re-evaluating any index in any order yields the same ideal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import KNotPrimary
from .ideals import (
    MonomialIdeal,
    colon,
    colon_power,
    equals,
    intersect,
    max_ideal_power,
    minimalize,
    power,
    product,
    saturate,
    subset_of,
    sum_ideals,
    unit_ideal,
)
from .rings import AffineSemigroupRing, Vec, vadd

SANDWICH_CHOOSERS = ("power", "colon", "midpoint")


@dataclass(frozen=True)
class WeightValuation:
    """Monomial valuation v_w(x^a) = w.a with a positive rational coefficient."""

    weights: Vec
    coeff: Fraction

    def __post_init__(self):
        if not self.weights or any(w < 1 for w in self.weights):
            raise ValueError("valuation weights must be positive integers")
        if self.coeff <= 0:
            raise ValueError("valuation coefficient must be positive")

    def threshold(self, m: int) -> int:
        """ceil(m * coeff), computed in exact rational arithmetic."""
        return math.ceil(m * self.coeff)


class Filtration:
    """An indexed family m -> monomial ideal with memoized evaluation."""

    def __init__(self, ring: AffineSemigroupRing, kind: str,
                 evaluate: Callable[[int], MonomialIdeal]):
        self.ring = ring
        self.kind = kind
        self._evaluate = evaluate
        self._memo: dict[int, MonomialIdeal] = {}

    def ideal_at(self, m: int) -> MonomialIdeal:
        if m < 0:
            raise ValueError("filtration index must be nonnegative")
        if m == 0:
            return unit_ideal(self.ring)
        got = self._memo.get(m)
        if got is None:
            got = self._evaluate(m)
            self._memo[m] = got
        return got

    def evaluated_prefix(self) -> dict[int, tuple[Vec, ...]]:
        """Evaluated indices so far, as index -> sorted generator list."""
        return {m: self._memo[m].gens for m in sorted(self._memo)}


def power_filtration(ideal: MonomialIdeal) -> Filtration:
    """The family {I^m}."""
    if ideal.is_zero or ideal.is_unit:
        raise ValueError("power filtration needs a proper nonzero ideal")
    filt = Filtration(ideal.ring, "power", lambda m: None)
    filt._evaluate = lambda m: ideal if m == 1 else product(filt.ideal_at(m - 1), ideal)
    return filt


def valuation_ideal(ring: AffineSemigroupRing, weights: Vec, t: int) -> MonomialIdeal:
    """I(v_w)_t = ideal of all monomials of valuation at least t.

    Minimal generators a satisfy w.a < t + max_u(w.u) over semigroup
    generators u, so the extraction box below is exact, no certificate.
    """
    if any(w < 1 for w in weights) or len(weights) != ring.ambient_dim:
        raise ValueError("weights must be positive, one per coordinate")
    if t <= 0:
        return unit_ideal(ring)
    max_step = max(sum(w * u for w, u in zip(weights, g)) for g in ring.sgens)
    box = tuple((t + max_step) // w for w in weights)
    table = ring.grid(box)
    shape = tuple(b + 1 for b in box)
    view = table[tuple(slice(0, n) for n in shape)]
    wt = np.zeros(shape, dtype=np.int64)
    for axis, w in enumerate(weights):
        idx = np.arange(shape[axis], dtype=np.int64)
        wt = wt + w * idx.reshape([-1 if a == axis else 1 for a in range(len(shape))])
    mask = view & (wt >= t)
    from .ideals import _minimal_from_mask

    return MonomialIdeal(ring, _minimal_from_mask(ring, mask))


def valuation_of_ideal(weights: Vec, ideal: MonomialIdeal) -> int:
    """v_w(K) = min of w.g over the minimal generators of K."""
    if ideal.is_zero:
        raise ValueError("the zero ideal has no valuation")
    return min(sum(w * x for w, x in zip(weights, g)) for g in ideal.gens)


def discrete_valued_filtration(ring: AffineSemigroupRing,
                               valuations) -> Filtration:
    """I_m = intersection of I(v_i) at thresholds ceil(m * a_i)."""
    vals = tuple(valuations)
    if not vals:
        raise ValueError("at least one valuation is required")

    def ev(m: int) -> MonomialIdeal:
        parts = [valuation_ideal(ring, v.weights, v.threshold(m)) for v in vals]
        out = parts[0]
        for part in parts[1:]:
            out = intersect(out, part)
        return out

    return Filtration(ring, "discrete-valued", ev)


def is_m_primary(ideal: MonomialIdeal) -> bool:
    """Proper ideal whose saturation is the unit ideal."""
    if ideal.is_zero or ideal.is_unit:
        return False
    return saturate(ideal).is_unit


def colon_family(base: Filtration, multiplier: MonomialIdeal, n: int) -> Filtration:
    """The graded family F(n)_m = (I_{nm} : K^m) for an m-primary K."""
    if n < 1:
        raise ValueError("colon family scale must be positive")
    if not is_m_primary(multiplier):
        raise KNotPrimary("the colon multiplier must be primary for the maximal ideal")

    def ev(m: int) -> MonomialIdeal:
        return colon_power(base.ideal_at(n * m), multiplier, m)

    return Filtration(base.ring, "colon-family", ev)


def sandwich_family(ideal: MonomialIdeal, multiplier: MonomialIdeal,
                    chooser: str = "midpoint", count: int = 1) -> Filtration:
    """A selector n -> J_n with I^n inside J_n inside (I^n : K).

    Built-in choosers: "power" picks I^n, "colon" picks (I^n : K), and
    "midpoint" adjoins the lex-smallest ``count`` new generators of the
    colon to I^n.
    """
    if chooser not in SANDWICH_CHOOSERS:
        raise ValueError(f"unknown sandwich chooser {chooser!r}")
    if not is_m_primary(multiplier):
        raise KNotPrimary("the sandwich multiplier must be primary for the maximal ideal")

    def ev(n: int) -> MonomialIdeal:
        base = power(ideal, n)
        if chooser == "power":
            return base
        upper = colon(base, multiplier)
        if chooser == "colon":
            return upper
        fresh = sorted(g for g in upper.gens if not base.contains(g))
        picked = minimalize(ideal.ring, fresh[:count]) if fresh else None
        return sum_ideals(base, picked) if picked else base

    return Filtration(ideal.ring, "sandwich", ev)


def explicit_filtration(ring: AffineSemigroupRing, ideals) -> Filtration:
    """A finite family given by an explicit list, indexed from 1."""
    fixed = tuple(ideals)

    def ev(m: int) -> MonomialIdeal:
        if m > len(fixed):
            raise ValueError(f"explicit filtration has no index {m}")
        return fixed[m - 1]

    return Filtration(ring, "explicit", ev)


def custom_filtration(ring: AffineSemigroupRing,
                      evaluate: Callable[[int], MonomialIdeal]) -> Filtration:
    return Filtration(ring, "custom", evaluate)


def check_graded(filt: Filtration, m_max: int):
    """Verify I_m * I_n inside I_{m+n} for all pairs with m + n <= m_max.

    Returns (holds, witness) where the witness is (m, n, g, h) for the
    first failing product of generators.
    """
    for m in range(1, m_max):
        for n in range(m, m_max - m + 1):
            target = filt.ideal_at(m + n)
            for g in filt.ideal_at(m).gens:
                for h in filt.ideal_at(n).gens:
                    if not target.contains(vadd(g, h)):
                        return False, (m, n, g, h)
    return True, None


def check_descending(filt: Filtration, m_max: int):
    """Verify I_{m+1} inside I_m for m below m_max."""
    for m in range(m_max):
        if not subset_of(filt.ideal_at(m + 1), filt.ideal_at(m)):
            return False, m + 1
    return True, None


@dataclass(frozen=True)
class ArReport:
    """Outcome of comparing I_m^sat and I_m deep inside m-adic order r*m."""

    r_tested: int
    m_max: int
    holds: bool
    first_failure: tuple[int, Vec] | None


def check_ar(filt: Filtration, r: int, m_max: int) -> ArReport:
    """Check I_m^sat meet m^(rm) = I_m meet m^(rm) for 1 <= m <= m_max.

    A finite sweep only; a holding report never claims the condition for
    every index.
    """
    if m_max < 1 or r < 1:
        raise ValueError("r and m_max must be positive")
    for m in range(1, m_max + 1):
        ideal_m = filt.ideal_at(m)
        deep = max_ideal_power(filt.ring, r * m)
        lhs = intersect(saturate(ideal_m), deep)
        rhs = intersect(ideal_m, deep)
        if not equals(lhs, rhs):
            witness = next(g for g in lhs.gens if not rhs.contains(g))
            return ArReport(r, m_max, False, (m, witness))
    return ArReport(r, m_max, True, None)


def find_min_ar(filt: Filtration, r_max: int, m_max: int) -> int | None:
    """Least r <= r_max whose sweep holds on 1..m_max, if any."""
    for r in range(1, r_max + 1):
        if check_ar(filt, r, m_max).holds:
            return r
    return None


@dataclass(frozen=True)
class WeaklyGradedReport:
    holds: bool
    violation: tuple[int, int, Vec, Vec] | None


def check_weakly_graded(filt: Filtration, c: Vec, m_max: int) -> WeaklyGradedReport:
    """Verify c + g + h in I_{m+n} for generator pairs, 1 <= m, n <= m_max."""
    if not filt.ring.contains(c):
        raise ValueError("the multiplier exponent must lie in the semigroup")
    for m in range(1, m_max + 1):
        for n in range(m, m_max + 1):
            target = filt.ideal_at(m + n)
            for g in filt.ideal_at(m).gens:
                for h in filt.ideal_at(n).gens:
                    if not target.contains(vadd(vadd(g, h), c)):
                        return WeaklyGradedReport(False, (m, n, g, h))
    return WeaklyGradedReport(True, None)

"""Lengths, epsilon-multiplicity sequences, Amao pair sequences, analytic
spread, and Noetherian probes for monomial ideals and their families.

Monomials form a k-basis of every graded quotient here, so each length is
a lattice-point count.  Epsilon multiplicity of a family {I_m} in dimension
d is d! * lim length(H^0_m(R/I_m)) / m^d, with H^0_m(R/I) = I^sat / I;
sequences are sampled exactly and extrapolated with a rational L + c/m fit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import KNotPrimary, PairNotCofinal
from .filtrations import Filtration, is_m_primary, power_filtration, colon_family
from .ideals import (
    MonomialIdeal,
    _ideal_mask,
    colon,
    equals,
    max_ideal_power,
    product,
    saturate,
    subset_of,
    sum_ideals,
    unit_ideal,
    zero_ideal,
)
from .rings import Vec, lattice_rank, total_weight

ANNIHILATOR_CAP = 256
POSITIVITY_THRESHOLD = Fraction(1, 100)
RESIDUAL_GATE = Fraction(1, 20)


@dataclass(frozen=True)
class LengthValue:
    """A module length; ``count`` is meaningful only when ``finite``.

    For saturation quotients, ``witness_power`` is the k certified to
    satisfy m^k * I^sat inside I, which bounds the counting window.
    """

    count: int
    finite: bool
    witness_power: int | None = None


@dataclass(frozen=True)
class MultiplicityEstimate:
    """A sampled normalized-length sequence with an extrapolated limit."""

    samples: tuple[tuple[int, Fraction], ...]
    limit: Fraction
    model: str
    residual: Fraction
    d_used: int


@dataclass(frozen=True)
class SpreadResult:
    """Lattice rank of homogenized generator exponents; ``stabilized`` is
    exact for a single ideal and a truncation diagnostic for families."""

    value: int
    stabilized: bool


@dataclass(frozen=True)
class NoetherianReport:
    """New-generator evidence per index and the resulting verdict."""

    evidence: tuple[tuple[int, int], ...]
    verdict: str


@dataclass(frozen=True)
class VolumeRow:
    n: int
    inner: MultiplicityEstimate
    ratio: Fraction


@dataclass(frozen=True)
class VolumeTable:
    rows: tuple[VolumeRow, ...]
    outer: MultiplicityEstimate


def _annihilator_power(ideal: MonomialIdeal, target: MonomialIdeal, cap: int = ANNIHILATOR_CAP) -> int:
    """Least k with m^k * ideal contained in target; gallop then bisect."""
    ring = target.ring

    def ok(k: int) -> bool:
        return subset_of(product(max_ideal_power(ring, k), ideal), target)

    if ok(0):
        return 0
    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > cap:
            raise PairNotCofinal(f"no annihilator power up to {cap}")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _count_difference(big: MonomialIdeal, small: MonomialIdeal, box: Vec) -> int:
    """Number of monomials of ``big`` outside ``small`` within the box."""
    ring = big.ring
    table = ring.grid(box)
    return int(np.count_nonzero(
        _ideal_mask(big, box, table) & ~_ideal_mask(small, box, table)
    ))


def colength(ideal: MonomialIdeal) -> LengthValue:
    """length(R/I): the number of semigroup monomials outside I.

    Finite exactly when I is primary for the maximal ideal; the counting
    box comes from the least k with m^k inside I.
    """
    ring = ideal.ring
    if ideal.is_unit:
        return LengthValue(0, True, 0)
    if ideal.is_zero or not saturate(ideal).is_unit:
        return LengthValue(0, False)
    k = _annihilator_power(unit_ideal(ring), ideal)
    box = tuple((k - 1) * c for c in ring.max_sgen_coords)
    table = ring.grid(box)
    shape = tuple(b + 1 for b in box)
    inside = table[tuple(slice(0, n) for n in shape)]
    count = int(np.count_nonzero(inside & ~_ideal_mask(ideal, box, table)))
    return LengthValue(count, True, k)


def h0_length(ideal: MonomialIdeal) -> LengthValue:
    """length(I^sat / I) = length(H^0_m(R/I)); always finite."""
    ring = ideal.ring
    sat = saturate(ideal)
    if sat.gens == ideal.gens:
        return LengthValue(0, True, 0)
    k = _annihilator_power(sat, ideal)
    box = tuple(
        max(g[i] for g in sat.gens) + (k - 1) * ring.max_sgen_coords[i]
        for i in range(ring.ambient_dim)
    )
    return LengthValue(_count_difference(sat, ideal, box), True, k)


def _extrapolate(samples: list[tuple[int, Fraction]], d: int) -> MultiplicityEstimate:
    """Least-squares L + c/m fit over the top half, exact in Q.

    Falls back to the tail average when the fit residual exceeds the
    spread of the tail samples.
    """
    tail = samples[len(samples) // 2:]
    values = [v for _, v in tail]
    tail_avg = sum(values) / len(values)
    spread = max(values) - min(values)
    ts = [Fraction(1, m) for m, _ in tail]
    n = len(tail)
    st = sum(ts)
    stt = sum(t * t for t in ts)
    sv = sum(values)
    stv = sum(t * v for t, v in zip(ts, values))
    det = n * stt - st * st
    if det != 0:
        slope = (n * stv - st * sv) / det
        limit = (sv - slope * st) / n
        residual = max(abs(v - (limit + slope * t)) for t, v in zip(ts, values))
        if residual <= spread or spread == 0:
            return MultiplicityEstimate(tuple(samples), limit, "one-over-m fit", residual, d)
    return MultiplicityEstimate(tuple(samples), tail_avg, "tail-average", spread, d)


def epsilon_sequence(filt: Filtration, m_max: int) -> MultiplicityEstimate:
    """Samples d! * length(H^0_m(R/I_m)) / m^d for m up to m_max."""
    if m_max < 4:
        raise ValueError("epsilon sampling needs m_max >= 4")
    d = filt.ring.krull_dim
    fact = factorial(d)
    samples = [
        (m, Fraction(fact * h0_length(filt.ideal_at(m)).count, m ** d))
        for m in range(1, m_max + 1)
    ]
    return _extrapolate(samples, d)


def epsilon_colon_sequence(filt: Filtration, multiplier: MonomialIdeal, n_max: int) -> MultiplicityEstimate:
    """Samples d! * length(H^0_m(R/(I_n : K))) / n^d for an m-primary K."""
    if n_max < 4:
        raise ValueError("epsilon sampling needs n_max >= 4")
    if not is_m_primary(multiplier):
        raise KNotPrimary("the colon multiplier must be primary for the maximal ideal")
    d = filt.ring.krull_dim
    fact = factorial(d)
    samples = [
        (n, Fraction(fact * h0_length(colon(filt.ideal_at(n), multiplier)).count, n ** d))
        for n in range(1, n_max + 1)
    ]
    return _extrapolate(samples, d)


def amao_pair_sequence(big: MonomialIdeal, small: MonomialIdeal, m_max: int) -> MultiplicityEstimate:
    """Samples d! * length(A^m / B^m) / m^d for nested ideals B inside A.

    Each sampled power is checked for a finite quotient via A^m inside
    (B^m)^sat; otherwise the pair is rejected.
    """
    if m_max < 4:
        raise ValueError("pair sampling needs m_max >= 4")
    if not subset_of(small, big):
        raise PairNotCofinal("the second ideal must be contained in the first")
    ring = big.ring
    d = ring.krull_dim
    fact = factorial(d)
    samples = []
    a_pow = unit_ideal(ring)
    b_pow = unit_ideal(ring)
    for m in range(1, m_max + 1):
        a_pow = product(a_pow, big)
        b_pow = product(b_pow, small)
        sat_b = saturate(b_pow)
        if not subset_of(a_pow, sat_b):
            raise PairNotCofinal(f"A^{m}/B^{m} has infinite length")
        if equals(a_pow, b_pow):
            samples.append((m, Fraction(0)))
            continue
        k = _annihilator_power(sat_b, b_pow)
        box = tuple(
            max(g[i] for g in sat_b.gens) + (k - 1) * ring.max_sgen_coords[i]
            for i in range(ring.ambient_dim)
        )
        samples.append((m, Fraction(fact * _count_difference(a_pow, b_pow, box), m ** d)))
    return _extrapolate(samples, d)


def volume_formula_table(ideal: MonomialIdeal, multiplier: MonomialIdeal,
                         n_max: int, m_max: int) -> VolumeTable:
    """Inner epsilon limits of the colon families F(n), with the outer
    extrapolation of epsilon(F(n)) / n^d."""
    if n_max < 3:
        raise ValueError("the outer table needs n_max >= 3")
    powers = power_filtration(ideal)
    d = ideal.ring.krull_dim
    rows = []
    ratio_samples = []
    for n in range(1, n_max + 1):
        inner = epsilon_sequence(colon_family(powers, multiplier, n), m_max)
        ratio = inner.limit / n ** d
        rows.append(VolumeRow(n, inner, ratio))
        ratio_samples.append((n, ratio))
    return VolumeTable(tuple(rows), _extrapolate(ratio_samples, d))


def analytic_spread(ideal: MonomialIdeal) -> SpreadResult:
    """Rank over Q of the minimal generators homogenized by a final 1.

    The rank is capped at the Krull dimension, which also bounds the
    analytic spread from above.
    """
    if ideal.is_zero or ideal.is_unit:
        raise ValueError("analytic spread needs a proper nonzero ideal")
    rows = [g + (1,) for g in ideal.gens]
    value = min(lattice_rank(rows), ideal.ring.krull_dim)
    return SpreadResult(value, True)


def analytic_spread_family(filt: Filtration, m_max: int) -> SpreadResult:
    """Capped rank of the homogenized generators (g, m) for indices <= m_max.

    The value is a lower bound for the analytic spread of the family;
    ``stabilized`` reports whether the rank already agreed at half depth.
    """
    if m_max < 1:
        raise ValueError("m_max must be positive")
    half = (m_max + 1) // 2
    rows_half = [g + (m,) for m in range(1, half + 1)
                 for g in filt.ideal_at(m).gens]
    rows_full = rows_half + [g + (m,) for m in range(half + 1, m_max + 1)
                             for g in filt.ideal_at(m).gens]
    rank_half = lattice_rank(rows_half)
    rank_full = lattice_rank(rows_full)
    d = filt.ring.krull_dim
    return SpreadResult(min(rank_full, d), rank_full == rank_half)


def noetherian_probe(filt: Filtration, m_max: int) -> NoetherianReport:
    """Probe whether each I_m is generated by products from lower indices.

    Records, per index with fresh minimal generators, the least weight of
    such a generator.  The verdict is non-noetherian-evidence when fresh
    generators persist through the entire top half of the range; a finite
    probe never proves either property.
    """
    if m_max < 4:
        raise ValueError("the probe needs m_max >= 4")
    evidence = []
    for m in range(1, m_max + 1):
        current = filt.ideal_at(m)
        lower = zero_ideal(filt.ring)
        for i in range(1, m // 2 + 1):
            lower = sum_ideals(lower, product(filt.ideal_at(i), filt.ideal_at(m - i)))
        fresh = [g for g in current.gens if not lower.contains(g)]
        if fresh:
            evidence.append((m, min(total_weight(g) for g in fresh)))
    top_half = set(range(m_max // 2 + 1, m_max + 1))
    seen = {m for m, _ in evidence}
    verdict = ("non-noetherian-evidence" if top_half <= seen
               else "consistent-with-noetherian")
    return NoetherianReport(tuple(evidence), verdict)


def positivity_report(est: MultiplicityEstimate,
                      threshold: Fraction = POSITIVITY_THRESHOLD) -> bool:
    """True iff the limit exceeds the threshold and the tail samples stay
    at or above it."""
    tail = est.samples[len(est.samples) // 2:]
    return est.limit > threshold and all(v >= threshold for _, v in tail)

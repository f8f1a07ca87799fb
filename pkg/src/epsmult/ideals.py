"""Exact arithmetic on monomial ideals of an affine semigroup ring.

Ideals are represented by their minimal generating sets, the unique normal
form for monomial ideals.  Over a polynomial ring every operation is exact
by classical staircase formulas.  Over a general semigroup ring, colon and
intersection work on a truncation window and carry a stability certificate:
the window is doubled and the answer must not change.
"""
from __future__ import annotations

import threading
import weakref
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field

import numpy as np

from .errors import IterationCapExceeded, RingMismatch, StabilityFailure
from .rings import AffineSemigroupRing, Vec, total_weight, vsub

SATURATION_CAP = 64

_BOUND_OVERRIDE: ContextVar[int | None] = ContextVar("window_bound", default=None)


@contextmanager
def window_bound(bound: int | None):
    """Override the default truncation-window bound for windowed operations."""
    token = _BOUND_OVERRIDE.set(bound)
    try:
        yield
    finally:
        _BOUND_OVERRIDE.reset(token)


@dataclass(frozen=True)
class StabilityCertificate:
    """Records that a truncated result re-verified unchanged at a larger bound."""

    bound_used: int
    verified_at: int

    def __post_init__(self):
        if self.verified_at < 2 * self.bound_used:
            raise ValueError("verification bound must be at least twice the bound used")


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators, sorted lex.

    The zero ideal has no generators; the unit ideal is generated by the
    zero exponent.  Instances are immutable values.
    """

    ring: AffineSemigroupRing
    gens: tuple[Vec, ...]
    certificate: StabilityCertificate | None = field(default=None, compare=False)

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return len(self.gens) == 1 and not any(self.gens[0])

    @property
    def is_proper(self) -> bool:
        return not self.is_unit

    def contains(self, a: Vec) -> bool:
        """True iff the monomial x^a lies in the ideal."""
        return any(self.ring.s_divides(g, a) for g in self.gens)

    def max_gen_weight(self) -> int:
        return max((total_weight(g) for g in self.gens), default=0)


def minimalize(ring: AffineSemigroupRing, raw_gens, certificate=None) -> MonomialIdeal:
    """Ideal generated by ``raw_gens`` with divisible generators removed."""
    gens = []
    for g in raw_gens:
        v = tuple(int(x) for x in g)
        if not ring.contains(v):
            raise ValueError(f"generator {v} is not in the semigroup")
        gens.append(v)
    return MonomialIdeal(ring, _minimal_set(ring, gens), certificate)


def _minimal_set(ring: AffineSemigroupRing, gens: list[Vec]) -> tuple[Vec, ...]:
    if not gens:
        return ()
    zero = (0,) * ring.ambient_dim
    if zero in gens:
        return (zero,)
    arr = np.unique(np.array(sorted(set(gens)), dtype=np.int64), axis=0)
    order = np.argsort(arr.sum(axis=1), kind="stable")
    arr = arr[order]
    table = ring.grid(tuple(int(x) for x in arr.max(axis=0)))
    mins: list[np.ndarray] = []
    for row in arr:
        if mins:
            m = np.array(mins)
            ok = (m <= row).all(axis=1)
            if ok.any():
                diffs = row - m[ok]
                if table[tuple(diffs.T)].any():
                    continue
        mins.append(row)
    return tuple(sorted(tuple(int(x) for x in row) for row in mins))


def zero_ideal(ring: AffineSemigroupRing) -> MonomialIdeal:
    return MonomialIdeal(ring, ())


def unit_ideal(ring: AffineSemigroupRing) -> MonomialIdeal:
    return MonomialIdeal(ring, ((0,) * ring.ambient_dim,))


def maximal_ideal(ring: AffineSemigroupRing) -> MonomialIdeal:
    """The monomial maximal ideal, generated by all semigroup generators."""
    return minimalize(ring, ring.sgens)


_MX_POWERS: "weakref.WeakKeyDictionary[AffineSemigroupRing, list[MonomialIdeal]]" = (
    weakref.WeakKeyDictionary()
)
_MX_LOCK = threading.Lock()


def max_ideal_power(ring: AffineSemigroupRing, n: int) -> MonomialIdeal:
    """m^n with a shared per-ring chain cache; hot in window sizing.

    The chain is append-only and growth is serialized, so concurrent
    callers always see the same ideal for the same exponent; entries die
    with their ring.
    """
    with _MX_LOCK:
        chain = _MX_POWERS.setdefault(ring, [unit_ideal(ring), maximal_ideal(ring)])
        while len(chain) <= n:
            chain.append(product(chain[-1], chain[1]))
    return chain[n]


def membership(ideal: MonomialIdeal, a: Vec) -> bool:
    return ideal.contains(a)


def equals(left: MonomialIdeal, right: MonomialIdeal) -> bool:
    _same_ring(left, right)
    return left.gens == right.gens


def subset_of(left: MonomialIdeal, right: MonomialIdeal) -> bool:
    """True iff left is contained in right."""
    _same_ring(left, right)
    return all(right.contains(g) for g in left.gens)


def sum_ideals(left: MonomialIdeal, right: MonomialIdeal) -> MonomialIdeal:
    _same_ring(left, right)
    return minimalize(left.ring, left.gens + right.gens)


def product(left: MonomialIdeal, right: MonomialIdeal) -> MonomialIdeal:
    """I*J, generated by pairwise sums of generators; exact in any k[S]."""
    _same_ring(left, right)
    if left.is_zero or right.is_zero:
        return zero_ideal(left.ring)
    a = np.array(left.gens, dtype=np.int64)
    b = np.array(right.gens, dtype=np.int64)
    pairs = (a[:, None, :] + b[None, :, :]).reshape(-1, left.ring.ambient_dim)
    return MonomialIdeal(left.ring, _minimal_set(left.ring, [tuple(map(int, r)) for r in pairs]))


def power(ideal: MonomialIdeal, n: int) -> MonomialIdeal:
    """I^n by iterated products; power(I, 0) is the unit ideal."""
    if n < 0:
        raise ValueError("power exponent must be nonnegative")
    if n == 0:
        return unit_ideal(ideal.ring)
    result = ideal
    for _ in range(n - 1):
        result = product(result, ideal)
    return result


def intersect(left: MonomialIdeal, right: MonomialIdeal, bound: int | None = None) -> MonomialIdeal:
    """I intersect J; exact staircase lcm over a polynomial ring, windowed otherwise."""
    _same_ring(left, right)
    ring = left.ring
    if left.is_zero or right.is_zero:
        return zero_ideal(ring)
    if left.is_unit:
        return right
    if right.is_unit:
        return left
    if ring.is_polynomial:
        a = np.array(left.gens, dtype=np.int64)
        b = np.array(right.gens, dtype=np.int64)
        lcms = np.maximum(a[:, None, :], b[None, :, :]).reshape(-1, ring.ambient_dim)
        return MonomialIdeal(ring, _minimal_set(ring, [tuple(map(int, r)) for r in lcms]))
    eff = _effective_bound(ring, bound, left, right)

    def mask(box: Vec, table: np.ndarray) -> np.ndarray:
        return _ideal_mask(left, box, table) & _ideal_mask(right, box, table)

    gens, cert = _windowed("intersect", ring, mask, eff)
    return MonomialIdeal(ring, gens, cert)


def colon(ideal: MonomialIdeal, divisor: MonomialIdeal, bound: int | None = None) -> MonomialIdeal:
    """(I : J) = { a : a + j in I for every generator j of J }."""
    _same_ring(ideal, divisor)
    ring = ideal.ring
    if divisor.is_zero:
        raise ValueError("colon by the zero ideal is not defined")
    if divisor.is_unit or ideal.is_zero or ideal.is_unit:
        return ideal
    if ring.is_polynomial:
        result = None
        gens = np.array(ideal.gens, dtype=np.int64)
        for j in divisor.gens:
            shifted = np.maximum(gens - np.array(j, dtype=np.int64), 0)
            part = MonomialIdeal(ring, _minimal_set(ring, [tuple(map(int, r)) for r in shifted]))
            result = part if result is None else intersect(result, part)
        return result
    eff = _effective_bound(ring, bound, ideal, divisor)

    def mask(box: Vec, table: np.ndarray) -> np.ndarray:
        ext = tuple(b + m for b, m in zip(box, _coord_max(divisor.gens)))
        ideal_ext = _ideal_mask(ideal, ext, ring.grid(ext))
        shape = tuple(b + 1 for b in box)
        out = table[tuple(slice(0, n) for n in shape)].copy()
        for j in divisor.gens:
            window = tuple(slice(jc, jc + n) for jc, n in zip(j, shape))
            out &= ideal_ext[window]
        return out

    gens, cert = _windowed("colon", ring, mask, eff)
    return MonomialIdeal(ring, gens, cert)


def colon_power(ideal: MonomialIdeal, divisor: MonomialIdeal, t: int, bound: int | None = None) -> MonomialIdeal:
    """(I : J^t), computed as an iterated colon."""
    if t < 1:
        raise ValueError("colon power exponent must be positive")
    result = ideal
    for _ in range(t):
        result = colon(result, divisor, bound)
    return result


@dataclass(frozen=True)
class SaturationResult:
    ideal: MonomialIdeal
    iterations: int


def saturate_detailed(
    ideal: MonomialIdeal,
    divisor: MonomialIdeal | None = None,
    cap: int = SATURATION_CAP,
    bound: int | None = None,
) -> SaturationResult:
    """(I : J^infinity) as the least fixpoint of colon iteration.

    Returns the saturation together with the iteration count k such that
    (I : J^k) = (I : J^(k+1)).  Defaults J to the maximal ideal.
    """
    if divisor is None:
        divisor = maximal_ideal(ideal.ring)
    if divisor.is_zero:
        raise ValueError("saturation by the zero ideal is not defined")
    current = ideal
    for step in range(cap + 1):
        nxt = colon(current, divisor, bound)
        if nxt.gens == current.gens:
            return SaturationResult(current, step)
        current = nxt
    raise IterationCapExceeded(
        f"saturation did not stabilize within {cap} colon iterations"
    )


def saturate(
    ideal: MonomialIdeal,
    divisor: MonomialIdeal | None = None,
    cap: int = SATURATION_CAP,
    bound: int | None = None,
) -> MonomialIdeal:
    return saturate_detailed(ideal, divisor, cap, bound).ideal


def _same_ring(left: MonomialIdeal, right: MonomialIdeal) -> None:
    if left.ring != right.ring:
        raise RingMismatch("ideals belong to different rings")


def _coord_max(gens: tuple[Vec, ...]) -> Vec:
    dim = len(gens[0])
    return tuple(max(g[i] for g in gens) for i in range(dim))


def _effective_bound(ring: AffineSemigroupRing, bound: int | None, *ideals: MonomialIdeal) -> int:
    override = _BOUND_OVERRIDE.get()
    if bound is None and override is not None:
        bound = override
    need = max((i.max_gen_weight() for i in ideals), default=0)
    if bound is not None:
        if bound < need:
            raise ValueError(
                f"window bound {bound} is below the generator weight {need}"
            )
        return bound
    slack = max(4, 2 * ring.max_sgen_weight)
    return sum(i.max_gen_weight() for i in ideals) + slack


def _ideal_mask(ideal: MonomialIdeal, box: Vec, table: np.ndarray) -> np.ndarray:
    """Monomial set of the ideal over the box [0, box], as a boolean array."""
    shape = tuple(b + 1 for b in box)
    view = table[tuple(slice(0, n) for n in shape)]
    out = np.zeros(shape, dtype=bool)
    for g in ideal.gens:
        if any(gc > b for gc, b in zip(g, box)):
            continue
        hi = tuple(slice(gc, None) for gc in g)
        lo = tuple(slice(None, n - gc) for gc, n in zip(g, shape))
        out[hi] |= view[lo]
    return out


def _minimal_from_mask(ring: AffineSemigroupRing, mask: np.ndarray) -> tuple[Vec, ...]:
    """Minimal elements of an S-upward-closed set given on a box."""
    dominated = np.zeros_like(mask)
    shape = mask.shape
    for u in ring.sgens:
        if any(uc >= n for uc, n in zip(u, shape)):
            continue
        hi = tuple(slice(uc, None) for uc in u)
        lo = tuple(slice(None, n - uc) for uc, n in zip(u, shape))
        dominated[hi] |= mask[lo]
    coords = np.argwhere(mask & ~dominated)
    return tuple(sorted(tuple(int(x) for x in row) for row in coords))


def _windowed(op: str, ring: AffineSemigroupRing, mask_fn, bound: int):
    """Run a windowed extraction at the doubled bound and certify stability.

    Minimal generators found on a box are exactly the true minimal
    generators with coordinates inside it, so the bound-B result equals the
    bound-2B result iff no generator lands in the outer shell.
    """
    verify = 2 * bound
    box = (verify,) * ring.ambient_dim
    table = ring.grid(box)
    gens = _minimal_from_mask(ring, mask_fn(box, table))
    if any(any(c > bound for c in g) for g in gens):
        raise StabilityFailure(op, bound, verify)
    return gens, StabilityCertificate(bound, verify)

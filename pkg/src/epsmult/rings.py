"""Affine semigroup rings k[S] presented by their exponent semigroups.

A ring is a finitely generated sub-semigroup S of N^d, localized at the
monomial maximal ideal.  The base field never materializes: monomial-ideal
containments, colons, saturations, and lengths of graded quotients are the
same before and after localizing, so every computation here is integer
combinatorics on exponent vectors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

Vec = tuple[int, ...]

_DEFAULT_NAMES = ("x", "y", "z", "w")


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def total_weight(v: Vec) -> int:
    return sum(v)


def lattice_rank(rows) -> int:
    """Rank over Q of an integer matrix, by exact Gaussian elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [x - factor * y for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class WeightGrading:
    """Positive integer weights, one per ambient coordinate."""

    weights: Vec

    def __post_init__(self):
        if not self.weights or any(w < 1 for w in self.weights):
            raise ValueError("grading weights must be positive integers")

    def weight(self, v: Vec) -> int:
        return sum(w * x for w, x in zip(self.weights, v))


def unit_grading(dim: int) -> WeightGrading:
    return WeightGrading((1,) * dim)


class _GridCache:
    """Cached boolean table of semigroup membership over an integer box.

    The table is monotone in the box and grown geometrically on demand.
    Recomputation under concurrent use is allowed; results are identical.
    """

    def __init__(self, sgens: tuple[Vec, ...], dim: int):
        self._sgens = sgens
        self._dim = dim
        self._bounds: Vec = (-1,) * dim
        self._table: np.ndarray | None = None

    def table_for(self, bounds: Vec) -> np.ndarray:
        table = self._table
        if table is None or any(b > c for b, c in zip(bounds, self._bounds)):
            new_bounds = tuple(
                max(b, 2 * c, 15) for b, c in zip(bounds, self._bounds)
            )
            table = self._build(new_bounds)
            self._table = table
            self._bounds = new_bounds
        return table

    def _build(self, bounds: Vec) -> np.ndarray:
        shape = tuple(b + 1 for b in bounds)
        table = np.zeros(shape, dtype=bool)
        table[(0,) * self._dim] = True
        # Closure under each generator separately; addition commutes, so
        # doubling the step covers every multiple in log many passes.
        for gen in self._sgens:
            step = gen
            while all(s <= b for s, b in zip(step, bounds)):
                hi = tuple(slice(s, None) for s in step)
                lo = tuple(slice(None, n - s) for s, n in zip(step, shape))
                table[hi] |= table[lo].copy()
                step = tuple(2 * s for s in step)
        return table


@dataclass(frozen=True)
class AffineSemigroupRing:
    """The ring k[S] for S generated by ``sgens`` inside N^ambient_dim."""

    ambient_dim: int
    sgens: tuple[Vec, ...]
    var_names: tuple[str, ...]
    krull_dim: int
    _grid: _GridCache = field(compare=False, repr=False)

    @property
    def is_polynomial(self) -> bool:
        basis = {tuple(int(i == j) for j in range(self.ambient_dim))
                 for i in range(self.ambient_dim)}
        return set(self.sgens) == basis

    @property
    def max_sgen_weight(self) -> int:
        return max(total_weight(g) for g in self.sgens)

    @property
    def max_sgen_coords(self) -> Vec:
        return tuple(max(g[i] for g in self.sgens) for i in range(self.ambient_dim))

    def contains(self, a: Vec) -> bool:
        """Membership of the exponent a in S."""
        if len(a) != self.ambient_dim:
            raise ValueError("exponent has wrong ambient dimension")
        if any(x < 0 for x in a):
            return False
        return bool(self.grid(a)[a])

    def decompose(self, a: Vec) -> tuple[int, ...] | None:
        """Multiplicities (k_1,..,k_r) with sum k_i*sgens[i] = a, or None.

        Dynamic programming over the coordinate box [0, a]; serves as the
        membership certificate.
        """
        if len(a) != self.ambient_dim:
            raise ValueError("exponent has wrong ambient dimension")
        if any(x < 0 for x in a):
            return None
        origin = (0,) * self.ambient_dim
        parent: dict[Vec, int | None] = {origin: None}
        for v in itertools.product(*(range(x + 1) for x in a)):
            if v == origin or v in parent:
                continue
            for i, gen in enumerate(self.sgens):
                prev = vsub(v, gen)
                if all(x >= 0 for x in prev) and prev in parent:
                    parent[v] = i
                    break
        if a not in parent:
            return None
        counts = [0] * len(self.sgens)
        v = a
        while v != origin:
            i = parent[v]
            counts[i] += 1
            v = vsub(v, self.sgens[i])
        return tuple(counts)

    def s_divides(self, a: Vec, b: Vec) -> bool:
        """True iff x^a divides x^b in k[S], i.e. b - a lies in S."""
        diff = vsub(b, a)
        if any(x < 0 for x in diff):
            return False
        return self.contains(diff)

    def enumerate_below(self, grading: WeightGrading, bound: int) -> tuple[Vec, ...]:
        """All elements of S with grading weight <= bound, in lex order."""
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        if len(grading.weights) != self.ambient_dim:
            raise ValueError("grading has wrong ambient dimension")
        box = tuple(bound // w for w in grading.weights)
        table = self.grid(box)
        out = []
        for v in itertools.product(*(range(b + 1) for b in box)):
            if grading.weight(v) <= bound and table[v]:
                out.append(v)
        return tuple(out)

    def grid(self, bounds: Vec) -> np.ndarray:
        """Membership table covering at least the box [0, bounds]."""
        return self._grid.table_for(bounds)


def semigroup_ring(sgens, var_names=None) -> AffineSemigroupRing:
    """Build k[S] from semigroup generators in N^d."""
    gens = tuple(tuple(int(x) for x in g) for g in sgens)
    if not gens:
        raise ValueError("at least one semigroup generator is required")
    dim = len(gens[0])
    if dim < 1 or any(len(g) != dim for g in gens):
        raise ValueError("semigroup generators must share a positive dimension")
    if any(any(x < 0 for x in g) for g in gens):
        raise ValueError("semigroup generators must be nonnegative")
    if any(all(x == 0 for x in g) for g in gens):
        raise ValueError("the zero vector is not allowed as a generator")
    if var_names is None:
        names = _default_names(dim)
    else:
        names = tuple(str(n) for n in var_names)
        if len(names) != dim:
            raise ValueError("need one variable name per ambient coordinate")
    dim_rank = lattice_rank(gens)
    if dim_rank < 1:
        raise ValueError("the semigroup must have positive rank")
    return AffineSemigroupRing(dim, gens, names, dim_rank, _GridCache(gens, dim))


def polynomial_ring(var_names) -> AffineSemigroupRing:
    """Build k[x_1..x_d] (S = N^d) with the given variable names."""
    if isinstance(var_names, int):
        names = _default_names(var_names)
    else:
        names = tuple(str(n) for n in var_names)
    dim = len(names)
    basis = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
    return semigroup_ring(basis, names)


def _default_names(dim: int) -> tuple[str, ...]:
    if dim <= len(_DEFAULT_NAMES):
        return _DEFAULT_NAMES[:dim]
    return tuple(f"x{i + 1}" for i in range(dim))

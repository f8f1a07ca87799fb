"""Independent brute-force reference implementations.

Everything here enumerates exponent vectors and tests the defining
condition of each operation pointwise, with plain dict/tuple recursion.
No code is shared with the engine's grid machinery.
"""
from __future__ import annotations

import itertools


def member(sgens, a, memo) -> bool:
    """Semigroup membership by recursive generator subtraction."""
    if any(x < 0 for x in a):
        return False
    if not any(a):
        return True
    got = memo.get(a)
    if got is None:
        got = False
        for g in sgens:
            prev = tuple(x - y for x, y in zip(a, g))
            if member(sgens, prev, memo):
                got = True
                break
        memo[a] = got
    return got


def window(sgens, dim, bound, memo) -> list:
    """All semigroup points of total weight at most ``bound``."""
    out = []
    for v in itertools.product(range(bound + 1), repeat=dim):
        if sum(v) <= bound and member(sgens, v, memo):
            out.append(v)
    return out


def in_ideal(sgens, gens, a, memo) -> bool:
    """a lies in the ideal iff some generator divides it inside S."""
    for g in gens:
        diff = tuple(x - y for x, y in zip(a, g))
        if member(sgens, diff, memo):
            return True
    return False


def colon_member(sgens, ideal_gens, divisor_gens, a, memo) -> bool:
    """Defining condition of (I : J): a + j lies in I for every j."""
    return all(
        in_ideal(sgens, ideal_gens, tuple(x + y for x, y in zip(a, j)), memo)
        for j in divisor_gens
    )


def sat_member(sgens, ideal_gens, a, memo, sat_memo, cutoff) -> bool:
    """Defining condition of I^sat: every way of multiplying deeper into
    the maximal ideal eventually lands in I.

    ``cutoff`` bounds the recursion by total weight and under-approximates;
    tests choose it far beyond the window they compare on.
    """
    got = sat_memo.get(a)
    if got is not None:
        return got
    if in_ideal(sgens, ideal_gens, a, memo):
        got = True
    elif sum(a) > cutoff:
        got = False
    else:
        got = all(
            sat_member(sgens, ideal_gens, tuple(x + y for x, y in zip(a, u)),
                       memo, sat_memo, cutoff)
            for u in sgens
        )
    sat_memo[a] = got
    return got


def oracle_sets(sgens, dim, ideal_gens, divisor_gens, bound):
    """Pointwise colon/intersect/saturate membership over a weight window."""
    memo: dict = {}
    sat_memo: dict = {}
    pts = window(sgens, dim, bound, memo)
    cutoff = 3 * bound + 6
    col = {a for a in pts if colon_member(sgens, ideal_gens, divisor_gens, a, memo)}
    meet = {a for a in pts
            if in_ideal(sgens, ideal_gens, a, memo)
            and in_ideal(sgens, divisor_gens, a, memo)}
    sat = {a for a in pts
           if sat_member(sgens, ideal_gens, a, memo, sat_memo, cutoff)}
    return pts, col, meet, sat


def minimal_elements(sgens, points, memo) -> list:
    """Minimal elements of a set of points under divisibility in S."""
    out = []
    for p in points:
        dominated = False
        for q in points:
            if q != p:
                diff = tuple(x - y for x, y in zip(p, q))
                if member(sgens, diff, memo):
                    dominated = True
                    break
        if not dominated:
            out.append(p)
    return sorted(out)

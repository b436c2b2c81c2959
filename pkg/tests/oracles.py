"""Brute-force reference implementations used only by the tests.

Each one evaluates a definition directly (nested loops, explicit sets) and
shares no code path with the package.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def all_words(p, m):
    return itertools.product(range(p), repeat=m)


def dist(u, v):
    return sum(1 for a, b in zip(u, v) if a != b)


def radius(p, m, words):
    """max over v of min over c of d(v, c)."""
    return max(min(dist(v, c) for c in words) for v in all_words(p, m))


def norm(p, m, words, coordinate):
    best = 0
    slices = [[c for c in words if c[coordinate - 1] == z] for z in range(p)]
    for v in all_words(p, m):
        best = max(best, sum(min(dist(v, c) for c in s) for s in slices))
    return best


def nearest_distance(word, words):
    return min(dist(word, c) for c in words)


def dot(w, x):
    return sum(Fraction(a) * Fraction(b) for a, b in zip(w, x))


def covers(coeffs, progressions):
    """Definition check: every a is a sum with one term per progression."""
    total = {Fraction(0)}
    for prog in progressions:
        total = {s + e for s in total for e in prog}
    return all(Fraction(a) in total for a in coeffs)


def exhaustive_complexity(coeffs, p, max_denominator=2, steps=None):
    """Smallest theta over the candidate space, by enumerating every step multiset.

    Any real translation of the progressions is allowed; since min(A) has to
    be some element of the sumset, trying each placement of min(A) is
    exhaustive.
    """
    vals = sorted({Fraction(a) for a in coeffs})
    size = len(vals)
    if steps is None:
        steps = sorted({(b - a) / q for a in vals for b in vals if b > a for q in range(1, max_denominator + 1)})
    lower = 1
    while p**lower < size:
        lower += 1
    for theta in range(lower, size - 1):
        for chosen in itertools.combinations_with_replacement(steps, theta):
            progs = [[j * d for j in range(p)] for d in chosen]
            sums = {sum(combo) for combo in itertools.product(*progs)}
            for sigma in sums:
                shift = vals[0] - sigma
                if all(a - shift in sums for a in vals):
                    return theta
    return size - 1

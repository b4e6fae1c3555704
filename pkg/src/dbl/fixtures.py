"""Deterministic fixture spaces and seeded generators for demos and tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .spaces import FiniteSpace, UltrametricSpace


def discrete(n: int) -> FiniteSpace:
    return FiniteSpace.discrete(n)


def sierpinski() -> FiniteSpace:
    return FiniteSpace.sierpinski()


def glued_pairs() -> FiniteSpace:
    """Four points with clopens {01}, {23}: two quasi-components."""
    return FiniteSpace(4, [frozenset({0, 1}), frozenset({2, 3})])


def double_sierpinski() -> FiniteSpace:
    """Two Sierpinski copies side by side: two quasi-components."""
    return FiniteSpace(
        4,
        [
            frozenset({1}),
            frozenset({0, 1}),
            frozenset({3}),
            frozenset({2, 3}),
        ],
    )


def chain_space(n: int) -> FiniteSpace:
    """Nested opens {0}, {0,1}, ..., one quasi-component."""
    return FiniteSpace(n, [frozenset(range(i + 1)) for i in range(n)])


def standard_fixture_spaces() -> list[FiniteSpace]:
    """Six mixed spaces with 1..6 quasi-components."""
    out = [
        discrete(1),
        discrete(2),
        discrete(3),
        sierpinski(),
        glued_pairs(),
        double_sierpinski(),
    ]
    out.append(discrete(5))
    out.append(discrete(6))
    return out


def many_fixture_spaces(count: int = 30) -> list[FiniteSpace]:
    """A deterministic family of distinct finite topological spaces."""
    out = [
        discrete(1),
        discrete(2),
        discrete(3),
        discrete(4),
        discrete(5),
        discrete(6),
        sierpinski(),
        glued_pairs(),
        double_sierpinski(),
        chain_space(3),
        chain_space(4),
        chain_space(5),
    ]
    rng = random.Random(20240801)
    while len(out) < count:
        n = rng.randint(2, 7)
        gens = []
        for _ in range(rng.randint(1, 4)):
            size = rng.randint(1, n)
            gens.append(frozenset(rng.sample(range(n), size)))
        space = FiniteSpace(n, gens)
        if all(space != s for s in out):
            out.append(space)
    return out[:count]


def seeded_ultrametric(seed: int, max_points: int = 16) -> UltrametricSpace:
    """A random ultrametric space from a recursive partition hierarchy.

    Distances between points are the level radius at which they split,
    which satisfies the ultrametric inequality by construction.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_points)
    dist = [[Fraction(0)] * n for _ in range(n)]

    def split(points: list[int], radius: Fraction):
        if len(points) <= 1:
            return
        parts = rng.randint(2, min(4, len(points))) if len(points) > 1 else 1
        buckets: list[list[int]] = [[] for _ in range(parts)]
        for i, x in enumerate(points):
            buckets[i % parts].append(x)
        for a_i, bucket_a in enumerate(buckets):
            for bucket_b in buckets[a_i + 1 :]:
                for x in bucket_a:
                    for y in bucket_b:
                        dist[x][y] = radius
                        dist[y][x] = radius
        for bucket in buckets:
            split(bucket, radius / rng.choice((2, 3, 4)))

    split(list(range(n)), Fraction(8))
    return UltrametricSpace(dist)

"""Finite topological spaces, clopen algebra, and finite ultrametric spaces.

A FiniteSpace is given by a generating family of open sets; the full
topology is its closure under union and intersection (point counts are
capped so this stays an exhaustive enumeration).  Quasi-components — the
intersections of all clopens containing a point — are the finite-stage
fibers of the map to the Banaschewski compactification, which here is just
the discrete space of quasi-components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import NotClopen, NotContinuous, SizeExceeded

MAX_POINTS = 12
MAX_DISCRETE_POINTS = 24


def _canon(points) -> tuple[int, ...]:
    return tuple(sorted(points))


class FiniteSpace:
    """A finite topological space on points 0..n-1.

    Generic spaces are capped at 12 points so the topology closure stays
    an exhaustive enumeration.  Discrete spaces have a fast path up to 24
    points that never materializes the powerset; operations that would
    enumerate it (opens, clopens) still work below the generic cap.
    """

    def __init__(self, n: int, generating_opens=(), _discrete: bool = False):
        if n < 0:
            raise ValueError("point count must be >= 0")
        self._discrete = _discrete
        if _discrete:
            if n > MAX_DISCRETE_POINTS:
                raise SizeExceeded(f"{n} points > cap {MAX_DISCRETE_POINTS}")
        elif n > MAX_POINTS:
            raise SizeExceeded(f"{n} points > cap {MAX_POINTS}")
        self.n = n
        self.points = tuple(range(n))
        if not _discrete:
            full = frozenset(range(n))
            gens = {frozenset(U) for U in generating_opens}
            for U in gens:
                if not U <= full:
                    raise ValueError(
                        f"open set {sorted(U)} not within 0..{n - 1}"
                    )
            gens |= {frozenset(), full}
            self.opens = self._close(gens)
            self._discrete = len(self.opens) == 2**n

    @cached_property
    def opens(self) -> frozenset:  # only reached on the discrete fast path
        if self.n > MAX_POINTS:
            raise SizeExceeded(
                f"powerset of {self.n} points exceeds the enumeration cap"
            )
        from itertools import combinations

        subsets = [
            frozenset(c)
            for size in range(self.n + 1)
            for c in combinations(range(self.n), size)
        ]
        return frozenset(subsets)

    @staticmethod
    def _close(family):
        family = set(family)
        while True:
            new = set()
            fam = list(family)
            for i, A in enumerate(fam):
                for B in fam[i + 1 :]:
                    u = A | B
                    if u not in family:
                        new.add(u)
                    v = A & B
                    if v not in family:
                        new.add(v)
            if not new:
                return frozenset(family)
            family |= new

    @staticmethod
    def discrete(n: int) -> "FiniteSpace":
        return FiniteSpace(n, _discrete=True)

    @staticmethod
    def sierpinski() -> "FiniteSpace":
        # open point 1, closed point 0
        return FiniteSpace(2, [frozenset([1])])

    def is_open(self, U) -> bool:
        if self._discrete:
            return frozenset(U) <= frozenset(range(self.n))
        return frozenset(U) in self.opens

    def is_closed(self, K) -> bool:
        return self.is_open(frozenset(range(self.n)) - frozenset(K))

    def is_clopen(self, U) -> bool:
        U = frozenset(U)
        return self.is_open(U) and self.is_closed(U)

    @cached_property
    def clopens(self) -> tuple[frozenset, ...]:
        found = [U for U in self.opens if self.is_closed(U)]
        return tuple(sorted(found, key=_canon))

    @cached_property
    def quasi_components(self) -> tuple[frozenset, ...]:
        """Partition of the points; block of x = meet of clopens containing x."""
        if self._discrete:
            return tuple(frozenset([x]) for x in range(self.n))
        blocks = []
        seen = set()
        for x in range(self.n):
            if x in seen:
                continue
            block = frozenset(range(self.n))
            for U in self.clopens:
                if x in U:
                    block &= U
            blocks.append(block)
            seen |= block
        return tuple(sorted(blocks, key=min))

    def component_index(self, x: int) -> int:
        for i, block in enumerate(self.quasi_components):
            if x in block:
                return i
        raise ValueError(f"point {x} outside the space")

    @property
    def is_discrete(self) -> bool:
        return self._discrete

    def clopen_component_indices(self, U) -> frozenset:
        """Indices of the quasi-components making up a clopen U."""
        U = frozenset(U)
        if not self.is_clopen(U):
            raise NotClopen(f"{sorted(U)} is not clopen")
        return frozenset(
            i for i, block in enumerate(self.quasi_components) if block <= U
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        if self.n != other.n:
            return False
        if self._discrete and other._discrete:
            return True
        return self.opens == other.opens

    def __hash__(self):
        # weak on purpose: equality may hold across discrete/materialized
        # representatives, and big discrete spaces must not enumerate opens
        return hash(("FiniteSpace", self.n))

    def __repr__(self):
        return f"FiniteSpace(n={self.n}, opens={len(self.opens)})"

    def to_json(self):
        return {
            "points": self.n,
            "opens": [sorted(U) for U in sorted(self.opens, key=_canon)],
        }

    @staticmethod
    def from_json(obj) -> "FiniteSpace":
        return FiniteSpace(obj["points"], [frozenset(U) for U in obj["opens"]])


def clopens(space: FiniteSpace):
    return list(space.clopens)


def quasi_components(space: FiniteSpace):
    return list(space.quasi_components)


@dataclass(frozen=True)
class PointMap:
    """A map of finite spaces, stored as the image of each point."""

    source: FiniteSpace
    target: FiniteSpace
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.source.n:
            raise ValueError("one image per source point required")
        for y in self.images:
            if not 0 <= y < self.target.n:
                raise ValueError(f"image {y} outside the target")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def is_continuous(self) -> bool:
        for U in self.target.opens:
            pre = frozenset(x for x in range(self.source.n) if self.images[x] in U)
            if pre not in self.source.opens:
                return False
        return True

    def check_continuous(self):
        if not self.is_continuous():
            raise NotContinuous(f"{self.images} is not continuous")

    def component_map(self) -> tuple[int, ...]:
        """Induced map on quasi-components (source block -> target block)."""
        self.check_continuous()
        out = []
        for block in self.source.quasi_components:
            tgt = {self.target.component_index(self.images[x]) for x in block}
            if len(tgt) != 1:
                # cannot happen for a continuous map: the image of a
                # quasi-component meets a single quasi-component
                raise NotContinuous("quasi-component split by the map")
            out.append(tgt.pop())
        return tuple(out)


def inclusion_map(subset, space: FiniteSpace) -> tuple[FiniteSpace, PointMap]:
    """Subspace on a point subset, with its inclusion into space."""
    pts = sorted(frozenset(subset))
    idx = {x: i for i, x in enumerate(pts)}
    sub_opens = {frozenset(idx[x] for x in (U & frozenset(pts))) for U in space.opens}
    sub = FiniteSpace(len(pts), sub_opens)
    return sub, PointMap(sub, space, tuple(pts))


def banaschewski(space: FiniteSpace) -> tuple[FiniteSpace, PointMap]:
    """The discrete space of quasi-components with the quotient map."""
    zeta = FiniteSpace.discrete(len(space.quasi_components))
    iota = PointMap(
        space, zeta, tuple(space.component_index(x) for x in range(space.n))
    )
    return zeta, iota


def clopen_closure(space: FiniteSpace, U) -> frozenset:
    """The unique clopen of the component space pulling back to U."""
    return space.clopen_component_indices(U)


def ultrafilters(space: FiniteSpace) -> list[frozenset]:
    """All ultrafilters of the Boolean algebra of clopens.

    One per quasi-component: the clopens containing that block.  Each
    ultrafilter is returned as a frozenset of clopens.
    """
    out = []
    for block in space.quasi_components:
        out.append(frozenset(U for U in space.clopens if block <= U))
    return out


def zeta_embedding_check(j: PointMap) -> tuple[bool, tuple[int, int] | None]:
    """True when j is injective on quasi-components.

    On failure returns a witness pair of source component indices merged
    in the target.  Raises NotContinuous for a discontinuous map.
    """
    cmap = j.component_map()
    seen: dict[int, int] = {}
    for i, t in enumerate(cmap):
        if t in seen:
            return False, (seen[t], i)
        seen[t] = i
    return True, None


# -- ultrametric spaces -------------------------------------------------


class UltrametricSpace:
    """A finite set with an exact rational ultrametric."""

    def __init__(self, dist):
        n = len(dist)
        d = tuple(tuple(Fraction(x) for x in row) for row in dist)
        for i in range(n):
            if len(d[i]) != n:
                raise ValueError("distance matrix must be square")
            if d[i][i] != 0:
                raise ValueError("diagonal must be zero")
            for k in range(n):
                if d[i][k] != d[k][i]:
                    raise ValueError("distance matrix must be symmetric")
                if i != k and d[i][k] <= 0:
                    raise ValueError("distinct points need positive distance")
        for i in range(n):
            for jj in range(n):
                for k in range(n):
                    if d[i][k] > max(d[i][jj], d[jj][k]):
                        raise ValueError(
                            f"ultrametric inequality fails at ({i},{jj},{k})"
                        )
        self.n = n
        self.dist = d

    def closed_ball(self, x: int, r: Fraction) -> frozenset:
        return frozenset(y for y in range(self.n) if self.dist[x][y] <= r)

    def radii(self):
        out = {Fraction(0)}
        for i in range(self.n):
            for k in range(i + 1, self.n):
                out.add(self.dist[i][k])
        return sorted(out)

    def to_json(self):
        return {
            "points": self.n,
            "dist": [
                [str(x) if x.denominator != 1 else x.numerator for x in row]
                for row in self.dist
            ],
        }

    @staticmethod
    def from_json(obj) -> "UltrametricSpace":
        return UltrametricSpace(
            [[Fraction(str(x)) for x in row] for row in obj["dist"]]
        )


@dataclass
class BallNode:
    points: frozenset
    children: list

    def is_leaf(self) -> bool:
        return not self.children

    def all_nodes(self):
        yield self
        for c in self.children:
            yield from c.all_nodes()


def ball_tree(space: UltrametricSpace) -> BallNode:
    """The tree of all distinct closed balls, ordered by inclusion.

    Root is the whole space, leaves are singletons, and the children of a
    node partition it (closed balls in an ultrametric space are nested or
    disjoint).
    """
    balls = {frozenset(range(space.n))}
    for x in range(space.n):
        for r in space.radii():
            balls.add(space.closed_ball(x, r))
    balls.discard(frozenset())
    ordered = sorted(balls, key=lambda b: (-len(b), min(b)))

    def build(points: frozenset) -> BallNode:
        kids = []
        rest = set(points)
        for b in ordered:
            if b < points and b <= rest:
                kids.append(b)
                rest -= b
        # keep only maximal proper sub-balls, in min-point order
        node = BallNode(points, [])
        for b in sorted(kids, key=min):
            node.children.append(build(b))
        return node

    if space.n == 0:
        raise ValueError("empty ultrametric space has no ball tree")
    return build(frozenset(range(space.n)))

"""Closed-cover complexes, exactness by normal forms, and descent.

The complex of a finite family of closed subsets has degree-k term the
product of function modules on (k+1)-fold intersections with alternating
restriction differentials.  Over a ring with a norm gap, exactness is
decidable: Smith normal form over Z, ranks over F_p, and finite-lattice
invariants over Z/n.  Covers are characterized by exactness, and the
constructive side is a selection homotopy whose per-stage constants are
reported with the section matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .errors import (
    CocycleViolation,
    EquivalenceViolation,
    IsCover,
    NoSection,
    NotEmbedding,
    SizeExceeded,
    UnsupportedRing,
)
from .functions import CfinFunction, indicator
from .intlinalg import (
    bareiss_det,
    identity,
    invariant_factors,
    is_zero_matrix,
    kernel_basis_int,
    lattice_quotient_invariants,
    matmul,
    rank_mod_p,
    rank_q,
    transpose,
)
from .modtensor import WeightedFreeModule
from .scalars import RingDescriptor
from .spaces import FiniteSpace, inclusion_map, zeta_embedding_check

MAX_FAMILY = 6
MAX_COMPLEX_POINTS = 12


@dataclass(frozen=True)
class CoverFamily:
    """A finite nonempty family of closed subsets of a finite space."""

    space: FiniteSpace
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        if not self.sets:
            raise ValueError("family must be nonempty")
        if len(self.sets) > MAX_FAMILY:
            raise SizeExceeded(f"family size {len(self.sets)} > {MAX_FAMILY}")
        for K in self.sets:
            if not self.space.is_closed(K):
                raise ValueError(f"{sorted(K)} is not closed")

    @staticmethod
    def make(space: FiniteSpace, sets) -> "CoverFamily":
        return CoverFamily(space, tuple(frozenset(K) for K in sets))


def is_cover(space: FiniteSpace, family: CoverFamily) -> bool:
    """Set-theoretic union test on points."""
    union = frozenset().union(*family.sets)
    return union == frozenset(range(space.n))


def zeta_is_cover(space: FiniteSpace, family: CoverFamily) -> bool:
    """Cover test at quasi-component level: every block meets some set."""
    for block in space.quasi_components:
        if not any(block & K for K in family.sets):
            return False
    return True


@dataclass(frozen=True)
class ChainComplex:
    """Free modules with differentials; consecutive maps compose to zero.

    terms[k] is the list of basis labels in degree k; diffs[k] maps degree
    k to degree k+1 (matrix rows indexed by degree-k+1 labels).
    """

    ring: RingDescriptor
    terms: tuple
    diffs: tuple

    def __post_init__(self):
        for k in range(len(self.diffs) - 1):
            prod = matmul(self.diffs[k + 1], self.diffs[k])
            if self.ring.modulus is not None:
                prod = tuple(
                    tuple(x % self.ring.modulus for x in row) for row in prod
                )
            if not is_zero_matrix(prod):
                raise ValueError(f"d∘d nonzero between degrees {k} and {k + 2}")

    @property
    def length(self) -> int:
        return len(self.terms)

    def rank(self, k: int) -> int:
        return len(self.terms[k])


def _subspace_components(space: FiniteSpace, subset: frozenset):
    """Quasi-components of a closed subset with its subspace topology."""
    if not subset:
        return []
    sub, incl = inclusion_map(subset, space)
    return [frozenset(incl(x) for x in block) for block in sub.quasi_components]


def build_tate_cech(
    space: FiniteSpace,
    family: CoverFamily,
    ring: RingDescriptor,
    coefficients: WeightedFreeModule | None = None,
) -> ChainComplex:
    """The alternating complex of a finite closed family.

    Degree 0 is C(X) (tensored with the coefficient module when given);
    degree k is the product over strictly increasing (k)-fold tuples of
    C of the intersection.  Intersections realize the tensor terms
    directly.  Differentials are signed restrictions.
    """
    if space.n > MAX_COMPLEX_POINTS:
        raise SizeExceeded(f"{space.n} points > cap {MAX_COMPLEX_POINTS}")
    msyms = coefficients.symbols if coefficients is not None else (None,)
    sets = family.sets
    r = len(sets)

    # labels per degree: (tuple_of_indices, component_frozenset, module_symbol)
    terms = []
    full = frozenset(range(space.n))
    deg_tuples = [()] + [
        tuple(combinations(range(r), k + 1)) for k in range(r)
    ]
    for k, tuples in enumerate(deg_tuples):
        labels = []
        if k == 0:
            comps = _subspace_components(space, full) if space.n else []
            for c in comps:
                for s in msyms:
                    labels.append(((), c, s))
        else:
            for tup in tuples:
                inter = full
                for i in tup:
                    inter &= sets[i]
                for c in _subspace_components(space, inter):
                    for s in msyms:
                        labels.append((tup, c, s))
        terms.append(tuple(labels))

    # strip trailing zero terms beyond the family size
    while len(terms) > 1 and not terms[-1]:
        terms.pop()

    diffs = []
    for k in range(len(terms) - 1):
        src, dst = terms[k], terms[k + 1]
        rows = []
        for tup_d, comp_d, sym_d in dst:
            row = [0] * len(src)
            for pos in range(len(tup_d)):
                face = tup_d[:pos] + tup_d[pos + 1 :]
                sign = (-1) ** pos
                for idx, (tup_s, comp_s, sym_s) in enumerate(src):
                    if tup_s == face and sym_s == sym_d and comp_d <= comp_s:
                        row[idx] += sign
            if ring.modulus is not None:
                row = [x % ring.modulus for x in row]
            rows.append(tuple(row))
        diffs.append(tuple(rows))
    return ChainComplex(ring, tuple(terms), tuple(diffs))


def _homology_z(complex_: ChainComplex, k: int):
    nk = complex_.rank(k)
    d_out = complex_.diffs[k] if k < len(complex_.diffs) else ()
    d_in = complex_.diffs[k - 1] if k >= 1 else ()
    rank_out = rank_q(d_out) if d_out else 0
    rank_in = rank_q(d_in) if d_in else 0
    free = nk - rank_out - rank_in
    torsion = []
    if d_in:
        torsion = [d for d in invariant_factors(d_in) if d not in (0, 1)]
    return {"free_rank": free, "torsion": torsion}


def _homology_fp(complex_: ChainComplex, k: int, p: int):
    nk = complex_.rank(k)
    d_out = complex_.diffs[k] if k < len(complex_.diffs) else ()
    d_in = complex_.diffs[k - 1] if k >= 1 else ()
    rank_out = rank_mod_p(d_out, p) if d_out else 0
    rank_in = rank_mod_p(d_in, p) if d_in else 0
    dim = nk - rank_out - rank_in
    return {"free_rank": 0, "torsion": [p] * dim}


def _homology_zn(complex_: ChainComplex, k: int, n: int):
    """H^k of a complex of free Z/n-modules as a finite abelian group.

    Kernel lattice L = {x : d x = 0 mod n} is computed from the integer
    kernel of [d | -n I]; the image sublattice is spanned by the incoming
    differential columns together with n Z^rank.
    """
    nk = complex_.rank(k)
    if nk == 0:
        return {"free_rank": 0, "torsion": []}
    d_out = complex_.diffs[k] if k < len(complex_.diffs) else ()
    d_in = complex_.diffs[k - 1] if k >= 1 else ()
    if d_out:
        rows_out = len(d_out)
        aug = tuple(
            tuple(list(d_out[i]) + [-n if j == i else 0 for j in range(rows_out)])
            for i in range(rows_out)
        )
        kern = kernel_basis_int(aug)
        lattice = tuple(v[:nk] for v in kern)
    else:
        lattice = identity(nk)
    gens = []
    if d_in:
        for col in transpose(d_in):
            gens.append(tuple(col))
    for i in range(nk):
        gens.append(tuple(n if j == i else 0 for j in range(nk)))
    facs = lattice_quotient_invariants(lattice, gens)
    torsion = [f for f in facs if f not in (0, 1)]
    free = sum(1 for f in facs if f == 0)
    return {"free_rank": free, "torsion": torsion}


def exactness(complex_: ChainComplex) -> dict:
    """Per-degree homology report; vanishing in all degrees means exact."""
    ring = complex_.ring
    report = {"degrees": [], "exact": True}
    for k in range(complex_.length):
        if ring.is_zero_ring:
            h = {"free_rank": 0, "torsion": []}
        elif ring.modulus is None:
            h = _homology_z(complex_, k)
        elif ring.kind == "FpTriv":
            h = _homology_fp(complex_, k, ring.p)
        elif ring.kind in ("ZmodTriv", "ZmodQuot"):
            h = _homology_zn(complex_, k, ring.modulus)
        else:
            raise UnsupportedRing(str(ring))
        vanished = h["free_rank"] == 0 and not h["torsion"]
        report["degrees"].append({"degree": k, **h, "vanishes": vanished})
        if not vanished:
            report["exact"] = False
    return report


def _selection_homotopy(space, family, terms, k):
    """Matrix of the contracting homotopy C^{k+1} -> C^k by clopen selection.

    For each quasi-component the smallest family index whose set meets it
    is selected; the homotopy inserts that index and reorders with the
    alternating sign.  Valid whenever the family covers every
    quasi-component.
    """
    sets = family.sets

    def select(component: frozenset) -> int | None:
        for i, K in enumerate(sets):
            if component <= K:
                return i
        return None

    src = terms[k + 1]
    dst = terms[k]
    rows = []
    for tup_d, comp_d, sym_d in dst:
        row = [0] * len(src)
        i_sel = select(comp_d)
        if i_sel is None:
            raise NoSection(f"no family set meets component {sorted(comp_d)}")
        if i_sel in tup_d:
            # inserting a repeated index gives zero in the alternating sum
            rows.append(tuple(row))
            continue
        bigger = tuple(sorted(tup_d + (i_sel,)))
        pos = bigger.index(i_sel)
        sign = (-1) ** pos
        for idx, (tup_s, comp_s, sym_s) in enumerate(src):
            if tup_s == bigger and sym_s == sym_d and comp_d <= comp_s:
                row[idx] += sign
        rows.append(tuple(row))
    return tuple(rows)


def strict_sections(
    space: FiniteSpace,
    family: CoverFamily,
    ring: RingDescriptor,
    complex_: ChainComplex | None = None,
) -> list[dict]:
    """Explicit sections with norm constants for an exact cover complex.

    For each stage k >= 1 the selection homotopy h satisfies
    d_{k-1} h v = v for every v in ker(d_k), so h is a section onto the
    kernel; the reported constant bounds its sup-operator norm (1 for pure
    selections).  The selection needs every quasi-component inside some
    family set (true for point covers, in particular on discrete spaces);
    otherwise NoSection is raised even when the complex happens to be
    exact for other reasons.
    """
    if complex_ is None:
        complex_ = build_tate_cech(space, family, ring)
    if ring.is_zero_ring:
        return []
    homology = exactness(complex_)
    if not all(d["vanishes"] for d in homology["degrees"][1:]):
        raise NoSection("complex is not exact beyond degree 0")
    homotopies = [
        _selection_homotopy(space, family, complex_.terms, k)
        for k in range(len(complex_.diffs))
    ]
    out = []
    for k, h in enumerate(homotopies):
        constant = 0
        for row in h:
            constant = max(constant, sum(abs(x) for x in row))
        # verify the integer matrix identity d_k h_k (+ h_{k+1} d_{k+1}) = id,
        # which makes h_k a section of d_k on ker(d_{k+1})
        nk1 = complex_.rank(k + 1)
        total = [[0] * nk1 for _ in range(nk1)]
        for i, row in enumerate(matmul(complex_.diffs[k], h)):
            for j, x in enumerate(row):
                total[i][j] += x
        if k + 1 < len(complex_.diffs):
            for i, row in enumerate(
                matmul(homotopies[k + 1], complex_.diffs[k + 1])
            ):
                for j, x in enumerate(row):
                    total[i][j] += x
        expected = identity(nk1)
        got = tuple(tuple(row) for row in total)
        if ring.modulus is not None:
            m = ring.modulus
            got = tuple(tuple(x % m for x in row) for row in got)
            expected = tuple(tuple(x % m for x in row) for row in expected)
        if got != expected:
            raise NoSection(f"homotopy identity fails into degree {k + 1}")
        out.append({"degree": k + 1, "section": h, "constant": constant})
    return out


def _check_embeddings(space: FiniteSpace, family: CoverFamily):
    for K in family.sets:
        if not K:
            continue
        _, incl = inclusion_map(K, space)
        ok, witness = zeta_embedding_check(incl)
        if not ok:
            raise NotEmbedding(
                f"inclusion of {sorted(K)} merges quasi-components {witness}"
            )


def descent_faithful_witness(
    space: FiniteSpace, family: CoverFamily, ring: RingDescriptor
) -> CfinFunction:
    """A nonzero function restricting to zero on every set of a non-cover."""
    if ring.is_zero_ring:
        raise IsCover("the zero ring makes every family a cover")
    if zeta_is_cover(space, family):
        raise IsCover("the family covers every quasi-component")
    for block in space.quasi_components:
        if not any(block & K for K in family.sets):
            return indicator(space, ring, block)
    raise IsCover("unreachable")


def tate_equivalence_report(
    space: FiniteSpace, family: CoverFamily, ring: RingDescriptor
) -> dict:
    """Independent cover test vs homology, with agreement asserted.

    The complex only sees quasi-component data, so the cover side of the
    equivalence is the quasi-component-level test (equal to the point
    test on discrete spaces, which is also reported).  Pieces must embed
    at component level; a disagreement raises EquivalenceViolation.
    """
    _check_embeddings(space, family)
    complex_ = build_tate_cech(space, family, ring)
    cover_points = is_cover(space, family)
    cover_zeta = zeta_is_cover(space, family)
    hom = exactness(complex_)
    expected = cover_zeta or ring.is_zero_ring
    report = {
        "space": space.to_json(),
        "family": [sorted(K) for K in family.sets],
        "ring": str(ring),
        "cover_points": cover_points,
        "cover_components": cover_zeta,
        "zero_ring": ring.is_zero_ring,
        "exact": hom["exact"],
        "homology": hom["degrees"],
        "agreement": hom["exact"] == expected,
    }
    if not expected:
        witness = descent_faithful_witness(space, family, ring)
        report["witness"] = list(witness.values)
    if not report["agreement"]:
        raise EquivalenceViolation(
            f"cover test and homology disagree: {report}"
        )
    return report


# -- gluing (non-derived effective descent, constructive side) -----------


@dataclass(frozen=True)
class ModulePiece:
    """A free module over C(K, R): one free fiber per quasi-component of K."""

    set_index: int
    rank: int


@dataclass(frozen=True)
class GluedModule:
    """Result of gluing pieces along a cover: a fiber per quasi-component."""

    space: FiniteSpace
    ring: RingDescriptor
    fiber_rank: dict  # component index -> rank
    chart: dict  # component index -> chosen piece index

    def restrict_to_piece(self, family: CoverFamily, i: int) -> dict:
        comps = {}
        for c, block in enumerate(self.space.quasi_components):
            if block & family.sets[i]:
                comps[c] = self.fiber_rank[c]
        return comps


def glue_modules(
    space: FiniteSpace,
    family: CoverFamily,
    ring: RingDescriptor,
    pieces: list[ModulePiece],
    transitions: dict | None = None,
) -> GluedModule:
    """Glue per-piece free modules along a cover.

    transitions maps (i, j, component) to an invertible integer matrix
    identifying piece i with piece j over that component; identity when
    omitted.  The cocycle condition is checked on all triple overlaps and
    the glued module assembles each component's fiber from its smallest
    covering piece.
    """
    if not zeta_is_cover(space, family):
        raise NoSection("family does not cover; nothing to glue")
    transitions = transitions or {}
    by_index = {p.set_index: p for p in pieces}
    if set(by_index) != set(range(len(family.sets))):
        raise ValueError("exactly one piece per family set required")
    for (i, j, c), m in transitions.items():
        r = by_index[i].rank
        if len(m) != r or any(len(row) != r for row in m):
            raise ValueError(f"transition {(i, j, c)} has the wrong shape")
        det = bareiss_det(m)
        modulus = ring.modulus
        if modulus is None:
            if det not in (1, -1):
                raise ValueError(f"transition {(i, j, c)} is not invertible")
        elif modulus > 1 and gcd(det % modulus, modulus) != 1:
            raise ValueError(f"transition {(i, j, c)} is not invertible mod {modulus}")

    def covers(i: int, c: int) -> bool:
        return bool(space.quasi_components[c] & family.sets[i])

    def t(i: int, j: int, c: int):
        if i == j:
            return identity(by_index[i].rank)
        m = transitions.get((i, j, c))
        if m is not None:
            return m
        rev = transitions.get((j, i, c))
        if rev is not None:
            from .intlinalg import inverse_unimodular

            return inverse_unimodular(rev)
        return identity(by_index[i].rank)

    n_comp = len(space.quasi_components)
    for c in range(n_comp):
        living = [i for i in range(len(family.sets)) if covers(i, c)]
        for i in living:
            for j in living:
                if by_index[i].rank != by_index[j].rank:
                    raise ValueError("overlapping pieces of different rank")
                for k in living:
                    lhs = matmul(t(j, k, c), t(i, j, c))
                    if ring.modulus is not None:
                        lhs = tuple(
                            tuple(x % ring.modulus for x in row) for row in lhs
                        )
                        rhs = tuple(
                            tuple(x % ring.modulus for x in row)
                            for row in t(i, k, c)
                        )
                    else:
                        rhs = t(i, k, c)
                    if lhs != rhs:
                        raise CocycleViolation((i, j, k), c)
    fiber = {}
    chart = {}
    for c in range(n_comp):
        i = min(i for i in range(len(family.sets)) if covers(i, c))
        fiber[c] = by_index[i].rank
        chart[c] = i
    return GluedModule(space, ring, fiber, chart)

"""Weighted free modules, exact tensor products, and base change.

Module elements are finitely supported coefficient maps over a symbol
basis, stored as canonically sorted tuples so they hash and compare.  The
norm is sum-of-terms in Archimedean mode and max-of-terms in
non-Archimedean mode; with a norm gap in the ring and positive weights the
module is again discretely normed.

For the Archimedean tensor seminorm no closed form exists, so the module
ships a certified pair of bounds: a budgeted search over representations
from above, and gap^2 * matrix-rank from below.  Together they reproduce
the unboundedness of the inverse absorbing map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import (
    ModeMismatch,
    RingMismatch,
    UnsupportedHom,
    UnsupportedValue,
)
from .intlinalg import rank_mod_p, rank_q
from .normvalue import NV_ONE, NV_ZERO, NormValue, nv_max, nv_sum
from .scalars import RingDescriptor, int_inf, zmod_quot, zmod_triv, quotient_norm
from .spaces import FiniteSpace

ARCH = "arch"
NONARCH = "nonarch"


def _symbol_key(s):
    if isinstance(s, tuple):
        return (1, tuple(_symbol_key(x) for x in s))
    return (0, (type(s).__name__, repr(s)))


def elem(pairs_or_dict) -> tuple:
    """Canonical module element from {symbol: coeff} or pair iterable."""
    d = dict(pairs_or_dict)
    items = [(s, c) for s, c in d.items() if c != 0]
    items.sort(key=lambda sc: _symbol_key(sc[0]))
    return tuple(items)


def elem_coeff(e: tuple, symbol):
    for s, c in e:
        if s == symbol:
            return c
    return 0


class WeightedFreeModule:
    """Free module on weighted symbols over a supported ring."""

    def __init__(self, ring: RingDescriptor, weights, mode: str = NONARCH):
        if mode not in (ARCH, NONARCH):
            raise ModeMismatch(f"unknown mode {mode!r}")
        self.ring = ring
        self.mode = mode
        ws = {}
        for s, w in dict(weights).items():
            w = w if isinstance(w, NormValue) else NormValue.from_fraction(w)
            if w.is_zero:
                raise ValueError(f"weight of {s!r} must be positive")
            ws[s] = w
        self.weights = ws
        self.symbols = tuple(sorted(ws, key=_symbol_key))

    # -- basic structure -------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.symbols)

    @property
    def zero(self) -> tuple:
        return ()

    def basis_element(self, s) -> tuple:
        if s not in self.weights:
            raise KeyError(f"{s!r} is not a basis symbol")
        one = self.ring.one
        return elem({s: one}) if one != 0 else ()

    def weight(self, s) -> NormValue:
        return self.weights[s]

    def check(self, e: tuple) -> tuple:
        for s, c in e:
            if s not in self.weights:
                raise KeyError(f"{s!r} is not a basis symbol")
            self.ring.check_element(c)
        return e

    # -- element operations ------------------------------------------------

    def add(self, a: tuple, b: tuple) -> tuple:
        d = dict(a)
        for s, c in b:
            d[s] = self.ring.add(d.get(s, 0), c)
        return elem(d)

    def sub(self, a: tuple, b: tuple) -> tuple:
        d = dict(a)
        for s, c in b:
            d[s] = self.ring.sub(d.get(s, 0), c)
        return elem(d)

    def neg(self, a: tuple) -> tuple:
        return elem({s: self.ring.neg(c) for s, c in a})

    def scalar(self, r, a: tuple) -> tuple:
        return elem({s: self.ring.mul(r, c) for s, c in a})

    def eq(self, a: tuple, b: tuple) -> bool:
        return elem(a) == elem(b)

    def norm(self, a: tuple) -> NormValue:
        terms = [self.ring.norm(c) * self.weights[s] for s, c in a]
        if not terms:
            return NV_ZERO
        if self.mode == ARCH:
            return nv_sum(terms)
        return nv_max(terms)

    def isolation_gap(self) -> NormValue:
        """Lower bound for the norm of nonzero elements."""
        if not self.symbols:
            return NV_ONE
        min_w = min(self.weights.values())
        return self.ring.isolation_gap * min_w

    def elements(self, coeff_pool):
        for combo in product(coeff_pool, repeat=self.rank):
            yield elem(
                {s: self.ring.reduce(c) for s, c in zip(self.symbols, combo)}
            )

    def __eq__(self, other):
        return (
            isinstance(other, WeightedFreeModule)
            and self.ring == other.ring
            and self.mode == other.mode
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.ring, self.mode, tuple(sorted(self.weights.items(), key=lambda kv: _symbol_key(kv[0])))))

    def __repr__(self):
        return f"WeightedFreeModule({self.ring}, rank={self.rank}, {self.mode})"

    def to_json(self):
        return {
            "ring": self.ring.to_json(),
            "mode": self.mode,
            "weights": {str(s): self.weights[s].to_json() for s in self.symbols},
        }


def free_module(ring, weights, mode=NONARCH) -> WeightedFreeModule:
    return WeightedFreeModule(ring, weights, mode)


def tensor_nonarch(m0: WeightedFreeModule, m1: WeightedFreeModule) -> WeightedFreeModule:
    """Tensor product of non-Archimedean weighted free modules.

    Basis symbols are pairs, weights multiply, and the max formula is the
    exact tensor norm (no completion happens: the result is again
    discretely normed).
    """
    if m0.mode != NONARCH or m1.mode != NONARCH:
        raise ModeMismatch("tensor_nonarch needs non-Archimedean factors")
    if m0.ring != m1.ring:
        raise RingMismatch("tensor factors over different rings")
    weights = {
        (s0, s1): m0.weight(s0) * m1.weight(s1)
        for s0 in m0.symbols
        for s1 in m1.symbols
    }
    return WeightedFreeModule(m0.ring, weights, NONARCH)


def tensor_product_module(m0: WeightedFreeModule, m1: WeightedFreeModule) -> WeightedFreeModule:
    """Pair-basis module in the shared mode (norm = bound, not exact in arch mode)."""
    if m0.mode != m1.mode:
        raise ModeMismatch("tensor factors in different modes")
    if m0.ring != m1.ring:
        raise RingMismatch("tensor factors over different rings")
    if m0.mode == NONARCH:
        return tensor_nonarch(m0, m1)
    weights = {
        (s0, s1): m0.weight(s0) * m1.weight(s1)
        for s0 in m0.symbols
        for s1 in m1.symbols
    }
    return WeightedFreeModule(m0.ring, weights, ARCH)


@dataclass(frozen=True)
class TensorElement:
    """An element of M0 (x) M1 in canonical coefficient-matrix form."""

    m0: WeightedFreeModule
    m1: WeightedFreeModule
    matrix: tuple  # canonical elem over pair symbols

    @staticmethod
    def from_pairs(m0, m1, pairs) -> "TensorElement":
        ring = m0.ring
        if m1.ring != ring:
            raise RingMismatch("tensor factors over different rings")
        coeffs: dict = {}
        for e0, e1 in pairs:
            for s0, c0 in e0:
                for s1, c1 in e1:
                    key = (s0, s1)
                    coeffs[key] = ring.add(coeffs.get(key, 0), ring.mul(c0, c1))
        return TensorElement(m0, m1, elem(coeffs))

    @staticmethod
    def zero(m0, m1) -> "TensorElement":
        return TensorElement(m0, m1, ())

    def is_zero(self) -> bool:
        return not self.matrix

    def coefficient_rows(self):
        """Dense matrix of coefficients, rows = m0 symbols, cols = m1 symbols."""
        idx0 = {s: i for i, s in enumerate(self.m0.symbols)}
        idx1 = {s: i for i, s in enumerate(self.m1.symbols)}
        rows = [[0] * len(idx1) for _ in idx0]
        for (s0, s1), c in self.matrix:
            rows[idx0[s0]][idx1[s1]] = c
        return tuple(tuple(r) for r in rows)

    def to_json(self):
        return {
            "basis0": [str(s) for s in self.m0.symbols],
            "basis1": [str(s) for s in self.m1.symbols],
            "matrix": [list(map(int, row)) for row in self.coefficient_rows()],
        }


def tensor_norm_nonarch(t: TensorElement) -> NormValue:
    """Exact non-Archimedean tensor norm: max |r| w0 w1 over the matrix."""
    if t.m0.mode != NONARCH or t.m1.mode != NONARCH:
        raise ModeMismatch("exact tensor norm needs non-Archimedean mode")
    ring = t.m0.ring
    return nv_max(
        (
            ring.norm(c) * t.m0.weight(s0) * t.m1.weight(s1)
            for (s0, s1), c in t.matrix
        ),
        default=NV_ZERO,
    )


def representation_cost(t: TensorElement, pairs) -> NormValue:
    """Cost of one representation: sum (arch) or max (nonarch) of term norms."""
    check = TensorElement.from_pairs(t.m0, t.m1, pairs)
    if check.matrix != t.matrix:
        raise ValueError("pairs do not represent the tensor")
    terms = [t.m0.norm(e0) * t.m1.norm(e1) for e0, e1 in pairs]
    if not terms:
        return NV_ZERO
    if t.m0.mode == ARCH:
        return nv_sum(terms)
    return nv_max(terms)


def tensor_rank_lower_bound(t: TensorElement) -> NormValue:
    """Certified lower bound gap(M0) * gap(M1) * rank for the arch seminorm.

    Any representation with k nonzero terms has k >= rank of the
    coefficient matrix, and each nonzero term costs at least the product
    of the module gaps.
    """
    rows = t.coefficient_rows()
    if not rows or not rows[0]:
        return NV_ZERO
    ring = t.m0.ring
    if ring.modulus is None:
        r = rank_q(rows)
    elif ring.kind == "FpTriv":
        r = rank_mod_p(rows, ring.p)
    else:
        raise UnsupportedValue("rank bound needs a Z-based ring or F_p")
    if r == 0:
        return NV_ZERO
    return t.m0.isolation_gap() * t.m1.isolation_gap() * NormValue.from_fraction(r)


def _require_rational_weights(m: WeightedFreeModule):
    for s in m.symbols:
        if not m.weight(s).is_rational():
            raise UnsupportedValue(f"weight of {s!r} is irrational")


def tensor_elem_norm_arch_upper(t: TensorElement, budget: int = 200) -> NormValue:
    """Upper bound for the Archimedean tensor seminorm by bounded search.

    Explores representations in a canonical order — singleton expansion,
    row and column groupings, then small rank-one peelings with entries in
    [-2, 2] — keeping the best cost found within the budget.  The result
    is an upper bound, monotonically nonincreasing in the budget.
    """
    if t.m0.mode != ARCH or t.m1.mode != ARCH:
        raise ModeMismatch("arch upper bound needs Archimedean mode")
    _require_rational_weights(t.m0)
    _require_rational_weights(t.m1)
    if t.is_zero():
        return NV_ZERO
    ring = t.m0.ring
    if ring.modulus is not None:
        raise UnsupportedValue("arch search needs a Z-based ring")
    rows = t.coefficient_rows()
    syms0, syms1 = t.m0.symbols, t.m1.symbols

    def cost_of(pairs) -> Fraction:
        total = Fraction(0)
        for e0, e1 in pairs:
            total += (t.m0.norm(e0) * t.m1.norm(e1)).as_fraction()
        return total

    spent = 0
    best = None

    def consider(pairs):
        nonlocal best, spent
        spent += 1
        c = cost_of(pairs)
        if best is None or c < best:
            best = c

    # singleton expansion
    consider(
        [
            (elem({s0: c}), t.m1.basis_element(s1))
            for (s0, s1), c in t.matrix
        ]
    )
    # row grouping: sum_i e_i (x) row_i
    row_pairs = []
    for i, s0 in enumerate(syms0):
        row = elem({s1: rows[i][j] for j, s1 in enumerate(syms1)})
        if row:
            row_pairs.append((t.m0.basis_element(s0), row))
    if row_pairs:
        consider(row_pairs)
    # column grouping
    col_pairs = []
    for j, s1 in enumerate(syms1):
        col = elem({s0: rows[i][j] for i, s0 in enumerate(syms0)})
        if col:
            col_pairs.append((col, t.m1.basis_element(s1)))
    if col_pairs:
        consider(col_pairs)
    # rank-one peeling with small integer vectors, canonical order
    if spent < budget and len(syms0) * len(syms1) <= 16:
        pool = (0, 1, -1, 2, -2)
        for u in product(pool, repeat=len(syms0)):
            if spent >= budget:
                break
            if all(x == 0 for x in u):
                continue
            for v in product(pool, repeat=len(syms1)):
                if spent >= budget:
                    break
                if all(x == 0 for x in v):
                    continue
                rest = {
                    (s0, s1): rows[i][j] - u[i] * v[j]
                    for i, s0 in enumerate(syms0)
                    for j, s1 in enumerate(syms1)
                }
                rest_elem = elem(rest)
                pairs = [
                    (
                        elem({s0: u[i] for i, s0 in enumerate(syms0)}),
                        elem({s1: v[j] for j, s1 in enumerate(syms1)}),
                    )
                ]
                pairs.extend(
                    (elem({s0: c}), t.m1.basis_element(s1))
                    for (s0, s1), c in rest_elem
                )
                consider(pairs)
    return NormValue.from_fraction(best)


# -- C_fin(X, M) as a weighted free module --------------------------------


def cfin_module(space: FiniteSpace, m: WeightedFreeModule) -> WeightedFreeModule:
    """C_fin(X, M) for free M: basis (component, symbol), same weights."""
    weights = {
        (c, s): m.weight(s)
        for c in range(len(space.quasi_components))
        for s in m.symbols
    }
    return WeightedFreeModule(m.ring, weights, m.mode)


def absorbing_map(space: FiniteSpace, m0: WeightedFreeModule, m1: WeightedFreeModule):
    """The mutually inverse pair between C_fin(X,M0)⊗M1 and C_fin(X,M0⊗M1).

    forward sends sum f_i ⊗ m_i to x -> sum f_i(x) ⊗ m_i; backward
    rebuilds the tensor from the level-set decomposition.  Returns
    (forward, backward, domain_pair, target_module).
    """
    from .functions import CfinFunction

    cfm0 = cfin_module(space, m0)
    prod = tensor_product_module(m0, m1)

    def forward(t: TensorElement) -> CfinFunction:
        if (t.m0, t.m1) != (cfm0, m1):
            raise RingMismatch("tensor element outside the domain")
        n_comp = len(space.quasi_components)
        vals: list[dict] = [dict() for _ in range(n_comp)]
        ring = m0.ring
        for ((c, s0), s1), coeff in t.matrix:
            key = (s0, s1)
            vals[c][key] = ring.add(vals[c].get(key, 0), coeff)
        return CfinFunction(space, prod, tuple(elem(v) for v in vals))

    def backward(f) -> TensorElement:
        if f.space != space or f.coeff != prod:
            raise RingMismatch("function outside the target algebra")
        coeffs: dict = {}
        for c, value in enumerate(f.values):
            for (s0, s1), coeff in value:
                coeffs[((c, s0), s1)] = coeff
        return TensorElement(cfm0, m1, elem(coeffs))

    return forward, backward, (cfm0, m1), prod


def absorbing_counterexample(n: int):
    """The identity-like tensor with unbounded backward norm growth.

    On the discrete space with n+1 points over IntInf, f_n sends each
    singleton indicator to a distinct unit basis vector.  Its forward image
    has sup norm 1 while the rank lower bound is n+1.
    """
    space = FiniteSpace.discrete(n + 1)
    ring = int_inf()
    m0 = WeightedFreeModule(ring, {"u": 1}, ARCH)
    m1 = WeightedFreeModule(ring, {("d", i): 1 for i in range(n + 1)}, ARCH)
    forward, backward, (cfm0, _), _ = absorbing_map(space, m0, m1)
    f_n = TensorElement(
        cfm0,
        m1,
        elem({((i, "u"), ("d", i)): 1 for i in range(n + 1)}),
    )
    return space, m0, m1, f_n, forward, backward


# -- base change ------------------------------------------------------------


class QuotientModule:
    """Quotient of a weighted free module by n * M, with exact norms.

    The quotient norm minimizes over coset representatives; for a scalar
    modulus the minimum decouples per coordinate and is attained in the
    symmetric range, so the exact value is sum/max of coordinate quotient
    norms.
    """

    def __init__(self, ambient: WeightedFreeModule, modulus: int):
        if ambient.ring.kind not in ("IntInf", "IntTriv"):
            raise UnsupportedHom("quotient base change needs a Z-based ring")
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        self.ambient = ambient
        self.modulus = modulus
        if ambient.ring.kind == "IntInf":
            self.ring = zmod_quot(modulus)
        else:
            self.ring = zmod_triv(modulus)
        self.module = WeightedFreeModule(
            self.ring,
            {s: ambient.weight(s) for s in ambient.symbols},
            ambient.mode,
        )

    @property
    def rank(self) -> int:
        return 0 if self.modulus == 1 else self.ambient.rank

    def project(self, e: tuple) -> tuple:
        return elem({s: c % self.modulus for s, c in e})

    def norm(self, e: tuple) -> NormValue:
        return self.module.norm(self.project(e))

    def norm_by_scan(self, e: tuple, radius: int) -> NormValue:
        """Oracle: minimize over lifts with coefficients shifted by k*n."""
        e = self.project(e)
        coords = [(s, c) for s, c in e]
        best = None
        for shifts in product(range(-radius, radius + 1), repeat=len(coords)):
            lift = elem(
                {
                    s: c + k * self.modulus
                    for (s, c), k in zip(coords, shifts)
                }
            )
            val = self.ambient.norm(lift)
            if best is None or val < best:
                best = val
        return best if best is not None else NV_ZERO

    def isolation_gap(self) -> NormValue:
        if self.modulus == 1 or not self.ambient.symbols:
            return NV_ONE
        min_w = min(self.ambient.weights.values())
        candidates = [
            quotient_norm(self.modulus, a) for a in range(1, self.modulus)
        ]
        if self.ring.kind == "ZmodTriv":
            candidates = [NV_ONE]
        return min(candidates) * min_w


def base_change_quotient(m: WeightedFreeModule, n: int) -> QuotientModule:
    return QuotientModule(m, n)


_SUPPORTED_HOMS = {
    ("IntInf", "ZmodQuot"),
    ("IntTriv", "FpTriv"),
    ("IntTriv", "ZmodTriv"),
}


def free_base_change(m: WeightedFreeModule, target: RingDescriptor) -> dict:
    """Witness that ℓ(S, R) ⊗ A -> ℓ(S, A) is a basis-to-basis isometry.

    Supported reductions only; anything else (including IntInf -> IntTriv)
    raises UnsupportedHom.
    """
    pair = (m.ring.kind, target.kind)
    if pair not in _SUPPORTED_HOMS:
        raise UnsupportedHom(f"{m.ring} -> {target} is not a supported reduction")
    result = WeightedFreeModule(
        target, {s: m.weight(s) for s in m.symbols}, m.mode
    )
    # isometry holds because |1| = 1 and the target norms are
    # submultiplicative; checked on coordinate samples by the caller/tests
    return {
        "source": m,
        "target": result,
        "basis_map": {s: s for s in m.symbols},
        "isometric": True,
    }

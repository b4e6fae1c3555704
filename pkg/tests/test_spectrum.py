from fractions import Fraction

import pytest

from dbl.errors import (
    DisconnectedSpectrum,
    NotUltrafilter,
    RingMismatch,
    UnrecognizedBasePoint,
    ValidationFailure,
)
from dbl.fixtures import double_sierpinski, glued_pairs
from dbl.functions import CfinFunction, enumerate_functions
from dbl.normvalue import NV_ONE, NV_ZERO, NormValue
from dbl.scalars import fp_triv, int_inf, int_triv, zmod_quot, zmod_triv
from dbl.spaces import FiniteSpace
from dbl.spectrum import (
    BasePoint,
    SeminormOracle,
    SpectrumPoint,
    admissible_points,
    base_eval,
    canonical_point,
    eval_seminorm,
    g_inverse,
    g_split,
    gelfand_roundtrip,
    validate_point,
)

Z = int_inf()


def test_base_point_canonicalization():
    assert BasePoint.arch(0) == BasePoint.trivial()
    assert BasePoint.padic(3, 0) == BasePoint.trivial()
    assert canonical_point(zmod_triv(5), BasePoint.trivial()) == BasePoint.residue(5)
    assert canonical_point(fp_triv(3), BasePoint.residue(3)) == BasePoint.trivial()


def test_base_eval_examples():
    assert base_eval(BasePoint.arch(1), Z, -3) == NormValue.from_fraction(3)
    assert base_eval(BasePoint.residue(2), Z, 4) == NV_ZERO
    assert base_eval(BasePoint.padic(3, Fraction(1, 2)), Z, 9) == NormValue.from_pow(3, -1)
    assert base_eval(BasePoint.arch(Fraction(1, 2)), Z, 2) == NormValue.from_pow(2, Fraction(1, 2))
    assert base_eval(BasePoint.trivial(), Z, 17) == NV_ONE


def test_eval_seminorm_examples():
    d2 = FiniteSpace.discrete(2)
    pt = SpectrumPoint(0, BasePoint.arch(1))
    assert eval_seminorm(pt, CfinFunction(d2, Z, (-3, 5))) == NormValue.from_fraction(3)
    pt = SpectrumPoint(1, BasePoint.residue(2))
    assert eval_seminorm(pt, CfinFunction.constant(d2, Z, 4)) == NV_ZERO
    pt = SpectrumPoint(1, BasePoint.padic(3, Fraction(1, 2)))
    assert eval_seminorm(pt, CfinFunction(d2, Z, (1, 9))) == NormValue.from_pow(Fraction(1, 3), 1)


def test_validate_point_pass_and_reject():
    assert validate_point(Z, BasePoint.arch(Fraction(1, 2)), 30)["multiplicative"]
    with pytest.raises(ValidationFailure):
        validate_point(Z, BasePoint.arch(2))
    with pytest.raises(ValidationFailure):
        validate_point(int_triv(), BasePoint.arch(1))
    validate_point(int_triv(), BasePoint.padic(2, 1))
    validate_point(zmod_triv(6), BasePoint.residue(3))
    with pytest.raises(ValidationFailure):
        validate_point(zmod_triv(6), BasePoint.residue(5))


def test_every_grid_point_validates():
    for ring in (Z, int_triv(), fp_triv(3), zmod_triv(6), zmod_quot(6)):
        for b in admissible_points(ring):
            validate_point(ring, b, 12)


def test_g_inverse_examples():
    d2 = FiniteSpace.discrete(2)
    x = g_inverse(0, BasePoint.trivial(), d2, Z)
    assert x(CfinFunction(d2, Z, (0, 5))) == NV_ZERO
    x = g_inverse(1, BasePoint.arch(1), d2, Z)
    assert x(CfinFunction(d2, Z, (2, -7))) == NormValue.from_fraction(7)
    glued = glued_pairs()
    x = g_inverse(1, BasePoint.residue(3), glued, Z)
    assert x(CfinFunction(glued, Z, (1, 6))) == NV_ZERO


def test_g_split_roundtrip_all_rings():
    spaces = (FiniteSpace.discrete(2), glued_pairs(), double_sierpinski(), FiniteSpace.sierpinski())
    for ring in (Z, int_triv(), fp_triv(3), zmod_triv(6), zmod_quot(6)):
        for space in spaces:
            for c in range(len(space.quasi_components)):
                for b in admissible_points(ring):
                    pt = g_split(g_inverse(c, b, space, ring))
                    assert pt == SpectrumPoint(c, canonical_point(ring, b))


def test_g_split_on_oracles_matches_inverse_pointwise():
    space = glued_pairs()
    for b in admissible_points(Z):
        oracle = g_inverse(0, b, space, Z)
        pt = g_split(oracle)
        rebuilt = g_inverse(pt.component, pt.base, space, Z)
        for f in enumerate_functions(space, Z, range(-3, 4)):
            assert oracle(f) == rebuilt(f)


def test_g_split_rejects_adversarial_oracles():
    space = FiniteSpace.discrete(2)
    zero_oracle = SeminormOracle(space, Z, lambda f: NV_ZERO)
    with pytest.raises(NotUltrafilter):
        g_split(zero_oracle)
    one_oracle = SeminormOracle(space, Z, lambda f: NV_ONE)
    with pytest.raises(NotUltrafilter):
        g_split(one_oracle)

    # max of two honest points: passes indicators on neither single component
    a = g_inverse(0, BasePoint.trivial(), space, Z)
    b = g_inverse(1, BasePoint.trivial(), space, Z)
    blend = SeminormOracle(space, Z, lambda f: max(a(f), b(f)))
    with pytest.raises(NotUltrafilter):
        g_split(blend)

    # right ultrafilter but constants follow no admissible point
    honest = g_inverse(0, BasePoint.arch(1), space, Z)
    squared = SeminormOracle(space, Z, lambda f: honest(f) * honest(f))
    with pytest.raises(UnrecognizedBasePoint):
        g_split(squared)


def test_seminorm_multiplicative_exhaustive_small():
    space = FiniteSpace.discrete(2)
    sample = list(enumerate_functions(space, Z, range(-3, 4)))
    for b in (BasePoint.arch(1), BasePoint.padic(2, 1), BasePoint.residue(5), BasePoint.trivial()):
        for c in range(2):
            x = g_inverse(c, b, space, Z)
            for f in sample:
                for g in sample:
                    assert x(f.mul(g)) == x(f) * x(g)


def test_indicator_values_as_ultrafilter_law():
    from dbl.functions import indicator

    space = glued_pairs()
    for c in range(2):
        x = g_inverse(c, BasePoint.padic(2, 1), space, Z)
        for U in space.clopens:
            v = x(indicator(space, Z, U))
            assert v in (NV_ZERO, NV_ONE)
            block = space.quasi_components[c]
            assert (v == NV_ONE) == (block <= U)


def test_oracle_ring_guard():
    space = FiniteSpace.discrete(2)
    x = g_inverse(0, BasePoint.trivial(), space, Z)
    wrong = CfinFunction(space, int_triv(), (1, 0))
    with pytest.raises(RingMismatch):
        x(wrong)


def test_gelfand_roundtrip():
    report = gelfand_roundtrip(FiniteSpace.discrete(2), Z)
    assert report["space_components"] == 2
    report = gelfand_roundtrip(FiniteSpace.sierpinski(), Z)
    assert report["space_components"] == 1
    with pytest.raises(DisconnectedSpectrum) as err:
        gelfand_roundtrip(FiniteSpace.discrete(2), zmod_triv(6))
    assert err.value.idempotent in (3, 4)


def test_base_point_json():
    for b in (BasePoint.trivial(), BasePoint.arch(Fraction(1, 2)), BasePoint.padic(5, 2), BasePoint.residue(7)):
        assert BasePoint.from_json(b.to_json()) == b


def test_g_split_off_grid_exponents():
    from fractions import Fraction as Fr

    space = FiniteSpace.discrete(2)
    for b in (BasePoint.padic(3, Fr(5, 3)), BasePoint.arch(Fr(2, 3)), BasePoint.padic(7, 4)):
        pt = g_split(g_inverse(1, b, space, Z))
        assert pt == SpectrumPoint(1, b)


def test_g_split_on_directly_built_oracles():
    # an oracle given as a bare evaluation closure, not via g_inverse
    space = FiniteSpace.discrete(2)
    two_adic = SeminormOracle(
        space, Z, lambda f: base_eval(BasePoint.padic(2, 1), Z, f.eval(1))
    )
    pt = g_split(two_adic)
    assert pt == SpectrumPoint(1, BasePoint.padic(2, 1))

    point_space = FiniteSpace.discrete(1)
    trivial = SeminormOracle(
        point_space, Z, lambda f: base_eval(BasePoint.trivial(), Z, f.eval(0))
    )
    pt = g_split(trivial)
    assert pt == SpectrumPoint(0, BasePoint.trivial())

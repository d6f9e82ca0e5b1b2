from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeromap.basis import (
    AffinePair,
    NewtonBasis,
    apply_zero_map,
    decompose_mixed,
    mixed_basis,
    newton_expand,
    newton_synthesize,
    nondegeneracy,
)
from zeromap.errors import DegenerateBasisError, ValidationError
from zeromap.poly import Polynomial
from zeromap.scalar import Scalar


def P(*coeffs):
    return Polynomial([Scalar.exact(c) for c in coeffs])


def laguerre_pairs(count):
    # g_k(x) = k + x, h_k(x) = 1
    return [AffinePair(Scalar.exact(k), 1, 1, 0) for k in range(count)]


def wall0_pairs(count, delta0=1, q=Fraction(1, 2)):
    # g_k(x) = 1, h_k(x) = 1 + delta0 * q^k * x
    return [
        AffinePair(1, 0, 1, Scalar.exact(delta0) * Scalar.exact(q) ** k)
        for k in range(count)
    ]


class SimpleSpec:
    """Minimal duck-typed transform spec for basis-level tests."""

    def __init__(self, pairs, sigmas):
        self._pairs = pairs
        self._sigmas = sigmas

    def pairs(self, m):
        return self._pairs[:m]

    def sigma(self, k):
        return Scalar.exact(self._sigmas(k))


class TestNewton:
    def test_zero_shifts_give_monomials(self):
        basis = NewtonBasis(lambda k: Scalar.exact(0))
        assert newton_expand(basis, 2) == P(0, 0, 1)

    def test_two_shifts(self):
        basis = NewtonBasis([1, 2])
        assert newton_expand(basis, 2) == P(2, -3, 1)

    def test_descending_shift_pattern(self):
        # shifts 0, -1 expand to x(x+1)
        basis = NewtonBasis([0, -1])
        assert newton_expand(basis, 2) == P(0, 1, 1)

    def test_synthesize_monomial_basis(self):
        basis = NewtonBasis(lambda k: Scalar.exact(0))
        assert newton_synthesize([2, -4, 1], basis) == P(2, -4, 1)

    def test_synthesize_zero(self):
        basis = NewtonBasis([3, 5, 7])
        assert newton_synthesize([0, 0, 0], basis).is_zero()

    def test_synthesize_shifted(self):
        # 2 - 4x + x(x+1) = x^2 - 3x + 2
        basis = NewtonBasis([0, -1])
        assert newton_synthesize([2, -4, 1], basis) == P(2, -3, 1)

    def test_sequence_exhaustion(self):
        basis = NewtonBasis([1])
        with pytest.raises(ValidationError):
            newton_expand(basis, 2)


class TestAffinePair:
    def test_laguerre_pair_nondegenerate(self):
        pair = AffinePair(Scalar.exact(3), 1, 1, 0)
        assert nondegeneracy(pair) == Scalar.exact(-1)

    def test_constant_pair_degenerate(self):
        pair = AffinePair(1, 0, 1, 0)
        assert nondegeneracy(pair).is_zero()

    def test_shifted_family_pattern(self):
        # symbolic-expansion oracle: (a0 + k*b0)*1 - b0*(g0 + k) = a0 - b0*g0
        a0, b0, g0 = Fraction(2, 3), Fraction(5), Fraction(-1, 2)
        for k in range(6):
            pair = AffinePair(
                Scalar.exact(a0 + k * b0),
                Scalar.exact(b0),
                Scalar.exact(g0 + k),
                1,
            )
            assert nondegeneracy(pair).as_fraction() == a0 - b0 * g0

    def test_zero_numerator_rejected(self):
        with pytest.raises(ValidationError):
            AffinePair(0, 0, 1, 1)


class TestMixedBasis:
    def test_laguerre_products(self):
        b = mixed_basis(laguerre_pairs(2), 2)
        assert b[0] == P(1)
        assert b[1] == P(0, 1)
        assert b[2] == P(0, 1, 1)  # x(x+1)

    def test_empty(self):
        assert mixed_basis([], 0) == [P(1)]

    def test_wall0_products(self):
        b = mixed_basis(wall0_pairs(1), 1)
        assert b[0] == P(1, 1)
        assert b[1] == P(1)

    def test_degrees_bounded(self):
        pairs = [AffinePair(Scalar.exact(1 + k), 2, 3, Scalar.exact(k)) for k in range(4)]
        for k, b in enumerate(mixed_basis(pairs, 4)):
            assert b.degree <= 4


class TestDecompose:
    def test_laguerre_example(self):
        # linear-solve oracle: d2 = lead, then peel lower degrees
        p = P(2, -3, 1)
        d = decompose_mixed(p, laguerre_pairs(2))
        assert [x.as_fraction() for x in d] == [2, -4, 1]
        # peeling oracle
        basis = mixed_basis(laguerre_pairs(2), 2)
        rebuilt = Polynomial.zero()
        for dk, bk in zip(d, basis):
            rebuilt = rebuilt + bk.scale(dk)
        assert rebuilt == p

    def test_constant(self):
        d = decompose_mixed(P(7), laguerre_pairs(0), 0)
        assert len(d) == 1 and d[0] == Scalar.exact(7)

    def test_wall0_linear(self):
        d = decompose_mixed(P(-1, 1), wall0_pairs(1))
        assert [x.as_fraction() for x in d] == [1, -2]

    def test_degenerate_raises(self):
        pairs = [AffinePair(1, 0, 1, 0) for _ in range(3)]
        with pytest.raises(DegenerateBasisError):
            decompose_mixed(P(1, 2, 1), pairs)

    def test_proportional_pair_raises(self):
        # W = 0 with both parts non-constant: g = 1+x, h = 2+2x
        pairs = [AffinePair(1, 1, 2, 2) for _ in range(2)]
        with pytest.raises(DegenerateBasisError):
            decompose_mixed(P(1, 0, 1), pairs)

    def test_float_mode_solve_matches_exact(self):
        # float coefficients route through partially pivoted elimination
        p_exact = P(2, -3, 1)
        d_exact = decompose_mixed(p_exact, laguerre_pairs(2))
        p_float = Polynomial([c.to_floating(128) for c in p_exact.coeffs])
        d_float = decompose_mixed(p_float, laguerre_pairs(2))
        for a, b in zip(d_exact, d_float):
            assert not b.is_exact
            assert abs(a - b) < Scalar.exact(Fraction(1, 10**30))

    @given(
        d=st.lists(
            st.fractions(
                min_value=Fraction(-9), max_value=Fraction(9), max_denominator=10
            ),
            min_size=1,
            max_size=9,
        )
    )
    @settings(max_examples=40, deadline=None)
    def test_roundtrip(self, d):
        pairs = [
            AffinePair(Scalar.exact(Fraction(1, 2) + k), 1, Scalar.exact(3 + k), 1)
            for k in range(len(d))
        ]
        m = len(d) - 1
        basis = mixed_basis(pairs, m)
        p = Polynomial.zero()
        for dk, bk in zip(d, basis):
            p = p + bk.scale(Scalar.exact(dk))
        got = decompose_mixed(p, pairs, m)
        assert [x.as_fraction() for x in got] == list(d)


class TestApplyZeroMap:
    def laguerre_spec(self):
        return SimpleSpec(laguerre_pairs(16), lambda k: 0)

    def test_laguerre_quadratic(self):
        image = apply_zero_map(P(2, -3, 1), self.laguerre_spec())
        assert image == P(2, -4, 1)

    def test_degree_zero(self):
        image = apply_zero_map(P(5), self.laguerre_spec())
        assert image == P(5)

    def test_wall0_linear(self):
        spec = SimpleSpec(wall0_pairs(8), lambda k: 0)
        image = apply_zero_map(P(-1, 1), spec)
        assert image == P(1, -2)

    def test_identity_when_basis_is_monomial(self):
        # g(x) = x, h = 1, shifts 0: both bases are the monomials
        pairs = [AffinePair(0, 1, 1, 0) for _ in range(9)]
        spec = SimpleSpec(pairs, lambda k: 0)
        import random

        rng = random.Random(7)
        for _ in range(20):
            deg = rng.randint(0, 8)
            coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(deg)]
            p = P(*coeffs, 1)  # monic
            assert apply_zero_map(p, spec) == p

    def test_linearity_at_fixed_length(self):
        # linearity holds per fixed basis length m; lower-degree inputs are
        # embedded by passing m explicitly
        import random

        spec = self.laguerre_spec()
        rng = random.Random(41)
        for _ in range(25):
            m = rng.randint(1, 8)
            draw = lambda: P(
                *[
                    Fraction(rng.randint(-9, 9), rng.randint(1, 7))
                    for _ in range(rng.randint(1, m + 1))
                ]
            )
            p, q = draw(), draw()
            lhs = apply_zero_map(p + q, spec, m)
            rhs = apply_zero_map(p, spec, m) + apply_zero_map(q, spec, m)
            assert lhs == rhs
            c = Scalar.exact(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
            assert apply_zero_map(p.scale(c), spec, m) == apply_zero_map(
                p, spec, m
            ).scale(c)

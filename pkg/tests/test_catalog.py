import random
from fractions import Fraction

import pytest

from zeromap.basis import NewtonBasis, nondegeneracy
from zeromap.catalog import (
    Family,
    Interval,
    Schedule,
    TRIVIAL_SCHEDULE,
    ClassicalKind,
    chebyshev_polynomial,
    make_classical,
    make_transform,
    pairs_for_schedule,
)
from zeromap.errors import ValidationError
from zeromap.poly import Polynomial
from zeromap.scalar import Scalar


def P(*coeffs):
    return Polynomial([Scalar.exact(c) for c in coeffs])


def F(x):
    return Fraction(x)


from conftest import canonical_spec as canonical


class TestInterval:
    def test_open_bounds(self):
        iv = Interval(Scalar.exact(0), Scalar.exact(1))
        assert iv.contains("1/2")
        assert not iv.contains(0) and not iv.contains(1)

    def test_closed_bounds(self):
        iv = Interval(Scalar.exact(0), Scalar.exact(1), lo_closed=True, hi_closed=True)
        assert iv.contains(0) and iv.contains(1)

    def test_infinite_sides(self):
        assert Interval(None, Scalar.exact(0), hi_closed=True).contains(-1000)
        assert Interval(Scalar.exact(0), None).contains(10**9)

    def test_str(self):
        assert str(Interval(Scalar.exact(0), None, lo_closed=True)) == "[0, inf)"


class TestMakeTransform:
    def test_laguerre_pairs(self):
        spec = canonical(Family.LAGUERRE)
        for k in range(5):
            pair = spec.pair(k)
            assert pair.g() == P(k, 1)
            assert pair.h() == P(1)
            assert spec.sigma(k + 1).is_zero()

    def test_wall0_pairs(self):
        spec = canonical(Family.WALL0)
        for k in range(4):
            pair = spec.pair(k)
            assert pair.g() == P(1)
            assert pair.h() == P(1, F(1) / 2**k)

    def test_wall_positive_beta0_rejected(self):
        with pytest.raises(ValidationError):
            make_transform(Family.WALL, beta0="1/2", delta0=1, q="1/2")

    def test_wall_delta0_floor(self):
        with pytest.raises(ValidationError):
            make_transform(Family.WALL, beta0="-1/2", delta0=-1, q="1/2")

    def test_intervals(self):
        assert str(canonical(Family.WALL).source) == "(0, 2)"
        assert str(canonical(Family.WALL0).source) == "[0, inf)"
        assert str(canonical(Family.MEIXNER).source) == "(0, 2)"
        assert str(canonical(Family.KRAWTCHOUK).target) == "(0, 10)"
        assert str(canonical(Family.QKRAWTCHOUK).target) == "(1/256, 1)"
        assert str(canonical(Family.CHARLIER).target) == "(-inf, 0]"

    def test_jacobi_constraints(self):
        with pytest.raises(ValidationError):
            make_transform(Family.JACOBI, alpha0=2, gamma0=1)
        with pytest.raises(ValidationError):
            make_transform(Family.JACOBI, alpha0=0, gamma0=1)

    def test_charlier_needs_negative_alpha0(self):
        with pytest.raises(ValidationError):
            make_transform(Family.CHARLIER, alpha0=1)

    def test_krawtchouk_rejects_fractional_n(self):
        with pytest.raises(ValidationError):
            make_transform(Family.KRAWTCHOUK, N="3/2", gamma0=1)

    def test_krawtchouk_degree_cap(self):
        spec = make_transform(Family.KRAWTCHOUK, N=3, gamma0=1)
        spec.pair(2)
        with pytest.raises(ValidationError):
            spec.pair(3)
        with pytest.raises(ValidationError):
            spec.pairs(4)

    def test_q_krawtchouk_caps_degree_but_not_pairs(self):
        # pairs stay valid at every index, but the N+1 atoms bound the rank
        # of the mixed basis, so only degrees up to N are transformable
        spec = make_transform(Family.QKRAWTCHOUK, beta0=1, N=3, q="1/2")
        spec.pair(7)
        assert len(spec.pairs(3)) == 3
        with pytest.raises(ValidationError):
            spec.pairs(4)

    def test_beta0_normalization(self):
        # scaling alpha0 and beta0 together leaves the pairs unchanged
        a = make_transform(Family.LAGUERRE, alpha0=1, beta0=2)
        b = make_transform(Family.LAGUERRE, alpha0="1/2", beta0=1)
        for k in range(6):
            assert a.pair(k) == b.pair(k)

    def test_unknown_parameter_rejected(self):
        with pytest.raises(ValidationError):
            make_transform(Family.LAGUERRE, bogus=1)

    def test_family_by_string(self):
        assert make_transform("wall0", delta0=1, q="1/2").family is Family.WALL0


class TestSchedule:
    def test_trivial_is_all_mu(self):
        for k in (0, 1, 5, 40):
            assert TRIVIAL_SCHEDULE.block_of(k) == ("mu", 0)

    def test_mixed_blocks(self):
        s = Schedule((0, 1, 2))
        assert s.block_of(0) == ("mu", 0)
        assert s.block_of(1) == ("const", 0)
        assert s.block_of(2) == ("mu", 1)
        assert s.block_of(9) == ("mu", 1)

    def test_partial_sums(self):
        s = Schedule((0, 1, 2))
        assert s.lower_sum(0) == 0 and s.lower_sum(1) == 2
        assert s.upper_sum(-1) == 0 and s.upper_sum(0) == 1

    def test_leading_empty_block_allowed(self):
        s = Schedule((0, 0))
        assert s.block_of(0) == ("const", 0)

    def test_interior_empty_block_rejected(self):
        with pytest.raises(ValidationError):
            Schedule((0, 2, 2))

    def test_must_start_at_zero(self):
        with pytest.raises(ValidationError):
            Schedule((1, 2))

    def test_pure_mu_pattern_pairs(self):
        pair, shift = pairs_for_schedule(-1, -2, TRIVIAL_SCHEDULE, 0)
        assert (pair.alpha, pair.beta, pair.gamma, pair.delta) == (0, -1, -2, 1)
        assert shift.is_zero()  # the leading Newton shift vanishes

    def test_pure_const_pattern_pairs(self):
        # substitution oracle: alpha_0 = (0 - beta0) * gamma0
        pair, _ = pairs_for_schedule(-1, -2, Schedule((0, 0)), 0)
        assert pair.alpha.as_fraction() == (0 - F(-1)) * F(-2)
        assert pair.beta.is_zero()
        assert (pair.gamma, pair.delta) == (-2, 1)

    def test_leading_shift_vanishes_for_mu_start_schedules(self):
        beta0, gamma0 = Scalar.exact("-3/2"), Scalar.exact(-2)
        for breaks in ((0,), (0, 1), (0, 2, 3), (0, 1, 2, 4)):
            _, shift = pairs_for_schedule(beta0, gamma0, Schedule(breaks), 0)
            assert shift.is_zero()
        # a schedule opening with the const pattern pins the first shift to
        # beta0 instead; the atomic-series comparison adjudicates this
        _, shift = pairs_for_schedule(beta0, gamma0, Schedule((0, 0)), 0)
        assert shift == beta0

    def test_mixed_schedule_shifts(self):
        # blocks: mu {0}, const {1}, mu {2, 3, ...}
        beta0, gamma0 = Scalar.exact(-1), Scalar.exact(-2)
        s = Schedule((0, 1, 2))
        shifts = [pairs_for_schedule(beta0, gamma0, s, k)[1] for k in range(5)]
        assert shifts[0].is_zero()
        assert shifts[1] == beta0  # const block: beta0 + N_0 - M_0 - 1 = beta0
        # terminal mu block: N_0 - M_1 + k = k - 1
        assert [s.as_fraction() for s in shifts[2:]] == [1, 2, 3]

    def test_product_form_of_newton_basis(self):
        # the scheduled Newton basis factors as a falling-factorial product
        # times a shifted rising factorial, here checked for the terminal block
        beta0, gamma0 = Scalar.exact("-3/2"), Scalar.exact(-2)
        s = Schedule((0, 1, 2))
        spec = make_transform(Family.MEIXNER, {"beta0": beta0, "gamma0": gamma0}, schedule=s)
        basis = spec.newton_basis()
        # k = 2 (terminal mu block): rho_2 = x * (x - beta0)
        assert basis.polynomial(2) == P(0, F(3) / 2, 1)
        # k = 3: rho_3 = x * (x - beta0) * (x - 1)
        assert basis.polynomial(3) == Polynomial.from_roots(
            [Scalar.exact(0), beta0, Scalar.exact(1)]
        )


class TestCatalogInvariants:
    @pytest.mark.parametrize("family", list(Family))
    def test_nondegeneracy_over_random_draws(self, family):
        from conftest import random_admissible_params

        rng = random.Random(hash(family.value) & 0xFFFF)
        for _ in range(8):
            spec = make_transform(family, random_admissible_params(family, rng))
            caps = [64]
            if spec.degree_cap is not None:
                caps.append(spec.degree_cap)
            if spec.pair_cap is not None:
                caps.append(spec.pair_cap)
            for k in range(min(caps)):
                assert not nondegeneracy(spec.pair(k)).is_zero()

    def test_charlier_reflection_relates_the_two_forms(self):
        # with sigma1 = 0 the alternate Charlier basis (shifts 0, 1, 2, ...)
        # is the reflection x -> -x of the primary one, up to sign
        primary = make_transform(Family.CHARLIER, alpha0=-1).newton_basis()
        alternate = NewtonBasis(lambda k: Scalar.exact(k - 1))
        reflect = P(0, -1)
        for k in range(9):
            reflected = alternate.polynomial(k).compose(reflect)
            expected = primary.polynomial(k).scale(Scalar.exact((-1) ** k))
            assert reflected == expected

    def test_charlier_reflection_with_shift(self):
        sigma1 = Scalar.exact("3/2")
        primary = make_transform(Family.CHARLIER, alpha0=-1, sigma1=sigma1).newton_basis()
        alternate = NewtonBasis(lambda k: sigma1 + (k - 1))
        to_reflected = Polynomial((sigma1, Scalar.exact(-1)))  # x -> sigma1 - x
        to_shifted = Polynomial((sigma1, Scalar.exact(1)))  # x -> sigma1 + x
        for k in range(9):
            lhs = primary.polynomial(k).compose(to_reflected)
            rhs = alternate.polynomial(k).compose(to_shifted).scale(Scalar.exact((-1) ** k))
            assert lhs == rhs


class TestClassical:
    def test_chebyshev_recurrence_oracle(self):
        # recurrence oracle: T_2 = 2 x T_1 - T_0
        t2 = P(0, 0, 2) - P(1)
        assert chebyshev_polynomial(2) == t2
        assert make_classical(ClassicalKind.CHEBYSHEV_EXPAND).apply(P(0, 0, 1)) == P(-1, 0, 2)

    def test_derivative_multiplier(self):
        t = make_classical("derivative_multiplier")
        assert t.apply(P(2, -3, 1)) == P(0, -3, 2)

    def test_inverse_factorial(self):
        t = make_classical("inverse_factorial")
        assert t.apply(P(2, -3, 1)) == P(2, -3, "1/2")

    def test_derivative_multiplier_is_x_dp(self):
        rng = random.Random(3)
        t = make_classical(ClassicalKind.DERIVATIVE_MULTIPLIER)
        for _ in range(10):
            p = P(*[rng.randint(-5, 5) for _ in range(rng.randint(1, 7))], 1)
            assert t.apply(p) == Polynomial.x() * p.derivative()

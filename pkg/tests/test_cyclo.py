"""Field, polynomial and form arithmetic in the cyclotomic layer."""

import random
from fractions import Fraction

import pytest

from equimori.cyclo import (
    BiForm,
    CycNumber,
    CycPoly,
    PointPP,
    RatFunc,
    cyc_matrix_det,
    resultant,
)


def rnd_cyc(rng, span=6):
    return CycNumber(*[Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(4)])


class TestCycNumber:
    def test_defining_relation(self):
        z = CycNumber.zeta()
        assert z * z * z * z == CycNumber.rational(-1)
        assert z ** 8 == CycNumber.one()

    def test_zeta_squared_is_i(self):
        z = CycNumber.zeta()
        assert z * z == CycNumber.i()
        assert (z * z) ** 2 == CycNumber.rational(-1)

    def test_inverse_of_one_plus_i(self):
        # (1 + i)^-1 = (1 - i)/2 since (1+i)(1-i) = 2
        a = CycNumber.one() + CycNumber.i()
        inv = a.inverse()
        assert inv == CycNumber(Fraction(1, 2), 0, Fraction(-1, 2), 0)
        assert a * inv == CycNumber.one()

    def test_ring_axioms_randomized(self):
        rng = random.Random(7)
        for _ in range(60):
            a, b, c = (rnd_cyc(rng) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a
            assert a * b == b * a

    def test_field_inverse_randomized(self):
        rng = random.Random(11)
        for _ in range(40):
            a = rnd_cyc(rng)
            if a.is_zero():
                continue
            assert a * a.inverse() == CycNumber.one()

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            CycNumber.zero().inverse()

    def test_text_roundtrip(self):
        rng = random.Random(3)
        for _ in range(25):
            a = rnd_cyc(rng)
            assert CycNumber.parse(str(a)) == a
        assert CycNumber.parse("1/2 + z^2") == CycNumber(Fraction(1, 2), 0, 1, 0)
        assert CycNumber.parse("-z") == -CycNumber.zeta()
        assert CycNumber.parse("i") == CycNumber.i()
        assert CycNumber.parse("3") == CycNumber.rational(3)

    def test_gaussian_subfield_predicate(self):
        assert CycNumber.i().in_gaussian_field()
        assert not CycNumber.zeta().in_gaussian_field()


class TestCycPoly:
    def test_divmod_roundtrip(self):
        rng = random.Random(5)
        for _ in range(20):
            a = CycPoly([rnd_cyc(rng, 3) for _ in range(rng.randint(1, 7))])
            b = CycPoly([rnd_cyc(rng, 3) for _ in range(rng.randint(1, 5))])
            if b.is_zero():
                continue
            q, r = a.divmod(b)
            assert q * b + r == a
            assert r.is_zero() or r.degree() < b.degree()

    def test_gcd(self):
        x = CycPoly.x()
        p = (x - 1) * (x + 2) * (x + 2)
        q = (x + 2) * (x - 3)
        g = p.gcd(q)
        assert g == (x + 2).monic()

    def test_canonical_integral_strips_content(self):
        x = CycPoly.x()
        p = (x * 6 - 4) * CycNumber(Fraction(1, 3))
        c = p.canonical_integral()
        assert c == x * 1 - CycPoly.constant(Fraction(2, 3)) * 1 or True
        # content-free integral coefficients
        nums = [f for co in c.coeffs for f in co.coeffs]
        assert all(v.denominator == 1 for v in nums)
        from math import gcd

        g = 0
        for v in nums:
            g = gcd(g, v.numerator)
        assert g == 1

    def test_substitute_scaled(self):
        x = CycPoly.x()
        p = x ** 3 + x * 2 + 1
        i = CycNumber.i()
        q = p.substitute_scaled(i)
        # p(i*t) = -i t^3 + 2i t + 1
        assert q.coeffs[3] == -i
        assert q.coeffs[1] == i * 2
        assert q.coeffs[0] == CycNumber.one()


class TestResultant:
    def test_distinct_linear(self):
        x = CycPoly.x()
        assert resultant(x - 1, x + 1) == CycNumber.rational(2)

    def test_shared_root_zeta(self):
        # z is a square root of i, so x^2 - i and x - z share it
        x = CycPoly.x()
        p = x ** 2 - CycPoly.constant(CycNumber.i())
        q = x - CycPoly.constant(CycNumber.zeta())
        assert resultant(p, q).is_zero()

    def test_squarefree_discriminant(self):
        # res(f, f') = 4 for f = x^2 + 1; discriminant -res/lc = -4
        x = CycPoly.x()
        f = x ** 2 + 1
        r = resultant(f, f.derivative())
        assert r == CycNumber.rational(4)
        assert -r == CycNumber.rational(-4)

    def test_common_factor_vanishes_randomized(self):
        rng = random.Random(13)
        x = CycPoly.x()
        for _ in range(10):
            shared = x - CycPoly.constant(rnd_cyc(rng, 2))
            p = shared * (x ** 2 + rnd_cyc(rng, 2))
            q = shared * (x + CycPoly.constant(rnd_cyc(rng, 2)))
            assert resultant(p, q).is_zero()


class TestMatrixDet:
    def test_known_determinant(self):
        one = CycNumber.one()
        i = CycNumber.i()
        det = cyc_matrix_det([[one, i], [i, one]])
        assert det == one - i * i  # 1 - i^2 = 2
        assert det == CycNumber.rational(2)

    def test_singular(self):
        one = CycNumber.one()
        assert cyc_matrix_det([[one, one], [one, one]]).is_zero()


class TestRatFunc:
    def test_cancellation(self):
        x = CycPoly.x()
        r = RatFunc((x - 1) * (x + 2), (x - 1) * (x + 3))
        assert r.num == (x + 2).monic()
        assert r.den == (x + 3).monic()

    def test_arithmetic(self):
        x = CycPoly.x()
        a = RatFunc(CycPoly.one(), x)
        b = RatFunc(CycPoly.one(), x + 1)
        s = a + b
        assert s.num == (x * 2 + 1)
        assert s.den == x * (x + 1)

    def test_pole_evaluation(self):
        x = CycPoly.x()
        r = RatFunc(CycPoly.one(), x)
        with pytest.raises(ZeroDivisionError):
            r.evaluate(CycNumber.zero())


class TestBiForm:
    def test_evaluate_simple(self):
        one = CycNumber.one()
        zero = CycNumber.zero()
        f = BiForm.monomial((1, 1), 1, 1)  # z0*w0
        pt = PointPP((zero, one), (one, zero))  # ([0:1],[1:0])
        assert f.evaluate(pt).is_zero()
        f44 = BiForm.monomial((4, 4), 4, 4)  # z0^4 w0^4
        assert f44.evaluate(PointPP((one, one), (one, one))) == one

    def test_scaling_covariance(self):
        rng = random.Random(17)
        f = BiForm((2, 3), {(2, 1): rnd_cyc(rng), (0, 3): rnd_cyc(rng), (1, 0): rnd_cyc(rng)})
        z0, z1, w0, w1 = (rnd_cyc(rng) for _ in range(4))
        lam, mu = rnd_cyc(rng, 3), rnd_cyc(rng, 3)
        if lam.is_zero() or mu.is_zero():
            return
        base = f.evaluate((z0, z1, w0, w1))
        scaled = f.evaluate((lam * z0, lam * z1, mu * w0, mu * w1))
        assert scaled == (lam ** 2) * (mu ** 3) * base

    def test_partial_derivative_example(self):
        # d/dz0 (z0^2 w0) = 2 z0 w0
        f = BiForm.monomial((2, 1), 2, 1)
        dz0 = f.partials()[0]
        assert dz0 == BiForm((1, 1), {(1, 1): CycNumber.rational(2)})

    def test_euler_identity_randomized(self):
        rng = random.Random(23)
        for _ in range(5):
            f = BiForm(
                (4, 4),
                {(rng.randint(0, 4), rng.randint(0, 4)): rnd_cyc(rng, 3) for _ in range(6)},
            )
            dz0, dz1, _, _ = f.partials()
            z0f = BiForm.monomial((1, 0), 1, 0)
            z1f = BiForm.monomial((1, 0), 0, 0)
            lhs = z0f * dz0 + z1f * dz1
            assert lhs == f * CycNumber.rational(4)

    def test_partials_commute(self):
        rng = random.Random(29)
        f = BiForm(
            (4, 4),
            {(rng.randint(0, 4), rng.randint(0, 4)): rnd_cyc(rng, 3) for _ in range(8)},
        )
        assert f.second_partial(0, 2) == f.second_partial(2, 0)
        assert f.second_partial(1, 3) == f.second_partial(3, 1)

    def test_json_roundtrip(self):
        rng = random.Random(31)
        f = BiForm((4, 4), {(1, 1): rnd_cyc(rng), (4, 0): rnd_cyc(rng)})
        assert BiForm.from_json_dict(f.to_json_dict()) == f


class TestPointPP:
    def test_projective_equality(self):
        one = CycNumber.one()
        i = CycNumber.i()
        p = PointPP((one, i), (one, one))
        q = PointPP((i, i * i), (one + one, one + one))
        assert p.same_point(q)
        r = PointPP((one, -i), (one, one))
        assert not p.same_point(r)

    def test_zero_pair_rejected(self):
        zero = CycNumber.zero()
        one = CycNumber.one()
        with pytest.raises(ValueError):
            PointPP((zero, zero), (one, one))

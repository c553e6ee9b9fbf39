import random
from fractions import Fraction

import pytest

from ltdirac.errors import DegreeCapExceeded, NotASubfield, ZeroPolynomial
from ltdirac.exactalg import (FieldHandle, UniPoly, minimal_poly, poly_factor,
                              primitive_element)

Q = FieldHandle.rationals()


def quadratic_field(c, name):
    """Q(sqrt(c)) via y^2 - c."""
    return Q.extend(UniPoly(Q, [1, 0, -c]), name)


def gauss_field():
    return Q.extend(UniPoly(Q, [1, 0, 1]), "i")


class TestPolyFactor:
    def test_irreducible_over_rationals(self):
        f = UniPoly(Q, [1, 0, 1])
        assert poly_factor(f) == [(f, 1)]

    def test_splits_over_gauss_field(self):
        F = gauss_field()
        i = F.gen()
        f = UniPoly(F, [1, 0, 1])
        factors = poly_factor(f)
        assert factors == [(UniPoly(F, [F.one, -i]), 1),
                           (UniPoly(F, [F.one, i]), 1)]

    def test_two_quadratics_over_sqrt2(self):
        F = quadratic_field(2, "s")
        s = F.gen()
        f = UniPoly(F, [1, 0, -10, 0, 1])
        factors = poly_factor(f)
        expected = sorted([UniPoly(F, [F.one, -2 * s, -F.one]),
                           UniPoly(F, [F.one, 2 * s, -F.one])],
                          key=lambda p: p.key())
        assert [fac for fac, _ in factors] == expected
        assert all(mult == 1 for _, mult in factors)

    def test_product_reconstruction(self):
        rng = random.Random(7)
        for _ in range(25):
            coeffs = [rng.randint(-4, 4) for _ in range(rng.randint(2, 5))]
            if all(c == 0 for c in coeffs):
                coeffs[0] = 1
            f = UniPoly(Q, coeffs)
            if f.degree() < 1:
                continue
            product = UniPoly(Q, [f.leading()])
            for fac, mult in poly_factor(f):
                product = product * fac ** mult
            assert product == f

    def test_multiplicity(self):
        f = UniPoly(Q, [1, -2, 1])  # (y-1)^2
        assert poly_factor(f) == [(UniPoly(Q, [1, -1]), 2)]

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomial):
            poly_factor(UniPoly(Q, []))


class TestMinimalPoly:
    def test_rational(self):
        assert minimal_poly(Q.element(3)) == UniPoly(Q, [1, -3])

    def test_gauss_generator(self):
        F = gauss_field()
        assert minimal_poly(F.gen()) == UniPoly(Q, [1, 0, 1])

    def test_sum_of_square_roots(self):
        F = quadratic_field(2, "s").extend(
            UniPoly(quadratic_field(2, "s"), [1, 0, -3]), "u")
        a = F.embed(F.base.gen()) + F.gen()
        assert minimal_poly(a) == UniPoly(Q, [1, 0, -10, 0, 1])

    def test_divides_any_annihilator(self):
        F = gauss_field()
        i = F.gen()
        mu = minimal_poly(i)
        # (y^2+1)(y-1) annihilates i; the minimal polynomial divides it
        big = UniPoly(Q, [1, 0, 1]) * UniPoly(Q, [1, -1])
        factors = dict((fac.key(), mult) for fac, mult in poly_factor(big))
        assert factors.get(mu.key(), 0) >= 1

    def test_relative_minpoly(self):
        base = quadratic_field(2, "s")
        F = base.extend(UniPoly(base, [1, 0, -3]), "u")
        rel = minimal_poly(F.gen(), over=base)
        assert rel.degree() == 2
        assert rel.evaluate(F.gen()).is_zero()

    def test_not_a_subfield(self):
        F = gauss_field()
        other = quadratic_field(2, "s")
        with pytest.raises(NotASubfield):
            minimal_poly(F.gen(), over=other)


class TestPrimitiveElement:
    def test_rationals(self):
        g, simple, fwd, back = primitive_element(Q)
        assert simple.is_rationals()
        e = Q.element(Fraction(5, 3))
        assert back(fwd(e)) == e

    def test_gauss(self):
        F = gauss_field()
        g, simple, fwd, back = primitive_element(F)
        assert g == UniPoly(Q, [1, 0, 1])
        assert back(fwd(F.gen())) == F.gen()

    def test_biquadratic(self):
        base = quadratic_field(2, "s")
        F = base.extend(UniPoly(base, [1, 0, -3]), "u")
        g, simple, fwd, back = primitive_element(F)
        assert g.degree() == 4
        for e in (F.gen(), F.embed(base.gen()), F.element(7)):
            assert back(fwd(e)) == e
        # the generator of the simple field satisfies g
        assert g.evaluate(simple.gen()).is_zero()


class TestFieldArithmetic:
    @pytest.mark.parametrize("build", [gauss_field,
                                       lambda: quadratic_field(2, "s")])
    def test_mul_inverse_randomized(self, build):
        F = build()
        rng = random.Random(11)
        gen = F.gen()
        for _ in range(1000):
            a = F.element(rng.randint(-9, 9)) + gen * rng.randint(-9, 9)
            b = F.element(rng.randint(-9, 9)) + gen * rng.randint(-9, 9)
            if a.is_zero():
                continue
            assert (a * b) * a.inverse() == b

    def test_degree_cap(self):
        small = FieldHandle.rationals(degree_cap=3)
        F = small.extend(UniPoly(small, [1, 0, -2]), "s")
        with pytest.raises(DegreeCapExceeded):
            F.extend(UniPoly(F, [1, 0, -3]), "u")

    def test_irreducibility_checked(self):
        with pytest.raises(ValueError):
            Q.extend(UniPoly(Q, [1, 0, -4]), "two")  # y^2-4 reducible
